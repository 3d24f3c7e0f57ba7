//! Bigram Markov model, n-gram tables and block entropy.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, SignInventory};
use crate::error::{Error, Result};

type RowSampler = (Vec<Symbol>, WeightedIndex<f64>);

pub const DEFAULT_MAX_BLOCK: usize = 6;

/// A state of the bigram chain: the two boundary markers or a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Begin,
    Sign(u32),
    End,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Begin => f.write_str("BEGIN"),
            Symbol::Sign(c) => write!(f, "{c}"),
            Symbol::End => f.write_str("END"),
        }
    }
}

/// Additively smoothed bigram model with boundary markers.
///
/// `P(b | a) = (count(a, b) + alpha) / (count(a, ·) + alpha * V)` where the
/// successors are every inventory code plus `END`, so `V = L + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionModel {
    codes: Vec<u32>,
    counts: BTreeMap<Symbol, BTreeMap<Symbol, u64>>,
    row_totals: BTreeMap<Symbol, u64>,
    alpha: f64,
}

impl TransitionModel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of possible successors of any state.
    pub fn successor_count(&self) -> usize {
        self.codes.len() + 1
    }

    pub fn count(&self, from: Symbol, to: Symbol) -> u64 {
        self.counts
            .get(&from)
            .and_then(|row| row.get(&to))
            .copied()
            .unwrap_or(0)
    }

    pub fn row_total(&self, from: Symbol) -> u64 {
        self.row_totals.get(&from).copied().unwrap_or(0)
    }

    /// Observed transitions as `(from, to, count)`, in symbol order.
    pub fn observed(&self) -> impl Iterator<Item = (Symbol, Symbol, u64)> + '_ {
        self.counts
            .iter()
            .flat_map(|(&a, row)| row.iter().map(move |(&b, &n)| (a, b, n)))
    }

    fn knows(&self, s: Symbol) -> bool {
        match s {
            Symbol::Sign(c) => self.codes.binary_search(&c).is_ok(),
            _ => true,
        }
    }

    /// All states that can be left: `BEGIN` and every code.
    pub fn states(&self) -> impl Iterator<Item = Symbol> + '_ {
        std::iter::once(Symbol::Begin).chain(self.codes.iter().map(|&c| Symbol::Sign(c)))
    }

    pub fn successors(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.codes
            .iter()
            .map(|&c| Symbol::Sign(c))
            .chain(std::iter::once(Symbol::End))
    }

    /// Whether the row of `from` is a distribution. Rows with no outgoing
    /// counts are undefined when `alpha == 0`.
    pub fn row_defined(&self, from: Symbol) -> bool {
        from != Symbol::End && (self.alpha > 0.0 || self.row_total(from) > 0)
    }

    pub fn probability(&self, from: Symbol, to: Symbol) -> Result<f64> {
        for s in [from, to] {
            if let Symbol::Sign(c) = s {
                if !self.knows(s) {
                    return Err(Error::UnknownCode(c));
                }
            }
        }
        if from == Symbol::End || to == Symbol::Begin {
            return Err(Error::Contract(format!("no transition {from} -> {to}")));
        }
        if !self.row_defined(from) {
            return Err(Error::UndefinedProbability {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        let num = self.count(from, to) as f64 + self.alpha;
        let den = self.row_total(from) as f64 + self.alpha * self.successor_count() as f64;
        Ok(num / den)
    }

    /// The full successor distribution of `from`, or `None` if undefined.
    pub fn row(&self, from: Symbol) -> Option<Vec<(Symbol, f64)>> {
        if !self.knows(from) || !self.row_defined(from) {
            return None;
        }
        Some(
            self.successors()
                .map(|to| (to, self.probability(from, to).expect("defined row")))
                .collect(),
        )
    }

    /// Natural-log probability of `BEGIN, signs..., END`.
    pub fn sequence_logprob(&self, signs: &[u32]) -> Result<f64> {
        if let Some(&c) = signs.iter().find(|&&c| !self.knows(Symbol::Sign(c))) {
            return Err(Error::UnknownCode(c));
        }
        let path: Vec<Symbol> = std::iter::once(Symbol::Begin)
            .chain(signs.iter().map(|&c| Symbol::Sign(c)))
            .chain(std::iter::once(Symbol::End))
            .collect();
        let mut total = 0.0;
        for w in path.windows(2) {
            let p = self.probability(w[0], w[1])?;
            if p == 0.0 {
                return Err(Error::UndefinedProbability {
                    from: w[0].to_string(),
                    to: w[1].to_string(),
                });
            }
            total += p.ln();
        }
        Ok(total)
    }
}

pub fn fit_bigram(c: &Corpus, inv: &SignInventory, alpha: f64) -> Result<TransitionModel> {
    if c.is_empty() {
        return Err(Error::Contract("cannot fit a bigram model to an empty corpus".into()));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Contract(format!("smoothing constant must be >= 0, got {alpha}")));
    }
    let mut counts: BTreeMap<Symbol, BTreeMap<Symbol, u64>> = BTreeMap::new();
    let mut row_totals: BTreeMap<Symbol, u64> = BTreeMap::new();
    for ins in &c.inscriptions {
        let mut prev = Symbol::Begin;
        for next in ins
            .signs
            .iter()
            .map(|&s| Symbol::Sign(s))
            .chain(std::iter::once(Symbol::End))
        {
            *counts.entry(prev).or_default().entry(next).or_default() += 1;
            *row_totals.entry(prev).or_default() += 1;
            prev = next;
        }
    }
    Ok(TransitionModel {
        codes: inv.codes().collect(),
        counts,
        row_totals,
        alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramTable {
    pub n: usize,
    pub counts: BTreeMap<Vec<u32>, u64>,
    pub total: u64,
}

impl NGramTable {
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }
}

/// Counts overlapping length-`n` windows inside each inscription.
pub fn ngram_counts(c: &Corpus, n: usize) -> Result<NGramTable> {
    if n < 1 {
        return Err(Error::Contract("n-gram length must be at least 1".into()));
    }
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut total = 0;
    for ins in &c.inscriptions {
        for w in ins.signs.windows(n) {
            *counts.entry(w.to_vec()).or_default() += 1;
            total += 1;
        }
    }
    Ok(NGramTable { n, counts, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Plugin,
    MillerMadow,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Plugin => "plugin",
            Estimator::MillerMadow => "miller_madow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `H_n / n`
    PerSymbol,
    /// `H_n`
    Raw,
}

/// Entropy in base `base` of the empirical distribution given by `counts`.
///
/// Miller-Madow adds `(K - 1) / (2 N ln base)` with `K` observed categories.
/// Returns `None` when the counts are all zero.
pub fn entropy_from_counts(
    counts: impl IntoIterator<Item = u64>,
    estimator: Estimator,
    base: usize,
) -> Option<f64> {
    let counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return None;
    }
    let n = total as f64;
    let ln_base = (base as f64).ln();
    let nats: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .fold(0.0, |acc, x| acc + x);
    let mut h = nats / ln_base;
    if estimator == Estimator::MillerMadow {
        h += (counts.len() as f64 - 1.0) / (2.0 * n * ln_base);
    }
    Some(h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPoint {
    pub block_size: usize,
    /// `H_n`, absent when the corpus has no block of this size.
    pub h_raw: Option<f64>,
}

impl EntropyPoint {
    pub fn h_per_symbol(&self) -> Option<f64> {
        self.h_raw.map(|h| h / self.block_size as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub points: Vec<EntropyPoint>,
    pub estimator: Estimator,
    pub normalization: Normalization,
    /// Alphabet size used as the logarithm base.
    pub base: usize,
}

impl EntropyProfile {
    /// Entropy for block size `n` under the profile's normalization.
    pub fn h(&self, n: usize) -> Option<f64> {
        let p = self.points.get(n.checked_sub(1)?)?;
        match self.normalization {
            Normalization::PerSymbol => p.h_per_symbol(),
            Normalization::Raw => p.h_raw,
        }
    }
}

/// Block entropies for block sizes `1..=n_max`, in base `base`.
pub fn block_entropy(
    c: &Corpus,
    n_max: usize,
    estimator: Estimator,
    normalization: Normalization,
    base: usize,
) -> Result<EntropyProfile> {
    if base < 2 {
        return Err(Error::Contract(format!("alphabet size must be >= 2, got {base}")));
    }
    if n_max < 1 {
        return Err(Error::Contract("maximum block size must be >= 1".into()));
    }
    if c.is_empty() {
        return Err(Error::Contract("block entropy of an empty corpus".into()));
    }
    let points = (1..=n_max)
        .map(|n| {
            let table = ngram_counts(c, n)?;
            Ok(EntropyPoint {
                block_size: n,
                h_raw: entropy_from_counts(table.counts.values().copied(), estimator, base),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProfile {
        points,
        estimator,
        normalization,
        base,
    })
}

/// Baseline sequence generators.
#[derive(Debug, Clone, Copy)]
pub enum SequenceKind<'a> {
    UniformIid,
    Constant,
    Markov(&'a TransitionModel),
}

/// Draws a sequence of `length` codes from a seeded stream.
///
/// The Markov walk starts at `BEGIN`; reaching `END` (or a state with an
/// undefined row) restarts it from `BEGIN` without emitting anything.
pub fn generate_sequence(
    kind: SequenceKind<'_>,
    length: usize,
    seed: u64,
    inv: &SignInventory,
) -> Result<Vec<u32>> {
    if length < 1 {
        return Err(Error::Contract("sequence length must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        SequenceKind::Constant => Ok(vec![inv.min_code(); length]),
        SequenceKind::UniformIid => {
            let codes: Vec<u32> = inv.codes().collect();
            Ok((0..length)
                .map(|_| codes[rng.gen_range(0..codes.len())])
                .collect())
        }
        SequenceKind::Markov(model) => {
            if model.row(Symbol::Begin).is_none() {
                return Err(Error::Contract("model has no start distribution".into()));
            }
            // Per-state sampler, built on first visit. `None` marks an undefined row.
            let mut samplers: HashMap<Symbol, Option<RowSampler>> = HashMap::new();
            let mut out = Vec::with_capacity(length);
            let mut state = Symbol::Begin;
            while out.len() < length {
                let sampler = samplers.entry(state).or_insert_with(|| {
                    let (syms, weights): (Vec<Symbol>, Vec<f64>) =
                        model.row(state)?.into_iter().unzip();
                    Some((syms, WeightedIndex::new(weights).ok()?))
                });
                state = match sampler {
                    Some((syms, dist)) => match syms[dist.sample(&mut rng)] {
                        Symbol::Sign(c) => {
                            out.push(c);
                            Symbol::Sign(c)
                        }
                        _ => Symbol::Begin,
                    },
                    None => Symbol::Begin,
                };
            }
            Ok(out)
        }
    }
}
