//! The `sealscript` command line.
//!
//! Machine output is CSV, written to stdout or, with `-o DIR`, to
//! `DIR/<subcommand>.csv`. Human-readable summaries go to stderr. Exit codes:
//! 0 success, 1 input or validation error, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, load_corpus, load_corpus_self_indexed, load_inventory, Corpus, SignInventory};
use crate::economy::{find_duplicate_clusters, mint_tokens, tabulate_rations, GroupBy};
use crate::error::Error;
use crate::grammar::{classify_corpus, generate, load_grammar, GrammarSpec};
use crate::report;
use crate::stats::{self, Estimator, Normalization};

#[derive(Debug, Parser)]
#[command(name = "sealscript", version, about = "Sign inventory, segmentation and corpus statistics for short inscriptions")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Sign inventory TSV. Without it, an inventory is derived from the corpus codes.
    #[arg(long)]
    inventory: Option<PathBuf>,
    /// Output directory, or `-` for stdout.
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
    /// Seed for every pseudo-random stream.
    #[arg(long, env = "SEALSCRIPT_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct GrammarInputs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    grammar: PathBuf,
}

#[derive(Debug, Args)]
struct CorpusInputs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    corpus: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Plugin,
    MillerMadow,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormalizationArg {
    PerSymbol,
    Raw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupByArg {
    Inscription,
    Sides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and check the inventory, and optionally a corpus and grammar.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
    },
    /// Sign frequencies, length histogram and object types.
    Summary(CorpusInputs),
    /// Patterned / Complex verdict per inscription.
    Classify(GrammarInputs),
    /// Prefix, Medial, Core and Terminal spans per inscription.
    Segment(GrammarInputs),
    /// Block entropy profile for one or more corpora.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long, required = true)]
        corpus: Vec<PathBuf>,
        #[arg(long = "n-max", default_value_t = stats::DEFAULT_MAX_BLOCK)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "plugin")]
        estimator: EstimatorArg,
        #[arg(long, value_enum, default_value = "per-symbol")]
        normalization: NormalizationArg,
        /// Logarithm base; defaults to the inventory size.
        #[arg(long = "alphabet-size")]
        alphabet_size: Option<usize>,
        /// Also write entropy.svg to the output directory.
        #[arg(long)]
        svg: bool,
    },
    /// Smoothed bigram transition table.
    Bigram {
        #[command(flatten)]
        inputs: CorpusInputs,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
    },
    /// Overlapping n-gram counts.
    Ngrams {
        #[command(flatten)]
        inputs: CorpusInputs,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Groups of identical inscriptions or artifacts.
    Clusters {
        #[command(flatten)]
        inputs: CorpusInputs,
        #[arg(long = "group-by", value_enum, default_value = "inscription")]
        group_by: GroupByArg,
    },
    /// Quantities per counted sign.
    Rations(GrammarInputs),
    /// Stamp tokens with a seal from the corpus.
    Mint {
        #[command(flatten)]
        inputs: CorpusInputs,
        /// Id of the seal inscription.
        #[arg(long)]
        seal: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Synthetic patterned inscriptions, as corpus TSV.
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

struct Output {
    files: Vec<(String, String)>,
    summary: String,
}

/// Runs the CLI with the given arguments (including the program name).
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let output_arg = output_of(&cli.command).to_string();
    match execute(cli.command).and_then(|out| emit(&output_arg, out, stdout, stderr)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn output_of(cmd: &Command) -> &str {
    match cmd {
        Command::Validate { common, .. }
        | Command::Entropy { common, .. }
        | Command::Generate { common, .. } => &common.output,
        Command::Summary(i) => &i.common.output,
        Command::Classify(i) | Command::Segment(i) | Command::Rations(i) => &i.common.output,
        Command::Bigram { inputs, .. }
        | Command::Ngrams { inputs, .. }
        | Command::Clusters { inputs, .. }
        | Command::Mint { inputs, .. } => &inputs.common.output,
    }
}

fn emit(output: &str, out: Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    if output == "-" {
        for (name, contents) in &out.files {
            if name.ends_with(".svg") {
                return Err(Failure::Usage("--svg needs an output directory (-o DIR)".into()));
            }
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))?;
        }
    } else {
        let dir = Path::new(output);
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, contents) in &out.files {
            report::write_atomic(&dir.join(name), contents)?;
        }
    }
    let _ = write!(stderr, "{}", out.summary);
    Ok(())
}

fn inventory_and_corpus(common: &Common, corpus_path: &Path) -> Result<(SignInventory, Corpus), Error> {
    match &common.inventory {
        Some(inv_path) => {
            let inv = load_inventory(inv_path)?;
            let c = load_corpus(corpus_path, &inv)?;
            Ok((inv, c))
        }
        None => load_corpus_self_indexed(corpus_path),
    }
}

fn grammar_inputs(i: &GrammarInputs) -> Result<(SignInventory, Corpus, GrammarSpec), Failure> {
    let inv_path = i
        .common
        .inventory
        .as_ref()
        .ok_or_else(|| Failure::Usage("--inventory is required with --grammar".into()))?;
    let inv = load_inventory(inv_path)?;
    let c = load_corpus(&i.corpus, &inv)?;
    let g = load_grammar(&i.grammar, &inv)?;
    Ok((inv, c, g))
}

fn warnings(g: &GrammarSpec) -> String {
    g.warnings.iter().map(|w| format!("warning: {w}\n")).collect()
}

fn single(name: &str, contents: String, summary: String) -> Output {
    Output {
        files: vec![(name.to_string(), contents)],
        summary,
    }
}

fn execute(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Validate {
            common,
            corpus,
            grammar,
        } => {
            let inv_path = common
                .inventory
                .as_ref()
                .ok_or_else(|| Failure::Usage("validate needs --inventory".into()))?;
            let inv = load_inventory(inv_path)?;
            let mut csv = format!("check,value\ninventory_signs,{}\n", inv.size_l());
            let mut summary = format!("inventory: {} signs\n", inv.size_l());
            if let Some(p) = corpus {
                let c = load_corpus(&p, &inv)?;
                csv.push_str(&format!("inscriptions,{}\ntokens,{}\n", c.len(), c.total_tokens()));
                summary.push_str(&format!("corpus: {} inscriptions\n", c.len()));
            }
            if let Some(p) = grammar {
                let g = load_grammar(&p, &inv)?;
                csv.push_str(&format!("grammar_warnings,{}\n", g.warnings.len()));
                summary.push_str(&warnings(&g));
            }
            Ok(single("validate.csv", csv, summary))
        }
        Command::Summary(i) => {
            let (_, c) = inventory_and_corpus(&i.common, &i.corpus)?;
            let s = corpus::corpus_summary(&c);
            let summary = format!(
                "{} inscriptions, {} tokens, {} distinct signs\n",
                s.inscriptions,
                s.total_tokens,
                s.sign_frequencies.len()
            );
            Ok(single("summary.csv", report::summary_csv(&s), summary))
        }
        Command::Classify(i) => {
            let (_, c, g) = grammar_inputs(&i)?;
            let cls = classify_corpus(&c, &g);
            let summary = format!("{}patterned: {}, complex: {}\n", warnings(&g), cls.patterned, cls.complex);
            Ok(single("classify.csv", report::classify_csv(&cls), summary))
        }
        Command::Segment(i) => {
            let (_, c, g) = grammar_inputs(&i)?;
            let cls = classify_corpus(&c, &g);
            let csv = report::segment_csv(&cls, |id| {
                c.get(id).map(|ins| ins.signs.clone()).unwrap_or_default()
            });
            let summary = format!("{}patterned: {}, complex: {}\n", warnings(&g), cls.patterned, cls.complex);
            Ok(single("segment.csv", csv, summary))
        }
        Command::Entropy {
            common,
            corpus,
            n_max,
            estimator,
            normalization,
            alphabet_size,
            svg,
        } => {
            if alphabet_size.is_some_and(|l| l < 2) {
                return Err(Failure::Usage("--alphabet-size must be at least 2".into()));
            }
            let estimator = match estimator {
                EstimatorArg::Plugin => Estimator::Plugin,
                EstimatorArg::MillerMadow => Estimator::MillerMadow,
            };
            let normalization = match normalization {
                NormalizationArg::PerSymbol => Normalization::PerSymbol,
                NormalizationArg::Raw => Normalization::Raw,
            };
            let mut profiles = Vec::new();
            let mut summary = String::new();
            for path in &corpus {
                let (inv, c) = inventory_and_corpus(&common, path)?;
                let base = match (alphabet_size, &common.inventory) {
                    (Some(l), _) => l,
                    (None, Some(_)) => inv.size_l(),
                    // A self-indexed inventory of one sign still needs a usable base.
                    (None, None) => inv.size_l().max(2),
                };
                let p = stats::block_entropy(&c, n_max, estimator, normalization, base)?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                summary.push_str(&format!(
                    "{name}: L={base}, {} tokens, H_1={}\n",
                    c.total_tokens(),
                    p.h(1).map_or("-".into(), |h| format!("{h:.4}"))
                ));
                profiles.push((name, p));
            }
            let mut files = vec![("entropy.csv".to_string(), report::entropy_csv(&profiles))];
            if svg {
                files.push(("entropy.svg".to_string(), report::entropy_svg(&profiles)));
            }
            Ok(Output { files, summary })
        }
        Command::Bigram { inputs, alpha } => {
            let (inv, c) = inventory_and_corpus(&inputs.common, &inputs.corpus)?;
            let m = stats::fit_bigram(&c, &inv, alpha)?;
            let summary = format!(
                "{} observed transitions over {} successors, alpha={alpha}\n",
                m.observed().count(),
                m.successor_count()
            );
            Ok(single("bigram.csv", report::bigram_csv(&m), summary))
        }
        Command::Ngrams { inputs, n } => {
            if n < 1 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let (_, c) = inventory_and_corpus(&inputs.common, &inputs.corpus)?;
            let t = stats::ngram_counts(&c, n)?;
            let summary = format!("{} distinct {n}-grams, {} total\n", t.distinct(), t.total);
            Ok(single("ngrams.csv", report::ngram_csv(&t), summary))
        }
        Command::Clusters { inputs, group_by } => {
            let (_, c) = inventory_and_corpus(&inputs.common, &inputs.corpus)?;
            let group_by = match group_by {
                GroupByArg::Inscription => GroupBy::Inscription,
                GroupByArg::Sides => GroupBy::ArtifactSides,
            };
            let clusters = find_duplicate_clusters(&c, group_by)?;
            let members: usize = clusters.iter().map(|k| k.size()).sum();
            let summary = format!(
                "{} duplicate clusters covering {members} {}; possible bulk disposal: {}\n",
                clusters.len(),
                if group_by == GroupBy::Inscription { "inscriptions" } else { "artifacts" },
                if clusters.is_empty() { "no" } else { "yes" }
            );
            Ok(single("clusters.csv", report::cluster_csv(&clusters), summary))
        }
        Command::Rations(i) => {
            let (inv, c, g) = grammar_inputs(&i)?;
            let t = tabulate_rations(&c, &g, &inv);
            let summary = format!(
                "{}{} counted signs; skipped {} complex and {} without a quantity\n",
                warnings(&g),
                t.rows.len(),
                t.skipped_complex,
                t.skipped_no_quantity
            );
            Ok(single("rations.csv", report::ration_csv(&t, &inv), summary))
        }
        Command::Mint {
            inputs,
            seal,
            count,
        } => {
            let (_, c) = inventory_and_corpus(&inputs.common, &inputs.corpus)?;
            let ins = c.get(&seal).ok_or_else(|| {
                Error::Validation {
                    location: inputs.corpus.display().to_string(),
                    message: format!("no inscription with id {seal:?}"),
                }
            })?;
            let tokens = mint_tokens(ins, count, inputs.common.seed)?;
            let summary = format!("minted {} tokens from {seal}\n", tokens.len());
            Ok(single("mint.csv", report::token_csv(&tokens), summary))
        }
        Command::Generate {
            common,
            grammar,
            count,
        } => {
            let inv_path = common
                .inventory
                .as_ref()
                .ok_or_else(|| Failure::Usage("generate needs --inventory".into()))?;
            let inv = load_inventory(inv_path)?;
            let g = load_grammar(&grammar, &inv)?;
            let generated = generate(&g, common.seed, count)?;
            let c = Corpus {
                inscriptions: generated,
                inventory_ref: inv_path.display().to_string(),
            };
            let summary = format!("generated {} inscriptions with seed {}\n", c.len(), common.seed);
            Ok(single("generated.tsv", c.to_tsv(), summary))
        }
    }
}
