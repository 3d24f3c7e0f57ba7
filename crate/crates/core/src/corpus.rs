//! Sign inventory and inscription data model.
//!
//! Both input formats are line-oriented, tab-separated UTF-8. Blank lines and
//! lines whose first non-blank character is `#` are ignored.
//!
//! ```text
//! # inventory: code  classes  numeral_value|-  unit_volume|-  name
//! 103  NUMERAL  3  -  three strokes
//! 201  MEASURE  -  40  vessel
//!
//! # corpus: id  object_type  site|-  source_direction  codes
//! t1  miniature_tablet  harappa  logical  103 201
//! ```

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A volume held exactly in millilitres, so that products and sums of
/// decimal litre values never pick up binary rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Liters(u64);

impl Liters {
    pub const ZERO: Liters = Liters(0);

    pub fn from_millilitres(ml: u64) -> Self {
        Liters(ml)
    }

    pub fn from_whole(liters: u64) -> Self {
        Liters(liters * 1000)
    }

    pub fn millilitres(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn times(self, n: u64) -> Liters {
        Liters(self.0 * n)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for Liters {
    type Output = Liters;
    fn add(self, rhs: Liters) -> Liters {
        Liters(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Liters {
    fn add_assign(&mut self, rhs: Liters) {
        self.0 += rhs.0;
    }
}

impl fmt::Display for Liters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / 1000;
        let frac = self.0 % 1000;
        if frac == 0 {
            write!(f, "{whole}")
        } else {
            let digits = format!("{frac:03}");
            write!(f, "{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl FromStr for Liters {
    type Err = String;

    /// Accepts plain decimals with at most three fractional digits.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (whole, frac) = match s.split_once('.') {
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(format!("invalid volume {s:?}"));
        }
        if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(format!("invalid volume {s:?}"));
        }
        if frac.len() > 3 {
            return Err(format!("volume {s:?} has more than three decimal places"));
        }
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| format!("invalid volume {s:?}"))?
        };
        let frac_ml: u64 = if frac.is_empty() {
            0
        } else {
            format!("{frac:0<3}").parse().map_err(|_| format!("invalid volume {s:?}"))?
        };
        whole
            .checked_mul(1000)
            .and_then(|ml| ml.checked_add(frac_ml))
            .map(Liters)
            .ok_or_else(|| format!("volume {s:?} out of range"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignClass {
    Numeral,
    Measure,
    Fish,
    Oval,
    Anthropomorph,
    Prefix,
    Core,
    Terminal,
    Other,
}

impl SignClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::Numeral => "NUMERAL",
            SignClass::Measure => "MEASURE",
            SignClass::Fish => "FISH",
            SignClass::Oval => "OVAL",
            SignClass::Anthropomorph => "ANTHROPOMORPH",
            SignClass::Prefix => "PREFIX",
            SignClass::Core => "CORE",
            SignClass::Terminal => "TERMINAL",
            SignClass::Other => "OTHER",
        }
    }
}

impl FromStr for SignClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "NUMERAL" => SignClass::Numeral,
            "MEASURE" => SignClass::Measure,
            "FISH" => SignClass::Fish,
            "OVAL" => SignClass::Oval,
            "ANTHROPOMORPH" => SignClass::Anthropomorph,
            "PREFIX" => SignClass::Prefix,
            "CORE" => SignClass::Core,
            "TERMINAL" => SignClass::Terminal,
            "OTHER" => SignClass::Other,
            _ => return Err(format!("unknown sign class {s:?}")),
        })
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the sign inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sign {
    pub code: u32,
    pub classes: BTreeSet<SignClass>,
    /// Count denoted by a numeral sign; present exactly when the sign is a numeral.
    pub numeral_value: Option<u32>,
    /// Capacity of a measure sign; only measures carry one.
    pub unit_volume: Option<Liters>,
    pub name: String,
}

impl Sign {
    pub fn new(code: u32, classes: impl IntoIterator<Item = SignClass>, name: &str) -> Self {
        Sign {
            code,
            classes: classes.into_iter().collect(),
            numeral_value: None,
            unit_volume: None,
            name: name.to_string(),
        }
    }

    pub fn numeral(code: u32, value: u32, name: &str) -> Self {
        Sign {
            numeral_value: Some(value),
            ..Sign::new(code, [SignClass::Numeral], name)
        }
    }

    pub fn measure(code: u32, volume: Option<Liters>, name: &str) -> Self {
        Sign {
            unit_volume: volume,
            ..Sign::new(code, [SignClass::Measure], name)
        }
    }

    pub fn has_class(&self, class: SignClass) -> bool {
        self.classes.contains(&class)
    }

    pub fn is_numeral(&self) -> bool {
        self.has_class(SignClass::Numeral)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.code == 0 {
            return Err("sign code must be a positive integer".into());
        }
        if self.classes.is_empty() {
            return Err(format!("sign {} has no class", self.code));
        }
        match (self.is_numeral(), self.numeral_value) {
            (true, None) => {
                return Err(format!("NUMERAL sign {} needs a numeral value", self.code))
            }
            (false, Some(_)) => {
                return Err(format!(
                    "sign {} has a numeral value but is not a NUMERAL",
                    self.code
                ))
            }
            (true, Some(0)) => {
                return Err(format!("numeral value of sign {} must be positive", self.code))
            }
            _ => {}
        }
        if let Some(v) = self.unit_volume {
            if !self.has_class(SignClass::Measure) {
                return Err(format!(
                    "sign {} has a unit volume but is not a MEASURE",
                    self.code
                ));
            }
            if v.is_zero() {
                return Err(format!("unit volume of sign {} must be positive", self.code));
            }
        }
        Ok(())
    }
}

/// The closed set of signs a corpus is written in. Its size is the alphabet
/// size used as the logarithm base for normalized entropies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignInventory {
    signs: BTreeMap<u32, Sign>,
}

impl SignInventory {
    /// Builds an inventory, rejecting duplicate codes and inconsistent rows.
    pub fn from_signs(signs: impl IntoIterator<Item = Sign>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for sign in signs {
            sign.check()
                .map_err(|m| Error::validation(format!("sign {}", sign.code), m))?;
            let code = sign.code;
            if map.insert(code, sign).is_some() {
                return Err(Error::validation(
                    format!("sign {code}"),
                    "duplicate sign code",
                ));
            }
        }
        if map.is_empty() {
            return Err(Error::validation("inventory", "inventory has no signs"));
        }
        Ok(SignInventory { signs: map })
    }

    /// An inventory of `OTHER` signs covering exactly `codes`.
    pub fn from_codes(codes: impl IntoIterator<Item = u32>) -> Result<Self> {
        let codes: BTreeSet<u32> = codes.into_iter().collect();
        Self::from_signs(
            codes
                .into_iter()
                .map(|c| Sign::new(c, [SignClass::Other], "")),
        )
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut signs: BTreeMap<u32, Sign> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            if is_skippable(raw) {
                continue;
            }
            let fields: Vec<&str> = raw.splitn(5, '\t').collect();
            if fields.len() < 4 {
                return Err(Error::format(
                    path,
                    line_no,
                    format!("expected 5 tab-separated fields, found {}", fields.len()),
                ));
            }
            let code: u32 = fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::format(path, line_no, format!("invalid sign code {:?}", fields[0])))?;
            let classes = fields[1]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(SignClass::from_str)
                .collect::<std::result::Result<BTreeSet<_>, _>>()
                .map_err(|m| Error::format(path, line_no, m))?;
            let numeral_value = match fields[2].trim() {
                "-" | "" => None,
                s => Some(s.parse::<u32>().map_err(|_| {
                    Error::format(path, line_no, format!("invalid numeral value {s:?}"))
                })?),
            };
            let unit_volume = match fields[3].trim() {
                "-" | "" => None,
                s => Some(s.parse::<Liters>().map_err(|m| Error::format(path, line_no, m))?),
            };
            let sign = Sign {
                code,
                classes,
                numeral_value,
                unit_volume,
                name: fields.get(4).map(|s| s.trim().to_string()).unwrap_or_default(),
            };
            sign.check().map_err(|m| Error::format(path, line_no, m))?;
            if signs.contains_key(&code) {
                return Err(Error::format(
                    path,
                    line_no,
                    format!("duplicate sign code {code}"),
                ));
            }
            signs.insert(code, sign);
        }
        if signs.is_empty() {
            return Err(Error::format(path, 0, "inventory has no signs"));
        }
        Ok(SignInventory { signs })
    }

    /// Number of distinct codes (the alphabet size `L`).
    pub fn size_l(&self) -> usize {
        self.signs.len()
    }

    pub fn get(&self, code: u32) -> Option<&Sign> {
        self.signs.get(&code)
    }

    pub fn contains(&self, code: u32) -> bool {
        self.signs.contains_key(&code)
    }

    pub fn signs(&self) -> impl Iterator<Item = &Sign> {
        self.signs.values()
    }

    /// Codes in ascending order.
    pub fn codes(&self) -> impl Iterator<Item = u32> + '_ {
        self.signs.keys().copied()
    }

    pub fn min_code(&self) -> u32 {
        *self.signs.keys().next().expect("inventory is never empty")
    }

    pub fn numeral_value(&self, code: u32) -> Option<u32> {
        self.get(code).and_then(|s| s.numeral_value)
    }

    pub fn is_numeral(&self, code: u32) -> bool {
        self.get(code).is_some_and(Sign::is_numeral)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for s in self.signs.values() {
            let classes: Vec<&str> = s.classes.iter().map(|c| c.as_str()).collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                s.code,
                classes.join(","),
                s.numeral_value.map_or("-".to_string(), |v| v.to_string()),
                s.unit_volume.map_or("-".to_string(), |v| v.to_string()),
                s.name
            ));
        }
        out
    }
}

pub fn load_inventory(path: impl AsRef<Path>) -> Result<SignInventory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SignInventory::parse(&text, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectType {
    Seal,
    Sealing,
    MiniatureTablet,
    CopperTablet,
    Pottery,
    Token,
    Signboard,
    Other,
}

impl ObjectType {
    pub const ALL: [ObjectType; 8] = [
        ObjectType::Seal,
        ObjectType::Sealing,
        ObjectType::MiniatureTablet,
        ObjectType::CopperTablet,
        ObjectType::Pottery,
        ObjectType::Token,
        ObjectType::Signboard,
        ObjectType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ObjectType::Seal => "seal",
            ObjectType::Sealing => "sealing",
            ObjectType::MiniatureTablet => "miniature_tablet",
            ObjectType::CopperTablet => "copper_tablet",
            ObjectType::Pottery => "pottery",
            ObjectType::Token => "token",
            ObjectType::Signboard => "signboard",
            ObjectType::Other => "other",
        }
    }
}

impl FromStr for ObjectType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ObjectType::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| format!("unknown object type {s:?}"))
    }
}

impl fmt::Display for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the sign list of an inscription was transcribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceDirection {
    Logical,
    SealFace,
    Impression,
}

impl SourceDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceDirection::Logical => "logical",
            SourceDirection::SealFace => "seal_face",
            SourceDirection::Impression => "impression",
        }
    }
}

impl FromStr for SourceDirection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "logical" => Ok(SourceDirection::Logical),
            "seal_face" => Ok(SourceDirection::SealFace),
            "impression" => Ok(SourceDirection::Impression),
            _ => Err(format!("unknown source direction {s:?}")),
        }
    }
}

impl fmt::Display for SourceDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inscription {
    pub id: String,
    /// Sign codes in logical reading order once the corpus is loaded.
    pub signs: Vec<u32>,
    pub object_type: ObjectType,
    pub site: Option<String>,
    pub source_direction: SourceDirection,
}

impl Inscription {
    /// A logically ordered inscription with no site.
    pub fn new(id: impl Into<String>, object_type: ObjectType, signs: Vec<u32>) -> Self {
        Inscription {
            id: id.into(),
            signs,
            object_type,
            site: None,
            source_direction: SourceDirection::Logical,
        }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Puts a transcribed sign list into logical order.
///
/// Impressions are stored as a left-to-right scan of a right-to-left text and
/// are reversed. Seal faces are expected to be transcribed already mirrored,
/// so only impressions change.
pub fn normalize_reading_order(signs: &[u32], direction: SourceDirection) -> Result<Vec<u32>> {
    if signs.is_empty() {
        return Err(Error::Contract("cannot normalize an empty sign list".into()));
    }
    Ok(match direction {
        SourceDirection::Logical | SourceDirection::SealFace => signs.to_vec(),
        SourceDirection::Impression => signs.iter().rev().copied().collect(),
    })
}

/// A validated, normalized collection of inscriptions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub inscriptions: Vec<Inscription>,
    pub inventory_ref: String,
}

impl Corpus {
    /// Validates `inscriptions` against `inv` and normalizes their reading order.
    pub fn new(
        inscriptions: Vec<Inscription>,
        inv: &SignInventory,
        inventory_ref: impl Into<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(inscriptions.len());
        for ins in inscriptions {
            let loc = format!("inscription {}", ins.id);
            out.push(validate_inscription(ins, inv, &mut seen).map_err(|m| Error::validation(loc, m))?);
        }
        Ok(Corpus {
            inscriptions: out,
            inventory_ref: inventory_ref.into(),
        })
    }

    pub fn parse(text: &str, path: &Path, inv: &SignInventory) -> Result<Self> {
        let records = parse_corpus_records(text, path)?;
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(records.len());
        for (line_no, ins) in records {
            let loc = format!("{}:{} inscription {}", path.display(), line_no, ins.id);
            out.push(validate_inscription(ins, inv, &mut seen).map_err(|m| Error::validation(loc, m))?);
        }
        Ok(Corpus {
            inscriptions: out,
            inventory_ref: String::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.inscriptions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inscriptions.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Inscription> {
        self.inscriptions.iter().find(|i| i.id == id)
    }

    pub fn total_tokens(&self) -> usize {
        self.inscriptions.iter().map(Inscription::len).sum()
    }

    /// Serializes to the corpus TSV format; reloading gives back an equal corpus.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for ins in &self.inscriptions {
            let codes: Vec<String> = ins.signs.iter().map(u32::to_string).collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                ins.id,
                ins.object_type,
                ins.site.as_deref().unwrap_or("-"),
                ins.source_direction,
                codes.join(" ")
            ));
        }
        out
    }
}

fn validate_inscription(
    mut ins: Inscription,
    inv: &SignInventory,
    seen: &mut HashSet<String>,
) -> std::result::Result<Inscription, String> {
    if ins.signs.is_empty() {
        return Err("empty sign list".into());
    }
    if let Some((pos, code)) = ins.signs.iter().enumerate().find(|(_, c)| !inv.contains(**c)) {
        return Err(format!("unknown sign code {code} at position {pos}"));
    }
    if !seen.insert(ins.id.clone()) {
        return Err(format!("duplicate inscription id {:?}", ins.id));
    }
    ins.signs = normalize_reading_order(&ins.signs, ins.source_direction)
        .map_err(|e| e.to_string())?;
    ins.source_direction = SourceDirection::Logical;
    Ok(ins)
}

/// Parses corpus lines without resolving codes. Returns `(line number, inscription)`.
pub fn parse_corpus_records(text: &str, path: &Path) -> Result<Vec<(usize, Inscription)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if is_skippable(raw) {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::format(
                path,
                line_no,
                format!("expected 5 tab-separated fields, found {}", fields.len()),
            ));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(Error::format(path, line_no, "empty inscription id"));
        }
        let object_type = fields[1]
            .trim()
            .parse()
            .map_err(|m| Error::format(path, line_no, m))?;
        let site = match fields[2].trim() {
            "-" | "" => None,
            s => Some(s.to_string()),
        };
        let source_direction = fields[3]
            .trim()
            .parse()
            .map_err(|m| Error::format(path, line_no, m))?;
        let signs = fields[4]
            .split_whitespace()
            .enumerate()
            .map(|(pos, tok)| {
                tok.parse::<u32>().ok().filter(|c| *c > 0).ok_or_else(|| {
                    Error::format(
                        path,
                        line_no,
                        format!("inscription {id}: invalid sign code {tok:?} at position {pos}"),
                    )
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        out.push((
            line_no,
            Inscription {
                id: id.to_string(),
                signs,
                object_type,
                site,
                source_direction,
            },
        ));
    }
    Ok(out)
}

pub fn load_corpus(path: impl AsRef<Path>, inv: &SignInventory) -> Result<Corpus> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut corpus = Corpus::parse(&text, path, inv)?;
    corpus.inventory_ref = path.display().to_string();
    Ok(corpus)
}

/// Loads a corpus without an inventory file, deriving an inventory of the
/// codes it uses.
pub fn load_corpus_self_indexed(path: impl AsRef<Path>) -> Result<(SignInventory, Corpus)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let records = parse_corpus_records(&text, path)?;
    let codes = records.iter().flat_map(|(_, ins)| ins.signs.iter().copied());
    let inv = SignInventory::from_codes(codes)
        .map_err(|_| Error::format(path, 0, "corpus has no signs"))?;
    let mut corpus = Corpus::parse(&text, path, &inv)?;
    corpus.inventory_ref = format!("{} (self-indexed)", path.display());
    Ok((inv, corpus))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusSummary {
    pub sign_frequencies: BTreeMap<u32, usize>,
    pub length_histogram: BTreeMap<usize, usize>,
    pub object_types: BTreeMap<ObjectType, usize>,
    pub inscriptions: usize,
    pub total_tokens: usize,
}

pub fn corpus_summary(c: &Corpus) -> CorpusSummary {
    let mut s = CorpusSummary::default();
    for ins in &c.inscriptions {
        for &code in &ins.signs {
            *s.sign_frequencies.entry(code).or_default() += 1;
        }
        *s.length_histogram.entry(ins.len()).or_default() += 1;
        *s.object_types.entry(ins.object_type).or_default() += 1;
        s.total_tokens += ins.len();
    }
    s.inscriptions = c.len();
    s
}
