//! Quantity readings, duplicate-inscription clusters, seal-minted tokens and
//! ration tabulation.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Corpus, Inscription, Liters, ObjectType, SignInventory};
use crate::error::{Error, Result};
use crate::grammar::{segment, Classification, Component, GrammarSpec, MedialKind, Segmentation};

/// A numeral applied to a counted sign, with the implied volume when the
/// counted sign is a measure of known capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolumetricReading {
    pub numeral_value: u32,
    /// The sign being counted; `None` for a bare numeral.
    pub measure_code: Option<u32>,
    pub unit_volume: Option<Liters>,
    pub total_volume: Option<Liters>,
}

/// Reads `numeral [counted]` from a short sign run such as a Medial span or a
/// two-sign tablet text.
pub fn read_quantity(signs: &[u32], inv: &SignInventory) -> Result<VolumetricReading> {
    let numerals: Vec<usize> = (0..signs.len()).filter(|&i| inv.is_numeral(signs[i])).collect();
    match numerals.len() {
        0 => return Err(Error::NotAQuantity(format!("no numeral in {signs:?}"))),
        1 => {}
        _ => {
            return Err(Error::AmbiguousQuantity(format!(
                "{} numerals in {signs:?}",
                numerals.len()
            )))
        }
    }
    if numerals[0] != 0 || signs.len() > 2 {
        return Err(Error::NotAQuantity(format!(
            "expected a numeral optionally followed by one sign, got {signs:?}"
        )));
    }
    let numeral_value = inv.numeral_value(signs[0]).expect("numeral has a value");
    let measure_code = signs.get(1).copied();
    let unit_volume = measure_code.and_then(|c| inv.get(c)).and_then(|s| s.unit_volume);
    Ok(VolumetricReading {
        numeral_value,
        measure_code,
        unit_volume,
        total_volume: unit_volume.map(|v| v.times(u64::from(numeral_value))),
    })
}

/// The quantity stated by a patterned text: a numeral with its Medial measure,
/// or a lone Medial numeral counting the first Core sign.
pub fn quantity_of(
    signs: &[u32],
    seg: &Segmentation,
    inv: &SignInventory,
) -> Result<VolumetricReading> {
    let medial = seg.signs(Component::Medial, signs);
    match seg.medial_kind {
        Some(MedialKind::Numeral { with_measure: false }) => {
            let core = seg.signs(Component::Core, signs);
            let pair: Vec<u32> = medial.iter().chain(core.first()).copied().collect();
            read_quantity(&pair, inv)
        }
        _ => read_quantity(medial, inv),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    /// Each inscription stands alone.
    Inscription,
    /// Inscriptions with ids `artifact/side` are grouped per artifact.
    ArtifactSides,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateCluster {
    /// One sign sequence per side (a single entry when grouping by inscription).
    pub signature: Vec<Vec<u32>>,
    pub member_ids: Vec<String>,
}

impl DuplicateCluster {
    pub fn size(&self) -> usize {
        self.member_ids.len()
    }
}

fn split_side_id(id: &str) -> Option<(&str, &str)> {
    let (artifact, side) = id.rsplit_once('/')?;
    (!artifact.is_empty() && !side.is_empty()).then_some((artifact, side))
}

/// Groups identical inscriptions (or identical multi-sided artifacts).
///
/// Only groups of two or more are returned, largest first, ties broken by
/// signature. Member ids are sorted, so the result does not depend on
/// corpus order.
pub fn find_duplicate_clusters(c: &Corpus, group_by: GroupBy) -> Result<Vec<DuplicateCluster>> {
    let mut groups: BTreeMap<Vec<Vec<u32>>, BTreeSet<String>> = BTreeMap::new();
    match group_by {
        GroupBy::Inscription => {
            for ins in &c.inscriptions {
                groups
                    .entry(vec![ins.signs.clone()])
                    .or_default()
                    .insert(ins.id.clone());
            }
        }
        GroupBy::ArtifactSides => {
            let mut artifacts: BTreeMap<&str, BTreeMap<&str, &[u32]>> = BTreeMap::new();
            for ins in &c.inscriptions {
                let (artifact, side) = split_side_id(&ins.id).ok_or_else(|| {
                    Error::validation(
                        format!("inscription {}", ins.id),
                        "id is not of the form artifact/side",
                    )
                })?;
                artifacts.entry(artifact).or_default().insert(side, &ins.signs);
            }
            for (artifact, sides) in artifacts {
                let signature = sides.values().map(|s| s.to_vec()).collect();
                groups.entry(signature).or_default().insert(artifact.to_string());
            }
        }
    }
    let mut clusters: Vec<DuplicateCluster> = groups
        .into_iter()
        .filter(|(_, ids)| ids.len() >= 2)
        .map(|(signature, ids)| DuplicateCluster {
            signature,
            member_ids: ids.into_iter().collect(),
        })
        .collect();
    clusters.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.signature.cmp(&b.signature)));
    Ok(clusters)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    pub token_id: String,
    pub seal_id: String,
    /// The seal text as the stamp leaves it: the seal face mirrored.
    pub impression: Vec<u32>,
    pub mint_index: usize,
    /// Whether the token is pierced for stringing.
    pub strung: bool,
}

/// Stamps `count` tokens with one seal. Every token in the batch carries the
/// same impression; ids derive from the seal id, the seed and the batch index.
pub fn mint_tokens(seal: &Inscription, count: usize, seed: u64) -> Result<Vec<TokenRecord>> {
    if seal.object_type != ObjectType::Seal {
        return Err(Error::Contract(format!(
            "{} is a {}, only seals can mint tokens",
            seal.id, seal.object_type
        )));
    }
    if count < 1 {
        return Err(Error::Contract("token count must be >= 1".into()));
    }
    let impression: Vec<u32> = seal.signs.iter().rev().copied().collect();
    Ok((0..count)
        .map(|i| TokenRecord {
            token_id: format!("{}~{:x}-{:04}", seal.id, seed, i),
            seal_id: seal.id.clone(),
            impression: impression.clone(),
            mint_index: i,
            strung: true,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationRow {
    /// Sum of numeral values applied to this sign.
    pub total_count: u64,
    /// Sum of implied volumes; absent when the sign has no unit volume.
    pub total_volume: Option<Liters>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationTable {
    pub rows: BTreeMap<u32, RationRow>,
    pub skipped_complex: usize,
    pub skipped_no_quantity: usize,
}

impl RationTable {
    pub fn skipped(&self) -> usize {
        self.skipped_complex + self.skipped_no_quantity
    }

    fn add(&mut self, reading: &VolumetricReading, code: u32) {
        let row = self.rows.entry(code).or_default();
        row.total_count += u64::from(reading.numeral_value);
        if let Some(v) = reading.total_volume {
            row.total_volume = Some(row.total_volume.unwrap_or(Liters::ZERO) + v);
        }
    }

    /// Row-wise sum of two tables.
    pub fn merge(&mut self, other: &RationTable) {
        for (&code, row) in &other.rows {
            let mine = self.rows.entry(code).or_default();
            mine.total_count += row.total_count;
            mine.total_volume = match (mine.total_volume, row.total_volume) {
                (None, None) => None,
                (a, b) => Some(a.unwrap_or(Liters::ZERO) + b.unwrap_or(Liters::ZERO)),
            };
        }
        self.skipped_complex += other.skipped_complex;
        self.skipped_no_quantity += other.skipped_no_quantity;
    }
}

/// Totals per counted sign over every patterned text that states a quantity.
pub fn tabulate_rations(c: &Corpus, g: &GrammarSpec, inv: &SignInventory) -> RationTable {
    let mut table = RationTable::default();
    for ins in &c.inscriptions {
        let Classification::Patterned(seg) = segment(ins, g) else {
            table.skipped_complex += 1;
            continue;
        };
        match quantity_of(&ins.signs, &seg, inv) {
            Ok(r @ VolumetricReading { measure_code: Some(code), .. }) => table.add(&r, code),
            _ => table.skipped_no_quantity += 1,
        }
    }
    table
}
