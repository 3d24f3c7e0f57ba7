//! CSV tables and the SVG entropy chart.
//!
//! All output is built as `String`s with fixed float formatting so that the
//! same inputs always give byte-identical files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::corpus::{CorpusSummary, SignInventory};
use crate::economy::{DuplicateCluster, RationTable, TokenRecord};
use crate::error::{Error, Result};
use crate::grammar::{ClassifiedCorpus, Classification, Component};
use crate::stats::{EntropyProfile, NGramTable, TransitionModel};

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn join_codes(codes: &[u32]) -> String {
    codes.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn float(x: f64) -> String {
    format!("{x:.12}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), float)
}

pub fn summary_csv(s: &CorpusSummary) -> String {
    let mut out = String::from("section,key,value\n");
    let _ = writeln!(out, "total,inscriptions,{}", s.inscriptions);
    let _ = writeln!(out, "total,tokens,{}", s.total_tokens);
    for (code, n) in &s.sign_frequencies {
        let _ = writeln!(out, "sign_frequency,{code},{n}");
    }
    for (len, n) in &s.length_histogram {
        let _ = writeln!(out, "length,{len},{n}");
    }
    for (ty, n) in &s.object_types {
        let _ = writeln!(out, "object_type,{ty},{n}");
    }
    out
}

pub fn classify_csv(c: &ClassifiedCorpus) -> String {
    let mut out = String::from("id,verdict,reason\n");
    for (id, cls) in &c.results {
        let reason = match cls {
            Classification::Patterned(_) => String::new(),
            Classification::Complex { reason, .. } => reason.clone(),
        };
        let _ = writeln!(out, "{},{},{}", csv_field(id), cls.verdict(), csv_field(&reason));
    }
    out
}

/// One row per inscription with the codes in each span.
pub fn segment_csv(c: &ClassifiedCorpus, signs_of: impl Fn(&str) -> Vec<u32>) -> String {
    let mut out = String::from("id,verdict,prefix,medial,core,terminal,reason\n");
    for (id, cls) in &c.results {
        let signs = signs_of(id);
        let (spans, reason) = match cls {
            Classification::Patterned(seg) => (
                Component::ALL.map(|comp| join_codes(seg.signs(comp, &signs))),
                String::new(),
            ),
            Classification::Complex { reason, .. } => {
                (std::array::from_fn(|_| String::new()), reason.clone())
            }
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(id),
            cls.verdict(),
            spans[0],
            spans[1],
            spans[2],
            spans[3],
            csv_field(&reason)
        );
    }
    out
}

/// `block_size,H_raw,H_per_symbol,estimator,L`. With more than one profile a
/// leading `corpus` column names each one.
pub fn entropy_csv(profiles: &[(String, EntropyProfile)]) -> String {
    let multi = profiles.len() > 1;
    let mut out = String::new();
    if multi {
        out.push_str("corpus,");
    }
    out.push_str("block_size,H_raw,H_per_symbol,estimator,L\n");
    for (name, p) in profiles {
        for pt in &p.points {
            if multi {
                let _ = write!(out, "{},", csv_field(name));
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                pt.block_size,
                opt_float(pt.h_raw),
                opt_float(pt.h_per_symbol()),
                p.estimator.as_str(),
                p.base
            );
        }
    }
    out
}

pub fn ngram_csv(t: &NGramTable) -> String {
    let mut out = String::from("ngram,count\n");
    for (k, n) in &t.counts {
        let _ = writeln!(out, "{},{n}", join_codes(k));
    }
    out
}

/// Observed transitions with their smoothed probabilities.
pub fn bigram_csv(m: &TransitionModel) -> String {
    let mut out = String::from("from,to,count,probability\n");
    for (a, b, n) in m.observed() {
        let p = m.probability(a, b).ok();
        let _ = writeln!(out, "{a},{b},{n},{}", opt_float(p));
    }
    out
}

pub fn cluster_csv(clusters: &[DuplicateCluster]) -> String {
    let mut out = String::from("signature,size,member_ids\n");
    for c in clusters {
        let sig: Vec<String> = c.signature.iter().map(|s| join_codes(s)).collect();
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(&sig.join(" | ")),
            c.size(),
            csv_field(&c.member_ids.join(";"))
        );
    }
    out
}

pub fn ration_csv(t: &RationTable, inv: &SignInventory) -> String {
    let mut out = String::from("counted_code,name,total_count,total_volume_liters\n");
    for (code, row) in &t.rows {
        let name = inv.get(*code).map(|s| s.name.as_str()).unwrap_or("");
        let _ = writeln!(
            out,
            "{code},{},{},{}",
            csv_field(name),
            row.total_count,
            row.total_volume.map_or_else(|| "-".to_string(), |v| v.to_string())
        );
    }
    out
}

pub fn token_csv(tokens: &[TokenRecord]) -> String {
    let mut out = String::from("token_id,seal_id,mint_index,impression,strung\n");
    for t in tokens {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&t.token_id),
            csv_field(&t.seal_id),
            t.mint_index,
            join_codes(&t.impression),
            t.strung
        );
    }
    out
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Line chart of entropy against block size, one polyline per profile.
pub fn entropy_svg(profiles: &[(String, EntropyProfile)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 160.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 50.0;

    let n_max = profiles
        .iter()
        .map(|(_, p)| p.points.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let values = profiles
        .iter()
        .flat_map(|(_, p)| (1..=p.points.len()).filter_map(|n| p.h(n)));
    let y_max = values.fold(1.0f64, f64::max);
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let x = |n: usize| {
        if n_max == 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * (n - 1) as f64 / (n_max - 1) as f64
        }
    };
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#,
        TOP + plot_h
    );
    for n in 1..=n_max {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            x(n),
            TOP + plot_h + 18.0
        );
    }
    for i in 0..=4 {
        let v = y_max * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            LEFT - 6.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">block size</text>"#,
        LEFT + plot_w / 2.0,
        H - 12.0
    );
    let y_label = match profiles.first().map(|(_, p)| p.normalization) {
        Some(crate::stats::Normalization::Raw) => "block entropy",
        _ => "block entropy per symbol",
    };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{y_label}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    for (i, (name, p)) in profiles.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = (1..=p.points.len())
            .filter_map(|n| p.h(n).map(|v| format!("{:.2},{:.2}", x(n), y(v))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 16.0 * i as f64 + 8.0;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            ly + 4.0,
            xml_escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a truncated file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
