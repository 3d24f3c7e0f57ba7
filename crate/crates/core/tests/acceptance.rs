//! Acceptance criteria. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sealscript::report::token_csv;
use sealscript::stats::Symbol;
use sealscript::{
    block_entropy, find_duplicate_clusters, fit_bigram, generate, generate_sequence, mint_tokens,
    read_quantity, segment, Classification, Component, Corpus, Estimator, GroupBy, Inscription,
    Liters, Normalization, ObjectType, SequenceKind, SignInventory,
};

use common::{fixture, fixture_corpus, fixture_grammar, fixture_inventory, run_cli};

type Outcome = Result<(), String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn single_sequence(signs: Vec<u32>, inv: &SignInventory) -> Corpus {
    Corpus::new(vec![Inscription::new("seq", ObjectType::Other, signs)], inv, "").unwrap()
}

fn per_symbol(c: &Corpus, n: usize, base: usize) -> f64 {
    block_entropy(c, n, Estimator::Plugin, Normalization::PerSymbol, base)
        .unwrap()
        .h(n)
        .unwrap()
}

/// Numeral 4 x vessel (40 L) = 160 L and numeral 1 x vessel = 40 L, exactly.
fn volumetric_reading() -> Outcome {
    let inv = fixture_inventory();
    let four = read_quantity(&[104, 201], &inv).map_err(|e| e.to_string())?;
    let one = read_quantity(&[101, 201], &inv).map_err(|e| e.to_string())?;
    ensure!(
        four.total_volume == Some(Liters::from_whole(160)),
        "4 x U = {:?}",
        four.total_volume
    );
    ensure!(
        one.total_volume == Some(Liters::from_whole(40)),
        "1 x U = {:?}",
        one.total_volume
    );
    ensure!(four.total_volume.unwrap().to_string() == "160", "rendered {}", four.total_volume.unwrap());
    Ok(())
}

/// 1,000 generated inscriptions over 10 seeds all segment as patterned with full coverage.
fn grammar_round_trip() -> Outcome {
    let inv = fixture_inventory();
    let g = fixture_grammar(&inv);
    let mut checked = 0;
    for seed in 0..10u64 {
        for ins in generate(&g, seed, 100).map_err(|e| e.to_string())? {
            let Classification::Patterned(seg) = segment(&ins, &g) else {
                return Err(format!("seed {seed}: {:?} is complex", ins.signs));
            };
            let rebuilt: Vec<u32> = Component::ALL
                .iter()
                .flat_map(|&c| seg.signs(c, &ins.signs).to_vec())
                .collect();
            ensure!(rebuilt == ins.signs, "seed {seed}: spans do not cover {:?}", ins.signs);
            checked += 1;
        }
    }
    ensure!(checked == 1000, "checked {checked}");
    Ok(())
}

/// A 10-sign text with no numeral and out-of-set codes is complex.
fn signboard() -> Outcome {
    let inv = fixture_inventory();
    let g = fixture_grammar(&inv);
    let c = fixture_corpus("corpus.tsv", &inv);
    let board = c.get("board-1").ok_or("fixture board-1 missing")?;
    ensure!(board.signs.len() == 10, "board has {} signs", board.signs.len());
    ensure!(!board.signs.iter().any(|&s| inv.is_numeral(s)), "board contains a numeral");
    ensure!(board.signs.iter().any(|&s| !g.recognizes(s)), "board has no out-of-set sign");
    match segment(board, &g) {
        Classification::Complex { .. } => Ok(()),
        other => Err(format!("classified as {other:?}")),
    }
}

/// Adjacent-pair tally written independently of the model code.
fn brute_force_bigrams(texts: &[Vec<u32>]) -> BTreeMap<(Symbol, Symbol), u64> {
    let mut tally = BTreeMap::new();
    for t in texts {
        let mut path = vec![Symbol::Begin];
        path.extend(t.iter().map(|&c| Symbol::Sign(c)));
        path.push(Symbol::End);
        for i in 0..path.len() - 1 {
            *tally.entry((path[i], path[i + 1])).or_insert(0u64) += 1;
        }
    }
    tally
}

/// 50 random mini-corpora: counts equal the brute-force tally; rows sum to 1 +- 1e-9.
fn bigram_oracle() -> Outcome {
    let inv = fixture_inventory();
    let codes: Vec<u32> = inv.codes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB16_4A3);
    for trial in 0..50 {
        let n_ins = rng.gen_range(1..=20);
        let texts: Vec<Vec<u32>> = (0..n_ins)
            .map(|_| {
                let len = rng.gen_range(1..=6);
                (0..len).map(|_| codes[rng.gen_range(0..6.min(codes.len()) + trial % 4)]).collect()
            })
            .collect();
        let c = Corpus::new(
            texts
                .iter()
                .enumerate()
                .map(|(i, s)| Inscription::new(format!("m{i}"), ObjectType::Other, s.clone()))
                .collect(),
            &inv,
            "",
        )
        .unwrap();
        let alpha = [0.0, 0.5, 1.0][trial % 3];
        let m = fit_bigram(&c, &inv, alpha).map_err(|e| e.to_string())?;
        let counts: BTreeMap<(Symbol, Symbol), u64> = m.observed().map(|(a, b, n)| ((a, b), n)).collect();
        ensure!(counts == brute_force_bigrams(&texts), "trial {trial}: counts differ");
        for s in m.states() {
            if let Some(row) = m.row(s) {
                let sum: f64 = row.iter().map(|(_, p)| p).sum();
                ensure!((sum - 1.0).abs() <= 1e-9, "trial {trial}: row {s} sums to {sum}");
            }
        }
    }
    Ok(())
}

/// Constant, uniform i.i.d. and alternating anchors.
fn entropy_anchors() -> Outcome {
    let inv = fixture_inventory();
    let constant = fixture_corpus("constant.tsv", &inv);
    let p = block_entropy(&constant, 6, Estimator::Plugin, Normalization::PerSymbol, inv.size_l())
        .map_err(|e| e.to_string())?;
    for n in 1..=6 {
        ensure!(p.h(n) == Some(0.0), "constant H_{n} = {:?}", p.h(n));
    }
    let long_constant = single_sequence(vec![101; 1000], &inv);
    for n in 1..=6 {
        ensure!(per_symbol(&long_constant, n, inv.size_l()) == 0.0, "constant x1000 H_{n} != 0");
    }

    let big = SignInventory::from_codes(1..=417).unwrap();
    let iid = generate_sequence(SequenceKind::UniformIid, 100_000, 2024, &big).map_err(|e| e.to_string())?;
    let h1 = per_symbol(&single_sequence(iid, &big), 1, 417);
    ensure!((0.98..=1.0).contains(&h1), "uniform L=417 H_1 = {h1}");

    let two = SignInventory::from_codes([1, 2]).unwrap();
    let alternating: Vec<u32> = (0..100_000).map(|i| 1 + (i % 2) as u32).collect();
    let c = single_sequence(alternating, &two);
    let h1 = per_symbol(&c, 1, 2);
    let h2 = per_symbol(&c, 2, 2);
    ensure!((h1 - 1.0).abs() <= 1e-9, "alternating H_1 = {h1}");
    ensure!((h2 - 0.5).abs() <= 1e-9, "alternating H_2/2 = {h2}");
    Ok(())
}

/// H_2 per symbol: uniform > Markov(grammar corpus) > constant, gaps > 0.05.
fn entropy_ordering() -> Outcome {
    const TOKENS: usize = 50_000;
    let inv = fixture_inventory();
    let g = fixture_grammar(&inv);
    let training = Corpus::new(generate(&g, 11, 2_000).map_err(|e| e.to_string())?, &inv, "")
        .map_err(|e| e.to_string())?;
    let model = fit_bigram(&training, &inv, 0.0).map_err(|e| e.to_string())?;
    let l = inv.size_l();
    let seq = |kind| generate_sequence(kind, TOKENS, 5, &inv).map_err(|e| e.to_string());
    let uniform = per_symbol(&single_sequence(seq(SequenceKind::UniformIid)?, &inv), 2, l);
    let markov = per_symbol(&single_sequence(seq(SequenceKind::Markov(&model))?, &inv), 2, l);
    let constant = per_symbol(&single_sequence(seq(SequenceKind::Constant)?, &inv), 2, l);
    println!("      H_2/2 uniform={uniform:.4} markov={markov:.4} constant={constant:.4} (L={l})");
    ensure!(uniform - markov > 0.05, "uniform {uniform} vs markov {markov}");
    ensure!(markov - constant > 0.05, "markov {markov} vs constant {constant}");
    Ok(())
}

/// 16 identical tablets form one cluster; 16 three-sided tablets form 3 engraver clusters.
fn cluster_detection() -> Outcome {
    let inv = fixture_inventory();
    let tablets = fixture_corpus("tablets16.tsv", &inv);
    let k = find_duplicate_clusters(&tablets, GroupBy::Inscription).map_err(|e| e.to_string())?;
    ensure!(k.len() == 1 && k[0].size() == 16, "got {:?}", k.iter().map(|c| c.size()).collect::<Vec<_>>());

    let sides = fixture_corpus("tablets_sides.tsv", &inv);
    let k = find_duplicate_clusters(&sides, GroupBy::ArtifactSides).map_err(|e| e.to_string())?;
    ensure!(k.len() == 3, "{} clusters in sides mode", k.len());
    ensure!(k.iter().map(|c| c.size()).sum::<usize>() == 16, "clusters do not cover 16 artifacts");
    ensure!(k.iter().all(|c| c.signature.len() == 3), "signature is not a side triple");
    Ok(())
}

/// Three tokens from one seal: identical impressions, distinct deterministic ids.
fn mint_homogeneity() -> Outcome {
    let inv = fixture_inventory();
    let c = fixture_corpus("corpus.tsv", &inv);
    let seal = c.get("seal-kanmer").ok_or("fixture seal missing")?;
    let tokens = mint_tokens(seal, 3, 99).map_err(|e| e.to_string())?;
    ensure!(tokens.len() == 3, "{} tokens", tokens.len());
    ensure!(tokens.windows(2).all(|w| w[0].impression == w[1].impression), "impressions differ");
    let mut ids: Vec<&str> = tokens.iter().map(|t| t.token_id.as_str()).collect();
    ids.sort();
    ids.dedup();
    ensure!(ids.len() == 3, "token ids collide");
    let again = mint_tokens(seal, 3, 99).map_err(|e| e.to_string())?;
    ensure!(token_csv(&tokens).as_bytes() == token_csv(&again).as_bytes(), "repeat run differs");
    Ok(())
}

/// Every subcommand twice gives identical bytes; error fixtures exit 1 citing id and position.
fn cli_determinism() -> Outcome {
    let f = |n: &str| fixture(n).display().to_string();
    let (inv, gr, corpus) = (f("inventory.tsv"), f("grammar.tsv"), f("corpus.tsv"));
    let sides = f("tablets_sides.tsv");
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", "--inventory", &inv, "--corpus", &corpus, "--grammar", &gr],
        vec!["summary", "--inventory", &inv, "--corpus", &corpus],
        vec!["classify", "--inventory", &inv, "--grammar", &gr, "--corpus", &corpus],
        vec!["segment", "--inventory", &inv, "--grammar", &gr, "--corpus", &corpus],
        vec!["entropy", "--inventory", &inv, "--corpus", &corpus, "--estimator", "miller-madow"],
        vec!["entropy", "--corpus", &corpus, "--normalization", "raw", "--n-max", "4"],
        vec!["bigram", "--inventory", &inv, "--corpus", &corpus, "--alpha", "0.5"],
        vec!["ngrams", "--inventory", &inv, "--corpus", &corpus, "--n", "3"],
        vec!["clusters", "--corpus", &sides, "--group-by", "sides"],
        vec!["clusters", "--corpus", &sides],
        vec!["rations", "--inventory", &inv, "--grammar", &gr, "--corpus", &corpus],
        vec!["mint", "--corpus", &corpus, "--seal", "seal-kanmer", "--count", "3", "--seed", "4"],
        vec!["generate", "--inventory", &inv, "--grammar", &gr, "--count", "50", "--seed", "9"],
    ];
    for args in &runs {
        let (c1, o1, e1) = run_cli(args);
        let (c2, o2, _) = run_cli(args);
        ensure!(c1 == 0 && c2 == 0, "{} exited {c1}: {e1}", args[0]);
        ensure!(!o1.is_empty(), "{} printed nothing", args[0]);
        ensure!(o1.as_bytes() == o2.as_bytes(), "{} output differs between runs", args[0]);
    }

    // File output, including the chart.
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = d.path().to_str().unwrap();
        let (code, _, err) = run_cli(&[
            "entropy", "--inventory", &inv, "--corpus", &corpus, "--corpus", &f("constant.tsv"), "--svg", "-o", out,
        ]);
        ensure!(code == 0, "entropy -o exited {code}: {err}");
    }
    for name in ["entropy.csv", "entropy.svg"] {
        let a = std::fs::read(dirs[0].path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(|e| e.to_string())?;
        ensure!(a == b, "{name} differs between runs");
    }

    let bad = f("unknown_code.tsv");
    let failing: Vec<Vec<&str>> = vec![
        vec!["validate", "--inventory", &inv, "--corpus", &bad],
        vec!["segment", "--inventory", &inv, "--grammar", &gr, "--corpus", &bad],
        vec!["classify", "--inventory", &inv, "--grammar", &gr, "--corpus", &bad],
        vec!["rations", "--inventory", &inv, "--grammar", &gr, "--corpus", &bad],
        vec!["summary", "--inventory", &inv, "--corpus", &bad],
        vec!["entropy", "--inventory", &inv, "--corpus", &bad],
        vec!["bigram", "--inventory", &inv, "--corpus", &bad],
    ];
    for args in &failing {
        let (code, out, err) = run_cli(args);
        ensure!(code == 1, "{} on bad corpus exited {code}", args[0]);
        ensure!(out.is_empty(), "{} wrote output on error", args[0]);
        ensure!(
            err.contains("bad-1") && err.contains("position 1") && err.contains("unknown_code.tsv:2"),
            "{} error lacks id/position: {err}",
            args[0]
        );
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("AC1", "volumetric reading", volumetric_reading, Duration::from_secs(1)),
        ("AC2", "grammar round-trip", grammar_round_trip, Duration::from_secs(5)),
        ("AC3", "signboard is complex", signboard, Duration::from_secs(5)),
        ("AC4", "bigram oracle equivalence", bigram_oracle, Duration::from_secs(10)),
        ("AC5", "entropy bounds and anchors", entropy_anchors, Duration::from_secs(10)),
        ("AC6", "entropy ordering", entropy_ordering, Duration::from_secs(30)),
        ("AC7", "cluster detection", cluster_detection, Duration::from_secs(5)),
        ("AC8", "mint homogeneity", mint_homogeneity, Duration::from_secs(5)),
        ("AC9", "CLI determinism", cli_determinism, Duration::from_secs(30)),
    ];
    let mut failed = Vec::new();
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > limit {
            outcome = Err(format!("took {elapsed:?}, limit {limit:?}"));
        }
        match &outcome {
            Ok(()) => println!("{id} PASS  {name} ({:.2}s)", elapsed.as_secs_f64()),
            Err(why) => {
                println!("{id} FAIL  {name} ({:.2}s): {why}", elapsed.as_secs_f64());
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
