#![allow(dead_code)]

use std::path::PathBuf;

use sealscript::{load_corpus, load_grammar, load_inventory, Corpus, GrammarSpec, SignInventory};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_inventory() -> SignInventory {
    load_inventory(fixture("inventory.tsv")).expect("fixture inventory")
}

pub fn fixture_grammar(inv: &SignInventory) -> GrammarSpec {
    load_grammar(fixture("grammar.tsv"), inv).expect("fixture grammar")
}

pub fn fixture_corpus(name: &str, inv: &SignInventory) -> Corpus {
    load_corpus(fixture(name), inv).expect("fixture corpus")
}

/// Runs the CLI in-process, returning (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sealscript").chain(args.iter().copied());
    let code = sealscript::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}
