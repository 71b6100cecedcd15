#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::collections::BTreeMap;

use refloom::{
    extract_mode_flags, parse_source, run_passes, MemoryStore, ModeFlags, Namespace, PassConfig,
    PassesOutcome,
};

use oracle::Ns;

pub fn run_source(source: &str, jobname: &str) -> PassesOutcome {
    let doc = parse_source(source).expect("generated source parses");
    let flags = extract_mode_flags(&doc, ModeFlags::default());
    let mut store = MemoryStore::default();
    run_passes(&doc, &PassConfig::new(jobname, flags), &mut store, 4).expect("engine runs")
}

pub fn to_ns(ns: Namespace) -> Ns {
    match ns {
        Namespace::Section => Ns::S,
        Namespace::Paragraph => Ns::Ap,
        Namespace::Equation => Ns::Eq,
        Namespace::Lemma => Ns::Lm,
        Namespace::Citation => Ns::C,
    }
}

/// Engine label table in the oracle's shape.
pub fn label_map(table: &refloom::LabelTable) -> BTreeMap<(Ns, String), String> {
    table
        .snapshot()
        .into_iter()
        .map(|((ns, l), v)| ((to_ns(ns), l), v))
        .collect()
}

pub fn sorted_messages(diags: &[refloom::Diagnostic]) -> Vec<String> {
    let mut v: Vec<String> = diags.iter().map(|d| d.message.clone()).collect();
    v.sort();
    v
}
