//! Shared fixtures for the benchmarks: seeded corpora and spaces.

use std::sync::Arc;

use ultraseq_core::corpus::{Corpus, DEFAULT_SEED};
use ultraseq_core::genfun::Fun;
use ultraseq_core::gennum::{NumRep, Space};
use ultraseq_core::seqspaces::SeqRep;

/// Text of `count` corpus expressions.
pub fn expression_texts(count: usize) -> Vec<String> {
    Corpus::new(DEFAULT_SEED)
        .exprs(count)
        .iter()
        .map(|e| e.text())
        .collect()
}

/// Symbolic sequences for `count` corpus expressions.
pub fn sequences(count: usize) -> Vec<SeqRep> {
    Corpus::new(DEFAULT_SEED)
        .exprs(count)
        .iter()
        .map(|e| e.seq())
        .collect()
}

/// Unmodulated scalar sequences, for arithmetic.
pub fn numbers(count: usize) -> Vec<NumRep> {
    let mut c = Corpus::new(DEFAULT_SEED ^ 1);
    (0..count)
        .map(|_| NumRep::parse(&c.plain_expr().text()).expect("corpus expressions parse"))
        .collect()
}

/// A sampled channel `n ↦ c n^a (log n)^b`.
pub fn sampled_power(a: f64, b: f64) -> SeqRep {
    SeqRep::sampled_ln(format!("n^{} log^{}", a, b), 16, 1_000_000, move |n| {
        let l = (n as f64).ln();
        a * l + b * l.ln()
    })
    .expect("range is long enough")
}

pub fn functions(count: usize) -> Vec<Fun> {
    let mut c = Corpus::new(DEFAULT_SEED ^ 2);
    (0..count).map(|_| c.function()).collect()
}

pub fn colombeau() -> Arc<Space> {
    Arc::new(Space::colombeau())
}
