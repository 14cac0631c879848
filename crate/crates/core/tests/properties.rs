//! Property tests on randomly generated growth expressions.

use std::sync::Arc;

use proptest::prelude::*;
use ultraseq_core::asymptotics::GrowthExpr;
use ultraseq_core::gennum::{GenNumber, NumRep, Space};
use ultraseq_core::seqspaces::{ultranorm, SeqRep};
use ultraseq_core::values::{ExtReal, Truth};
use ultraseq_core::weights::WeightFamily;

/// `c · n^a · (log n)^b`, exponents in halves.
fn term() -> impl Strategy<Value = (f64, f64, f64)> {
    (
        prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]),
        -12i32..=12,
        -6i32..=6,
    )
        .prop_map(|(c, a, b)| (c, a as f64 / 2.0, b as f64 / 2.0))
}

fn text((c, a, b): (f64, f64, f64)) -> String {
    format!("{}*n^({})*log(n)^({})", c, a, b)
}

fn expr() -> impl Strategy<Value = String> {
    prop::collection::vec(term(), 1..=3)
        .prop_map(|ts| ts.into_iter().map(text).collect::<Vec<_>>().join(" + "))
}

fn log_norm(s: &SeqRep) -> ExtReal {
    ultranorm(s, WeightFamily::colombeau().single_weight().unwrap())
        .unwrap()
        .log_value
}

fn num(t: &str) -> NumRep {
    NumRep::parse(t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Under `r = 1/log n` the ultranorm of a sum of power terms is `e^a`
    /// for the largest exponent `a`.
    #[test]
    fn norm_of_a_sum_is_the_largest_exponent(ts in prop::collection::vec(term(), 1..=3)) {
        let top = ts.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let e: GrowthExpr = ts.iter().map(|t| text(*t)).collect::<Vec<_>>().join(" + ").parse().unwrap();
        prop_assert_eq!(log_norm(&SeqRep::symbolic(e)), ExtReal::Finite(top));
    }

    /// The norm is multiplicative on products of growth expressions.
    #[test]
    fn norm_is_multiplicative(a in expr(), b in expr()) {
        let (x, y): (GrowthExpr, GrowthExpr) = (a.parse().unwrap(), b.parse().unwrap());
        let lhs = log_norm(&SeqRep::symbolic(x.mul(&y)));
        let (ExtReal::Finite(p), ExtReal::Finite(q)) = (log_norm(&SeqRep::symbolic(x)), log_norm(&SeqRep::symbolic(y))) else {
            return Err(TestCaseError::fail("nonzero power sums have finite norms"));
        };
        prop_assert_eq!(lhs, ExtReal::Finite(p + q));
    }

    /// The ultrametric inequality on differences.
    #[test]
    fn ultrametric_triangle(a in expr(), b in expr(), c in expr()) {
        let d = |u: &str, v: &str| log_norm(&num(u).sub(&num(v)).unwrap().magnitude().unwrap());
        prop_assert!(d(&a, &b) <= d(&a, &c).max(d(&c, &b)));
    }

    /// Ring laws hold in the quotient: commutativity and distributivity.
    #[test]
    fn ring_laws(a in expr(), b in expr(), c in expr()) {
        let space = Arc::new(Space::colombeau());
        let (x, y, z) = (GenNumber::parse(&a, &space).unwrap(), GenNumber::parse(&b, &space).unwrap(), GenNumber::parse(&c, &space).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().equals(&y.add(&x).unwrap()).unwrap(), Truth::Yes);
        prop_assert_eq!(x.mul(&y).unwrap().equals(&y.mul(&x).unwrap()).unwrap(), Truth::Yes);
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs.equals(&rhs).unwrap(), Truth::Yes);
    }

    /// The sampled tier brackets the exact value for single power terms.
    #[test]
    fn sampled_band_contains_exact_value(t in term()) {
        let (c, a, b) = t;
        let s = SeqRep::sampled_ln("term", 16, 1_000_000, move |n| {
            let l = (n as f64).ln();
            c.ln() + a * l + b * l.ln()
        }).unwrap();
        let v = ultranorm(&s, WeightFamily::colombeau().single_weight().unwrap()).unwrap();
        let (lo, hi) = v.band();
        prop_assert!(lo <= a.exp() && a.exp() <= hi, "{} not in [{}, {}]", a.exp(), lo, hi);
    }
}
