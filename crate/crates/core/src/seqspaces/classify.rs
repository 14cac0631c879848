use std::fmt;

use rayon::prelude::*;

use super::{ultranorm, Exactness, SeqError, SeqRep, Trend, UltranormValue};
use crate::values::{ExtReal, Mode, Truth};
use crate::weights::{Direction, WeightFamily};

/// Default bound for the `∃m` / `∀m` quantifiers over family members.
pub const DEFAULT_M_MAX: u32 = 16;

/// Exact values within this distance of a threshold exponent count as equal.
const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Negligible,
    Moderate,
    /// Moderate, not negligible, with an ultranorm exactly on the unit sphere.
    Boundary,
    /// Not moderate.
    Divergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Negligible => "negligible",
            Verdict::Moderate => "moderate, not negligible",
            Verdict::Boundary => "boundary (moderate, not negligible, ultranorm = 1)",
            Verdict::Divergent => "divergent (not moderate)",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ChannelValue {
    pub m: u32,
    pub channel: usize,
    pub label: String,
    pub result: Result<UltranormValue, SeqError>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub in_f: Truth,
    pub in_k: Truth,
    pub mode: Mode,
    pub direction: Direction,
    pub m_max: u32,
    pub details: Vec<ChannelValue>,
}

impl Classification {
    pub fn is_moderate(&self) -> Truth {
        self.in_f
    }
    pub fn is_negligible(&self) -> Truth {
        self.in_k
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.details {
            match &d.result {
                Ok(v) => writeln!(f, "m={} channel={} [{}]: {}", d.m, d.channel, d.label, v)?,
                Err(e) => writeln!(
                    f,
                    "m={} channel={} [{}]: inconclusive ({})",
                    d.m, d.channel, d.label, e
                )?,
            }
        }
        let scope = match self.direction {
            Direction::Single => String::new(),
            _ => format!(" [quantifiers verified up to m_max = {}]", self.m_max),
        };
        write!(
            f,
            "verdict: {} (mode {}, in F: {}, in K: {}){}",
            self.verdict, self.mode, self.in_f, self.in_k, scope
        )
    }
}

/// `⟦f⟧` is within the moderate threshold.
fn in_f(v: &Result<UltranormValue, SeqError>, mode: Mode) -> Truth {
    let Ok(v) = v else { return Truth::Inconclusive };
    match (&v.exactness, mode) {
        (Exactness::Exact, Mode::Standard) => Truth::from_bool(v.log_value != ExtReal::PosInf),
        (Exactness::Exact, Mode::UnitBall) => {
            Truth::from_bool(v.log_value <= ExtReal::Finite(EXACT_TOL))
        }
        (Exactness::Estimated { trend, .. }, Mode::Standard) => {
            Truth::from_bool(*trend != Trend::ToInfinity)
        }
        (Exactness::Estimated { lo, hi, .. }, Mode::UnitBall) => {
            if *hi <= 1.0 {
                Truth::Yes
            } else if *lo > 1.0 {
                Truth::No
            } else {
                Truth::Inconclusive
            }
        }
    }
}

/// `⟦f⟧` is within the negligible threshold.
fn in_k(v: &Result<UltranormValue, SeqError>, mode: Mode) -> Truth {
    let Ok(v) = v else { return Truth::Inconclusive };
    match (&v.exactness, mode) {
        (Exactness::Exact, Mode::Standard) => Truth::from_bool(v.log_value == ExtReal::NegInf),
        (Exactness::Exact, Mode::UnitBall) => {
            Truth::from_bool(v.log_value < ExtReal::Finite(-EXACT_TOL))
        }
        (Exactness::Estimated { trend, .. }, Mode::Standard) => {
            Truth::from_bool(*trend == Trend::ToZero)
        }
        (Exactness::Estimated { lo, hi, .. }, Mode::UnitBall) => {
            if *hi < 1.0 {
                Truth::Yes
            } else if *lo >= 1.0 {
                Truth::No
            } else {
                Truth::Inconclusive
            }
        }
    }
}

fn on_unit_sphere(v: &Result<UltranormValue, SeqError>) -> bool {
    matches!(v, Ok(u) if u.is_exact() && matches!(u.log_value, ExtReal::Finite(g) if g.abs() <= EXACT_TOL))
}

/// Classifies a bundle of channels (one per seminorm) against a weight family.
///
/// Case II: moderate iff some member keeps every channel moderate, negligible
/// iff every member makes every channel negligible. Case I swaps the
/// quantifiers. Members above `m_max` are not consulted.
pub fn classify(
    bundle: &[SeqRep],
    family: &WeightFamily,
    mode: Mode,
    m_max: u32,
) -> Result<Classification, SeqError> {
    if bundle.is_empty() {
        return Err(SeqError::EmptyBundle);
    }
    let members: Vec<_> = match family.direction {
        Direction::Single => family.members.iter().take(1).collect(),
        _ => family.members_up_to(m_max).collect(),
    };
    if members.is_empty() {
        return Err(SeqError::Inconsistent(format!(
            "family {} has no member with m <= {}",
            family.name, m_max
        )));
    }
    let jobs: Vec<(u32, usize)> = members
        .iter()
        .flat_map(|(m, _)| (0..bundle.len()).map(move |c| (*m, c)))
        .collect();
    let details: Vec<ChannelValue> = jobs
        .par_iter()
        .map(|&(m, c)| {
            let r = family.member(m).expect("member listed");
            ChannelValue {
                m,
                channel: c,
                label: bundle[c].label.clone(),
                result: ultranorm(&bundle[c], r),
            }
        })
        .collect();

    let per_member =
        |pred: &dyn Fn(&Result<UltranormValue, SeqError>, Mode) -> Truth| -> Vec<Truth> {
            members
                .iter()
                .map(|(m, _)| {
                    Truth::all(
                        details
                            .iter()
                            .filter(|d| d.m == *m)
                            .map(|d| pred(&d.result, mode)),
                    )
                })
                .collect()
        };
    let f_m = per_member(&in_f);
    let k_m = per_member(&in_k);
    let (in_f_all, in_k_all) = match family.direction {
        Direction::Single => (f_m[0], k_m[0]),
        Direction::CaseII => (Truth::any(f_m), Truth::all(k_m)),
        Direction::CaseI => (Truth::all(f_m), Truth::any(k_m)),
    };
    let sphere = mode == Mode::UnitBall && details.iter().any(|d| on_unit_sphere(&d.result));
    let verdict = match (in_f_all, in_k_all) {
        (_, Truth::Yes) => Verdict::Negligible,
        (Truth::Yes, Truth::No) if sphere => Verdict::Boundary,
        (Truth::Yes, Truth::No) => Verdict::Moderate,
        (Truth::No, _) => Verdict::Divergent,
        _ => Verdict::Inconclusive,
    };
    Ok(Classification {
        verdict,
        in_f: in_f_all,
        in_k: in_k_all,
        mode,
        direction: family.direction,
        m_max,
        details,
    })
}

/// Outcome of checking `k ∈ K, f ∈ F ⇒ k·f ∈ K` on one triple.
#[derive(Clone, Debug)]
pub struct IdealCheck {
    pub premise: Truth,
    pub conclusion: Truth,
    pub passed: bool,
    pub witness: String,
}

/// Verifies the ideal property on caller-supplied product channels.
pub fn ideal_check(
    k: &[SeqRep],
    f: &[SeqRep],
    product: &[SeqRep],
    family: &WeightFamily,
    mode: Mode,
    m_max: u32,
) -> Result<IdealCheck, SeqError> {
    if k.len() != f.len() || k.len() != product.len() {
        return Err(SeqError::Inconsistent(format!(
            "channel counts differ: k has {}, f has {}, product has {}",
            k.len(),
            f.len(),
            product.len()
        )));
    }
    let ck = classify(k, family, mode, m_max)?;
    let cf = classify(f, family, mode, m_max)?;
    let cp = classify(product, family, mode, m_max)?;
    let premise = ck.in_k.and(cf.in_f);
    let conclusion = cp.in_k;
    let passed = premise != Truth::Yes || conclusion == Truth::Yes;
    Ok(IdealCheck {
        premise,
        conclusion,
        passed,
        witness: format!("k: {}; f: {}; k*f: {}", ck.verdict, cf.verdict, cp.verdict),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{scale_to_weights, AsymptoticScale};

    fn one(s: &str) -> Vec<SeqRep> {
        vec![SeqRep::parse(s).unwrap()]
    }

    #[test]
    fn colombeau_examples() {
        let c = WeightFamily::colombeau();
        assert_eq!(
            classify(&one("n^7"), &c, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Moderate
        );
        assert_eq!(
            classify(&one("exp(n)"), &c, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Divergent
        );
        assert_eq!(
            classify(&one("exp(-log(n)^2)"), &c, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Negligible
        );
        assert!(matches!(
            classify(&[], &c, Mode::Standard, 16),
            Err(SeqError::EmptyBundle)
        ));
    }

    #[test]
    fn egorov_examples() {
        let e = WeightFamily::egorov(1, 16).unwrap();
        assert_eq!(
            classify(&one("exp(n^3)"), &e, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Moderate
        );
        let z = vec![SeqRep::eventually_zero(vec![3.0; 10])];
        assert_eq!(
            classify(&z, &e, Mode::Standard, 16).unwrap().verdict,
            Verdict::Negligible
        );
    }

    #[test]
    fn unit_ball_examples() {
        let infra = WeightFamily::infra_exponential();
        assert_eq!(
            classify(&one("exp(0.5*n)"), &infra, Mode::UnitBall, 16)
                .unwrap()
                .verdict,
            Verdict::Divergent
        );
        assert_eq!(
            classify(&one("exp(-0.5*n)"), &infra, Mode::UnitBall, 16)
                .unwrap()
                .verdict,
            Verdict::Negligible
        );
        assert_eq!(
            classify(&one("n^3"), &infra, Mode::UnitBall, 16)
                .unwrap()
                .verdict,
            Verdict::Boundary
        );
    }

    #[test]
    fn scale_family_quantifiers() {
        let w = scale_to_weights(&AsymptoticScale::power(), 1, 16).unwrap();
        assert_eq!(
            classify(&one("n^40"), &w, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Moderate
        );
        assert_eq!(
            classify(&one("exp(-n)"), &w, Mode::Standard, 16)
                .unwrap()
                .verdict,
            Verdict::Negligible
        );
    }

    #[test]
    fn ideal_example() {
        let c = WeightFamily::colombeau();
        let r = ideal_check(
            &one("exp(-log(n)^2)"),
            &one("n^3"),
            &one("exp(-log(n)^2)*n^3"),
            &c,
            Mode::Standard,
            16,
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.premise, Truth::Yes);
        let r = ideal_check(&one("0"), &one("n"), &one("0"), &c, Mode::Standard, 16).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn report_lists_each_channel() {
        let c = WeightFamily::colombeau();
        let s = classify(&one("n^2"), &c, Mode::Standard, 16)
            .unwrap()
            .to_string();
        assert!(s.starts_with("m=1 channel=0 [n^2]: exact e^2"));
        assert!(
            s.ends_with("verdict: moderate, not negligible (mode standard, in F: yes, in K: no)")
        );
    }
}
