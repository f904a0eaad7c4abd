use serde::{Deserialize, Serialize};

use super::epsilon::{admissibility_value, admissible_ideal, epsilon_stable};
use super::power::{pth_power_test_poly, PowerOutcome, PowerTest, DEFAULT_Q_BOUND};
use super::unit::QuadPoly;
use crate::analytic::{log2, PrecisionContext};
use crate::error::{Error, Result};
use crate::padic::frobenius_generates_test;
use crate::quadfield::{split_in, Field, QuadInt, SplitPrime};

/// A ray class field whose class number may be supplied as an external fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayLevel {
    /// `K(p)`.
    Full,
    /// `K(𝔭)` with `𝔭 = (π)`.
    P,
    /// `K(𝔭̄)`.
    PBar,
}

/// Whether `p` divides the class number of `K(level)`, as asserted by the user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberFact {
    pub d: u32,
    pub p: u64,
    pub level: RayLevel,
    pub divisible_by_p: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberFacts {
    #[serde(default)]
    pub facts: Vec<ClassNumberFact>,
}

impl ClassNumberFacts {
    pub fn lookup(&self, d: u32, p: u64, level: RayLevel) -> Option<bool> {
        self.facts
            .iter()
            .find(|f| f.d == d && f.p == p && f.level == level)
            .map(|f| f.divisible_by_p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Surjective,
    NotSurjective,
    Inconclusive,
    TriviallyZero,
}

/// One step of the reasoning behind a verdict.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    IndexMembership {
        w: u32,
        in_index: bool,
    },
    CaseAnalysis {
        case: u8,
        rule: String,
    },
    /// Whether surjectivity is equivalent to `ε_{m,1,𝔞}` not being a p-th power.
    EpsilonCriterion {
        applicable: bool,
        reason: String,
    },
    Admissibility {
        ideal: QuadInt,
        auto_selected: bool,
        /// `N𝔞 - χ^{1-m}(σ_𝔞) mod p`.
        value: u64,
    },
    Recognition {
        precision_bits: u32,
        degree: usize,
        rounding_residual_log2: Option<f64>,
        pipeline_residual_log2: Option<f64>,
        stable_under_doubling: bool,
        minpoly: QuadPoly,
    },
    PowerTest(PowerTest),
    FrobeniusGenerates {
        /// The ray class field whose Galois group the Frobenius must generate.
        group_of: RayLevel,
        generates: bool,
    },
    ClassNumber {
        level: RayLevel,
        /// `None` when no fact was supplied.
        divisible_by_p: Option<bool>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SurjectivityVerdict {
    pub d: u32,
    pub p: u64,
    pub m: (i64, i64),
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone)]
pub struct VerdictOptions {
    pub prec: PrecisionContext,
    pub trials: usize,
    pub q_bound: u64,
    pub facts: ClassNumberFacts,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            prec: PrecisionContext::default(),
            trials: 5,
            q_bound: DEFAULT_Q_BOUND,
            facts: ClassNumberFacts::default(),
        }
    }
}

/// How an index is decided, before any numerics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `m₁ ≢ m₂ mod w`.
    OutsideIndex,
    /// `m >= (2, 2)`, `m ≡ (1, 1) mod p-1`.
    CentralTrivial,
    /// `m >= (2, 2)`, `m ≡ (0, 0) mod p-1`.
    CentralZero,
    /// `m >= (2, 2)` otherwise; flags record `m₁ ≡ 1`, `m₂ ≡ 1 mod p-1`.
    Central { m1_one: bool, m2_one: bool },
    /// `m₂ = 1` (or `m₁ = 1`) with the other entry `≡ 1 mod p-1`.
    EdgeTrivial { side_p: bool },
    /// `m₂ = 1` (`side_p`) or `m₁ = 1`, otherwise.
    Edge { side_p: bool },
}

pub fn classify(field: Field, p: u64, m: (i64, i64)) -> Result<Classification> {
    if m.0 < 1 || m.1 < 1 || m == (1, 1) {
        return Err(Error::InvalidIndex(format!(
            "m = {m:?} must satisfy m >= (1, 1), m != (1, 1)"
        )));
    }
    let w = field.w() as i64;
    if (m.0 - m.1).rem_euclid(w) != 0 {
        return Ok(Classification::OutsideIndex);
    }
    let pm1 = p as i64 - 1;
    let one = |k: i64| (k - 1).rem_euclid(pm1) == 0;
    let zero = |k: i64| k.rem_euclid(pm1) == 0;
    Ok(match m {
        (a, 1) => {
            if one(a) {
                Classification::EdgeTrivial { side_p: true }
            } else {
                Classification::Edge { side_p: true }
            }
        }
        (1, b) => {
            if one(b) {
                Classification::EdgeTrivial { side_p: false }
            } else {
                Classification::Edge { side_p: false }
            }
        }
        (a, b) if one(a) && one(b) => Classification::CentralTrivial,
        (a, b) if zero(a) && zero(b) => Classification::CentralZero,
        (a, b) => Classification::Central {
            m1_one: one(a),
            m2_one: one(b),
        },
    })
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Class-number and Frobenius hypotheses under which the index is known to
/// be surjective; `Some(true)` only when every one is confirmed.
fn hypotheses(
    sp: &SplitPrime,
    class: Classification,
    opts: &VerdictOptions,
    evidence: &mut Vec<Evidence>,
) -> Result<Option<bool>> {
    let d = sp.field().d();
    let fact = |level: RayLevel, ev: &mut Vec<Evidence>| {
        let f = opts.facts.lookup(d, sp.p, level);
        ev.push(Evidence::ClassNumber {
            level,
            divisible_by_p: f,
        });
        f.map(|div| !div)
    };
    let mut all = match class {
        Classification::Edge { side_p: true } => fact(RayLevel::P, evidence),
        Classification::Edge { side_p: false } => fact(RayLevel::PBar, evidence),
        _ => fact(RayLevel::Full, evidence),
    };
    if let Classification::Central { m1_one, m2_one } = class {
        // m₁ ≡ 1 needs Frob_𝔭 to generate Gal(K(𝔭̄)/K); m₂ ≡ 1 the mirror image.
        // Both are reported; only the relevant ones enter the hypotheses.
        for (flag, s, group_of) in [
            (m1_one, sp.clone(), RayLevel::PBar),
            (m2_one, sp.swapped(), RayLevel::P),
        ] {
            let generates = frobenius_generates_test(&s)?;
            evidence.push(Evidence::FrobeniusGenerates {
                group_of,
                generates,
            });
            if flag {
                all = all.map(|a| a && generates);
            }
        }
    }
    Ok(all)
}

/// Decides surjectivity of the mod-p elliptic Soulé character `κ_m` for
/// `K = Q(√-d)` and a split prime `p`, as far as the available evidence allows.
pub fn surjectivity_verdict(
    d: u32,
    p: u64,
    m: (i64, i64),
    ideal: Option<&QuadInt>,
    opts: &VerdictOptions,
) -> Result<SurjectivityVerdict> {
    let field = Field::new(d)?;
    let sp = split_in(field, p)?;
    let class = classify(field, p, m)?;
    let mut evidence = vec![Evidence::IndexMembership {
        w: field.w(),
        in_index: class != Classification::OutsideIndex,
    }];
    let done = |verdict, evidence| {
        Ok(SurjectivityVerdict {
            d: field.d(),
            p,
            m,
            verdict,
            evidence,
        })
    };
    match class {
        Classification::OutsideIndex => return done(Verdict::TriviallyZero, evidence),
        Classification::CentralTrivial => {
            evidence.push(Evidence::CaseAnalysis {
                case: 1,
                rule: "m >= (2,2) and m ≡ (1,1) mod p-1: epsilon is Galois invariant, so lies in O_K^× / p-th powers, which is trivial for p >= 5".into(),
            });
            return done(Verdict::NotSurjective, evidence);
        }
        Classification::EdgeTrivial { .. } => {
            evidence.push(Evidence::CaseAnalysis {
                case: 3,
                rule: "one entry 1, the other > 1 and ≡ 1 mod p-1: epsilon is pi^(12(Na-1)) up to units, not a p-th power when Na ≢ 1 mod p".into(),
            });
            return done(Verdict::Surjective, evidence);
        }
        Classification::CentralZero => {
            evidence.push(Evidence::CaseAnalysis {
                case: 2,
                rule: "m ≡ (0,0) mod p-1: surjective when p does not divide the class number of K(p)".into(),
            });
            evidence.push(Evidence::EpsilonCriterion {
                applicable: false,
                reason: "N(a) - χ^(1-m)(σ_a) ≡ 0 mod p for every a".into(),
            });
            let v = match hypotheses(&sp, class, opts, &mut evidence)? {
                Some(true) => Verdict::Surjective,
                _ => Verdict::Inconclusive,
            };
            return done(v, evidence);
        }
        Classification::Central { .. } => evidence.push(Evidence::CaseAnalysis {
            case: 2,
            rule: "m >= (2,2), m ≢ (1,1) mod p-1: decided by epsilon or by class-number hypotheses".into(),
        }),
        Classification::Edge { .. } => evidence.push(Evidence::CaseAnalysis {
            case: 4,
            rule: "one entry 1, the other ≢ 1 mod p-1: decided by epsilon or by the class number of K(𝔭) resp. K(𝔭̄)".into(),
        }),
    }
    evidence.push(Evidence::EpsilonCriterion {
        applicable: true,
        reason: "m ≢ (0,0) mod p-1 and the ideal is admissible: surjective iff epsilon is not a p-th power in K(p)".into(),
    });
    let alpha = match ideal {
        Some(a) => a.clone(),
        None => admissible_ideal(&sp, m, 10_000)?,
    };
    let stable = epsilon_stable(&sp, m, &alpha, opts.prec)?;
    evidence.push(Evidence::Admissibility {
        value: admissibility_value(&sp, m, &alpha)?,
        ideal: alpha,
        auto_selected: ideal.is_none(),
    });
    let unit = &stable.eps.projected;
    evidence.push(Evidence::Recognition {
        precision_bits: stable.prec.bits(),
        degree: unit.degree(),
        rounding_residual_log2: finite(log2(&unit.rounding_residual)),
        pipeline_residual_log2: finite(stable.eps.pipeline_residual_log2()),
        stable_under_doubling: true,
        minpoly: unit.minpoly.clone(),
    });
    let test = pth_power_test_poly(&unit.minpoly, p, opts.trials, opts.q_bound)?;
    let outcome = test.outcome;
    evidence.push(Evidence::PowerTest(test));
    let hyp = hypotheses(&sp, class, opts, &mut evidence)?;
    let verdict = match (outcome, hyp) {
        (PowerOutcome::NonPower, _) => Verdict::Surjective,
        (_, Some(true)) => Verdict::Surjective,
        _ => Verdict::Inconclusive,
    };
    done(verdict, evidence)
}
