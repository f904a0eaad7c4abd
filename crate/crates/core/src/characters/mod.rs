//! Level-one data for elliptic Soulé characters mod p: conjugate vectors of
//! theta values, isotypic projections, `ε_{m,1,𝔞}`, p-th power tests and
//! surjectivity verdicts.

mod epsilon;
mod power;
mod unit;
mod verdict;

pub use epsilon::{
    admissibility_value, admissible_ideal, conjugate_vector, epsilon_m1a, epsilon_stable,
    isotypic_product, recognise_stable, Epsilon, EpsilonShape, StableEpsilon,
};
pub use power::{
    pth_power_test, pth_power_test_poly, PowerOutcome, PowerTest, TrialRecord, DEFAULT_Q_BOUND,
};
pub use unit::{coefficient_bits, AlgebraicUnit, GaloisLabels, Level, QuadPoly};
pub use verdict::{
    classify, surjectivity_verdict, ClassNumberFact, ClassNumberFacts, Classification, Evidence,
    RayLevel, SurjectivityVerdict, Verdict, VerdictOptions,
};
