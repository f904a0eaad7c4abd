//! Numerical verification of the exact identities satisfied by the `θ_𝔞`,
//! and the p-adic exponent constants.

mod checks;
mod constants;
mod report;
mod suite;

pub use checks::{
    check_cross_relation, check_distribution, check_galois_action, check_lemma32_step,
    check_lemma33_norm_step, check_lemma33_translate, check_norm_relation, norm_cosets,
    roots_of_unity_mod,
};
pub use constants::{exponent_constants, ExponentConstants};
pub use report::{params, IdentityReport};
pub use suite::{run_suite, Suite, SuiteParams};
