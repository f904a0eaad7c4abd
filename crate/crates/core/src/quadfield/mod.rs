//! Exact arithmetic in the imaginary quadratic fields of class number one.

mod field;
mod int;
mod residue;
mod split;

pub use field::{make_field, Field, FieldContext, OmegaKind, CLASS_NUMBER_ONE};
pub use int::QuadInt;
pub use residue::{ideals_coprime, prime_transversal, residue_transversal, Hnf, ResidueRing};
pub use split::{canonicalize, residue, split_in, split_prime, SplitPrime, CANONICALIZATION};
