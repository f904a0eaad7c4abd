//! Complex-analytic model `C/O_K` of the CM elliptic curve: ℘, `Δ`, torsion
//! points and the theta functions `θ_𝔞`.

mod lattice;
mod point;
mod precision;
mod theta;

pub use lattice::{make_lattice, relative_error, Lattice};
pub use point::{basis_combination, basis_points, torsion_points, LatticePoint, TorsionPoint};
pub use precision::{PrecisionContext, DEFAULT_BITS, GUARD_BITS, MIN_BITS};
pub use theta::{theta_a, ThetaFunction, ThetaValue};

use rug::Float;

/// Decimal rendering with as many digits as the precision carries.
pub fn decimal(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).floor() as usize;
    x.to_string_radix(10, Some(digits.max(1)))
}

/// `log₂ x`, or `-inf` for zero.
pub fn log2(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}
