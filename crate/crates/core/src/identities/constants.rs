use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::padic::hensel_embed;
use crate::quadfield::SplitPrime;

/// The two p-adic constants
/// `c₂ = 1/(1-x) + 1/(1-y) - 1` and `c₃ = (1-y)/(1-x) + y`
/// with `x = i^{m-1}(π)`, `y = i^{m-1}(π̄)`, reduced mod `pⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentConstants {
    pub m: (i64, i64),
    pub p: u64,
    pub n: u32,
    pub x: u64,
    pub y: u64,
    /// `None` when `1 - y` is not invertible.
    pub c_sum: Option<u64>,
    pub c_ratio: u64,
    /// `m >= (2, 2)`, where `c_sum ≡ 1 mod p` is expected.
    pub sum_expected_one: bool,
    /// `m₂ = 1`, where `c_ratio ≡ 1 mod p` is expected.
    pub ratio_expected_one: bool,
}

impl ExponentConstants {
    /// Whether every expected congruence to 1 mod p holds.
    pub fn congruences_hold(&self) -> bool {
        let one = |v: u64| v % self.p == 1;
        (!self.sum_expected_one || self.c_sum.is_some_and(one))
            && (!self.ratio_expected_one || one(self.c_ratio))
    }
}

pub fn exponent_constants(m: (i64, i64), sp: &SplitPrime, n: u32) -> Result<ExponentConstants> {
    if m.0 < 1 || m.1 < 1 {
        return Err(Error::InvalidIndex(format!(
            "m = {m:?} must satisfy m >= (1, 1)"
        )));
    }
    let emb = hensel_embed(sp, n)?;
    let pn = emb.modulus;
    let e = (m.0 - 1, m.1 - 1);
    let x = emb.i_power(e, &sp.pi)?;
    let y = emb.i_power(e, &sp.pi_bar)?;
    let one_minus = |v: u64| sub_mod(1, v, pn);
    let inv_x = inv_mod(one_minus(x), pn).ok_or(Error::NonInvertibleDenominator(x % sp.p))?;
    let inv_y = inv_mod(one_minus(y), pn);
    let c_sum = inv_y.map(|iy| sub_mod(add_mod(inv_x, iy, pn), 1, pn));
    let c_ratio = add_mod(mul_mod(one_minus(y), inv_x, pn), y, pn);
    Ok(ExponentConstants {
        m,
        p: sp.p,
        n,
        x,
        y,
        c_sum,
        c_ratio,
        sum_expected_one: m.0 >= 2 && m.1 >= 2,
        ratio_expected_one: m.1 == 1,
    })
}
