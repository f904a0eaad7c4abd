use rug::Integer;
use serde::Serialize;

use super::{Field, FieldContext, QuadInt};
use crate::error::{Error, Result};
use crate::ntheory::{inv_mod, is_prime, legendre, mul_mod, reduce_i128, sqrt_mod};

/// Tag recorded in reports describing how `π` is normalized.
pub const CANONICALIZATION: &str = "b>0, min (b,|a|), a>=0 on ties; over unit and conjugate orbit";

/// A split rational prime `p = π π̄` with a normalized generator `π`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPrime {
    pub p: u64,
    pub pi: QuadInt,
    pub pi_bar: QuadInt,
}

impl SplitPrime {
    pub fn field(&self) -> Field {
        self.pi.field()
    }

    /// The same prime with the roles of `π` and `π̄` exchanged.
    pub fn swapped(&self) -> SplitPrime {
        SplitPrime {
            p: self.p,
            pi: self.pi_bar.clone(),
            pi_bar: self.pi.clone(),
        }
    }

    /// Replaces `π` by `u·π`, keeping `π̄` its conjugate.
    pub fn with_unit(&self, u: &QuadInt) -> SplitPrime {
        let pi = u * &self.pi;
        SplitPrime {
            p: self.p,
            pi_bar: pi.conj(),
            pi,
        }
    }

    /// Roots `(r1, r2)` in `[0, p)` of the minimal polynomial of ω with
    /// `ω ≡ r1 mod (π)` and `ω ≡ r2 mod (π̄)`.
    pub fn omega_roots(&self) -> (u64, u64) {
        let p = self.p;
        let a = residue(self.pi.a(), p);
        let b = residue(self.pi.b(), p);
        let binv = inv_mod(b, p).expect("b of a split prime is prime to p");
        let r1 = mul_mod(p - a % p, binv, p) % p;
        let t = self.field().t() as u64;
        let r2 = (t + p - r1) % p;
        (r1, r2)
    }
}

/// `x mod m` in `[0, m)`.
pub fn residue(x: &Integer, m: u64) -> u64 {
    let m = Integer::from(m);
    let mut r = Integer::from(x % &m);
    if r < 0 {
        r += &m;
    }
    r.to_u64().expect("residue fits in u64")
}

fn key(x: &QuadInt) -> (Integer, Integer, bool) {
    (x.b().clone(), x.a().clone().abs(), *x.a() < 0)
}

/// Normal form of `x` over its orbit under units and conjugation.
///
/// Keeps candidates with `b > 0`, then minimizes `(b, |a|)` and prefers `a >= 0`.
pub fn canonicalize(x: &QuadInt) -> QuadInt {
    let units = x.field().units();
    let xb = x.conj();
    units
        .iter()
        .flat_map(|u| [u * x, u * &xb])
        .filter(|c| *c.b() > 0)
        .min_by_key(key)
        .unwrap_or_else(|| x.clone())
}

/// Splits `p` as `π π̄` by Cornacchia's algorithm on `x² + |D| y² = 4p`.
pub fn split_prime(ctx: &FieldContext, p: u64) -> Result<SplitPrime> {
    split_in(ctx.field, p)
}

pub fn split_in(field: Field, p: u64) -> Result<SplitPrime> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotAPrime(p));
    }
    let disc = field.discriminant();
    let d = field.d();
    if disc.unsigned_abs().is_multiple_of(p) {
        return Err(Error::RamifiedPrime { p, d });
    }
    if legendre(disc, p) != 1 {
        return Err(Error::InertPrime { p, d });
    }
    let (x, y) = cornacchia(disc, p).expect("a split prime in a class-number-one field is a norm");
    let pi = match field.omega_kind() {
        super::OmegaKind::SqrtMinusD => QuadInt::new(field, x / 2, y),
        super::OmegaKind::HalfInteger => QuadInt::new(field, (x - y) / 2, y),
    };
    debug_assert_eq!(pi.norm(), p);
    let pi = canonicalize(&pi);
    Ok(SplitPrime {
        p,
        pi_bar: pi.conj(),
        pi,
    })
}

/// Solves `x² + |D| y² = 4p` with `x, y >= 0`, `D < 0` a discriminant.
fn cornacchia(disc: i64, p: u64) -> Option<(i64, i64)> {
    let absd = disc.unsigned_abs() as u128;
    let four_p = 4 * p as u128;
    let mut r = sqrt_mod(reduce_i128(disc as i128, p), p)? as u128;
    if (r % 2) != (absd % 2) {
        r = p as u128 - r;
    }
    let mut a = 2 * p as u128;
    let mut b = r;
    let bound = (four_p as f64).sqrt() as u128;
    let limit = (bound..=bound + 2)
        .rev()
        .find(|l| l * l <= four_p)
        .unwrap_or(bound);
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = four_p.checked_sub(b * b)?;
    if rest % absd != 0 {
        return None;
    }
    let c = rest / absd;
    let s = (c as f64).sqrt() as u128;
    let y = (s.saturating_sub(1)..=s + 1).find(|y| y * y == c)?;
    Some((b as i64, y as i64))
}
