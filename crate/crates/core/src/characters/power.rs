use rayon::prelude::*;
use serde::Serialize;

use super::unit::{AlgebraicUnit, QuadPoly};
use crate::error::{Error, Result};
use crate::ntheory::{
    add_mod, inv_mod, is_prime, legendre, mul_mod, pow_mod, reduce_i128, sqrt_mod, sub_mod,
};
use crate::quadfield::residue;

/// Default ceiling on test primes `q`.
pub const DEFAULT_Q_BOUND: u64 = 10_000_000;

/// Dense polynomials over `F_q`, constant term first, no trailing zeros.
mod fq {
    use super::*;

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn monic(a: Poly, q: u64) -> Poly {
        match a.last() {
            Some(&lead) => {
                let inv = inv_mod(lead, q).expect("non-zero lead");
                a.iter().map(|&c| mul_mod(c, inv, q)).collect()
            }
            None => a,
        }
    }

    pub fn sub(a: &Poly, b: &Poly, q: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), q))
            .collect();
        trim(out)
    }

    /// `(quotient, remainder)` of `a` by a non-zero `b`.
    pub fn divrem(a: &Poly, b: &Poly, q: u64) -> (Poly, Poly) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let inv = inv_mod(b[db], q).expect("non-zero divisor");
        let mut quo = vec![0; r.len() - db];
        for i in (0..quo.len()).rev() {
            let c = mul_mod(r[i + db], inv, q);
            quo[i] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[i + j] = sub_mod(r[i + j], mul_mod(c, bj, q), q);
                }
            }
        }
        r.truncate(db);
        (trim(quo), trim(r))
    }

    pub fn mulmod(a: &Poly, b: &Poly, f: &Poly, q: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
            }
        }
        divrem(&trim(out), f, q).1
    }

    pub fn powmod(base: &Poly, mut e: u64, f: &Poly, q: u64) -> Poly {
        let mut acc: Poly = divrem(&vec![1], f, q).1;
        let mut b = divrem(base, f, q).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, f, q);
            }
            b = mulmod(&b, &b, f, q);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &Poly, b: &Poly, q: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = divrem(&a, &b, q).1;
            a = b;
            b = r;
        }
        monic(a, q)
    }

    /// Roots in `F_q` of a monic `f`, sorted and without repetition.
    pub fn roots(f: &Poly, q: u64) -> Vec<u64> {
        if f.len() <= 1 {
            return Vec::new();
        }
        let x = vec![0, 1];
        let xq = powmod(&x, q, f, q);
        let g = gcd(f, &sub(&xq, &x, q), q);
        let mut out = Vec::new();
        split(&g, q, &mut out);
        out.sort_unstable();
        out
    }

    /// Splits a product of distinct linear factors by `gcd(g, (X+δ)^{(q-1)/2} - 1)`, `δ = 0, 1, ...`.
    fn split(g: &Poly, q: u64, out: &mut Vec<u64>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(sub_mod(0, g[0], q)),
            _ => {
                for delta in 0..q {
                    let h = powmod(&vec![delta, 1], (q - 1) / 2, g, q);
                    let h = gcd(g, &sub(&h, &vec![1], q), q);
                    if h.len() > 1 && h.len() < g.len() {
                        let (rest, _) = divrem(g, &h, q);
                        split(&h, q, out);
                        split(&monic(rest, q), q, out);
                        return;
                    }
                }
                unreachable!("a squarefree split polynomial always separates");
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerOutcome {
    /// Some root is not a p-th power in its residue field: a proof.
    NonPower,
    /// Every root tested is a p-th power residue.
    LikelyPower,
    /// Fewer usable test primes than requested and no certificate.
    Inconclusive,
}

/// Roots of the minimal polynomial at one prime `𝔮` above `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub q: u64,
    /// Image of `ω` in `O_K/𝔮 = F_q`; absent when the polynomial is rational.
    pub omega_image: Option<u64>,
    pub roots: Vec<u64>,
    /// `r^{(q-1)/p} mod q` for each root.
    pub residues: Vec<u64>,
    pub certifies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerTest {
    pub p: u64,
    pub trials: usize,
    pub outcome: PowerOutcome,
    pub records: Vec<TrialRecord>,
    /// Distinct `q` at which some root is a non-residue.
    pub certifying_primes: Vec<u64>,
    /// Largest `q` examined.
    pub last_q: u64,
}

/// Records at every usable prime above `q`, or an empty list if `q` is unusable.
fn test_prime(poly: &QuadPoly, p: u64, q: u64) -> Vec<TrialRecord> {
    let field = poly.field();
    let images: Vec<Option<u64>> = if poly.is_rational() {
        vec![None]
    } else {
        // primes of degree one above q: roots of ω² - tω + n mod q
        let disc = field.discriminant();
        if q <= field.d() as u64 || legendre(disc, q) != 1 {
            return Vec::new();
        }
        let s = sqrt_mod(reduce_i128(disc as i128, q), q).expect("residue");
        let inv2 = q.div_ceil(2);
        let t = field.t() as u64;
        let r = mul_mod(add_mod(t, s, q), inv2, q);
        vec![Some(r), Some(sub_mod(t, r, q))]
    };
    let e = (q - 1) / p;
    images
        .into_iter()
        .filter_map(|img| {
            let f: Vec<u64> = poly
                .0
                .iter()
                .map(|c| {
                    let a = residue(c.a(), q);
                    match img {
                        Some(r) => add_mod(a, mul_mod(residue(c.b(), q), r, q), q),
                        None => a,
                    }
                })
                .collect();
            if f[0] == 0 {
                return None;
            }
            let roots = fq::roots(&fq::trim(f), q);
            if roots.is_empty() {
                return None;
            }
            let residues: Vec<u64> = roots.iter().map(|&r| pow_mod(r, e, q)).collect();
            let certifies = residues.iter().any(|&x| x != 1);
            Some(TrialRecord {
                q,
                omega_image: img,
                roots,
                residues,
                certifies,
            })
        })
        .collect()
}

/// p-th power test on a polynomial with `O_K` coefficients, scanning `q ≡ 1 mod p`
/// up to `bound` until `trials` usable primes are found.
pub fn pth_power_test_poly(
    poly: &QuadPoly,
    p: u64,
    trials: usize,
    bound: u64,
) -> Result<PowerTest> {
    if trials < 3 {
        return Err(Error::Precondition(format!(
            "trials = {trials} must be at least 3"
        )));
    }
    if p < 5 || !is_prime(p) {
        return Err(Error::NotAPrime(p));
    }
    if poly.constant_term().is_zero() {
        return Err(Error::Precondition(
            "minimal polynomial has zero constant term".into(),
        ));
    }
    const BATCH: u64 = 256;
    let mut records = Vec::new();
    let mut usable = 0usize;
    let mut last_q = 0;
    let mut k = 1u64;
    'scan: while usable < trials {
        let candidates: Vec<u64> = (k..k + BATCH)
            .map(|j| 1 + j * p)
            .filter(|&q| q <= bound && is_prime(q))
            .collect();
        if candidates.is_empty() && 1 + k * p > bound {
            break;
        }
        k += BATCH;
        let batch: Vec<Vec<TrialRecord>> = candidates
            .par_iter()
            .map(|&q| test_prime(poly, p, q))
            .collect();
        for (q, recs) in candidates.iter().zip(batch) {
            if recs.is_empty() {
                continue;
            }
            records.extend(recs);
            usable += 1;
            last_q = *q;
            if usable == trials {
                break 'scan;
            }
        }
    }
    if usable == 0 {
        return Err(Error::SearchExhausted { bound });
    }
    let mut certifying_primes: Vec<u64> = records
        .iter()
        .filter(|r| r.certifies)
        .map(|r| r.q)
        .collect();
    certifying_primes.dedup();
    let outcome = if !certifying_primes.is_empty() {
        PowerOutcome::NonPower
    } else if usable == trials {
        PowerOutcome::LikelyPower
    } else {
        PowerOutcome::Inconclusive
    };
    Ok(PowerTest {
        p,
        trials,
        outcome,
        records,
        certifying_primes,
        last_q,
    })
}

/// Tests whether `unit` is a p-th power in the field it generates over `K`,
/// through power residues of the roots of its minimal polynomial at
/// `trials` primes `q ≡ 1 mod p`.
pub fn pth_power_test(unit: &AlgebraicUnit, p: u64, trials: usize) -> Result<PowerTest> {
    pth_power_test_poly(&unit.minpoly, p, trials, DEFAULT_Q_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{Field, QuadInt};

    #[test]
    fn roots_of_products_of_linear_factors() {
        let q = 101;
        // (X - 3)(X - 7)(X - 50)(X² + 1) has roots 3, 7, 10, 50, 91
        let mut f: fq::Poly = vec![1];
        for r in [3u64, 7, 50] {
            let lin = [q - r, 1];
            let mut out = vec![0; f.len() + 1];
            for (i, &a) in f.iter().enumerate() {
                for (j, &b) in lin.iter().enumerate() {
                    out[i + j] = add_mod(out[i + j], mul_mod(a, b, q), q);
                }
            }
            f = out;
        }
        let sq = [1, 0, 1];
        let mut g = vec![0; f.len() + 2];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in sq.iter().enumerate() {
                g[i + j] = add_mod(g[i + j], mul_mod(a, b, q), q);
            }
        }
        assert_eq!(fq::roots(&g, q), vec![3, 7, 10, 50, 91]);
    }

    #[test]
    fn roots_agree_with_brute_force() {
        for q in [11u64, 31, 41, 61, 71] {
            for seed in 0..40u64 {
                let f: fq::Poly = (0..5)
                    .map(|i| (seed * 7 + i * i * 13 + 3 * i) % q)
                    .chain([1])
                    .collect();
                let brute: Vec<u64> = (0..q)
                    .filter(|&x| {
                        f.iter()
                            .rev()
                            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
                            == 0
                    })
                    .collect();
                assert_eq!(fq::roots(&f, q), brute, "q={q} f={f:?}");
            }
        }
    }

    fn linear(x: i64) -> QuadPoly {
        let f = Field::new(1).unwrap();
        QuadPoly(vec![QuadInt::from_i64(f, -x), QuadInt::one(f)])
    }

    #[test]
    fn fifth_power_is_likely_a_power() {
        let t = pth_power_test_poly(&linear(32), 5, 5, DEFAULT_Q_BOUND).unwrap();
        assert_eq!(t.outcome, PowerOutcome::LikelyPower);
        assert!(t.certifying_primes.is_empty());
        assert_eq!(t.records.len(), 5);
        assert!(t.records.iter().all(|r| r.q % 5 == 1));
    }

    #[test]
    fn two_is_certified_at_eleven() {
        let t = pth_power_test_poly(&linear(2), 5, 3, DEFAULT_Q_BOUND).unwrap();
        assert_eq!(t.outcome, PowerOutcome::NonPower);
        assert_eq!(t.certifying_primes[0], 11);
        assert_eq!(t.records[0].residues, vec![pow_mod(2, 2, 11)]);
    }

    #[test]
    fn small_bounds_and_bad_arguments() {
        assert!(matches!(
            pth_power_test_poly(&linear(32), 5, 2, DEFAULT_Q_BOUND),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            pth_power_test_poly(&linear(32), 9, 3, DEFAULT_Q_BOUND),
            Err(Error::NotAPrime(9))
        ));
        assert!(matches!(
            pth_power_test_poly(&linear(32), 5, 3, 10),
            Err(Error::SearchExhausted { .. })
        ));
        let t = pth_power_test_poly(&linear(32), 5, 3, 40).unwrap();
        assert_eq!(t.outcome, PowerOutcome::Inconclusive);
    }

    #[test]
    fn non_rational_polynomials_use_split_primes_only() {
        let f = Field::new(1).unwrap();
        let x = QuadInt::new(f, 3, 2).pow(5);
        let poly = QuadPoly(vec![&QuadInt::zero(f) - &x, QuadInt::one(f)]);
        let t = pth_power_test_poly(&poly, 5, 4, DEFAULT_Q_BOUND).unwrap();
        assert_eq!(t.outcome, PowerOutcome::LikelyPower);
        assert!(t
            .records
            .iter()
            .all(|r| r.q % 4 == 1 && r.omega_image.is_some()));
    }
}
