//! The two embeddings `i₁, i₂ : O_K -> Z/pⁿ` attached to a split prime, the
//! characters `i₁^{m₁} i₂^{m₂}`, and the purely-local and Frobenius criteria.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::{add_mod, inv_mod, mul_mod, pow_mod, prime_factors, sub_mod};
use crate::quadfield::{residue, QuadInt, SplitPrime};

/// Which of the two primes above `p`: `𝔭 = (π)` or `𝔭̄ = (π̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    P,
    PBar,
}

/// Images `r1 = i₁(ω)`, `r2 = i₂(ω)` modulo `pⁿ`, where `i₁` kills `π` and `i₂` kills `π̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicEmbed {
    pub sp: SplitPrime,
    pub n: u32,
    pub modulus: u64,
    pub r1: u64,
    pub r2: u64,
}

/// Lifts `r` (a simple root mod p of `X² - tX + n_ω`) to a root mod `p^n`.
fn lift_root(r: u64, t: u64, nw: u64, p: u64, n: u32) -> u64 {
    let mut r = r;
    let mut pk = p;
    for _ in 1..n {
        let next = pk * p;
        let f = add_mod(
            sub_mod(mul_mod(r, r, next), mul_mod(t, r, next), next),
            nw % next,
            next,
        );
        let fp = sub_mod(2 * r % next, t, next);
        let inv = inv_mod(fp, next).expect("simple root");
        r = sub_mod(r, mul_mod(f, inv, next), next);
        pk = next;
    }
    r
}

pub fn hensel_embed(sp: &SplitPrime, n: u32) -> Result<PadicEmbed> {
    if n == 0 {
        return Err(Error::Precondition("level n must be at least 1".into()));
    }
    let modulus = (sp.p as u128)
        .checked_pow(n)
        .filter(|&m| m < (1u128 << 63))
        .ok_or_else(|| Error::Precondition(format!("{}^{} exceeds 63 bits", sp.p, n)))?
        as u64;
    let f = sp.field();
    let (t, nw) = (f.t() as u64, f.n() as u64);
    let (r1, _) = sp.omega_roots();
    let r1 = lift_root(r1, t, nw, sp.p, n);
    let r2 = sub_mod(t, r1, modulus);
    Ok(PadicEmbed {
        sp: sp.clone(),
        n,
        modulus,
        r1,
        r2,
    })
}

impl PadicEmbed {
    pub fn p(&self) -> u64 {
        self.sp.p
    }

    fn apply(&self, x: &QuadInt, r: u64) -> u64 {
        let m = self.modulus;
        add_mod(residue(x.a(), m), mul_mod(residue(x.b(), m), r, m), m)
    }

    /// `i₁(x) mod pⁿ`.
    pub fn i1(&self, x: &QuadInt) -> u64 {
        self.apply(x, self.r1)
    }

    /// `i₂(x) mod pⁿ`.
    pub fn i2(&self, x: &QuadInt) -> u64 {
        self.apply(x, self.r2)
    }

    pub fn side(&self, side: Side, x: &QuadInt) -> u64 {
        match side {
            Side::P => self.i1(x),
            Side::PBar => self.i2(x),
        }
    }

    /// `i₁(x)^{m₁} i₂(x)^{m₂} mod pⁿ`; negative exponents invert.
    pub fn i_power(&self, m: (i64, i64), x: &QuadInt) -> Result<u64> {
        let md = self.modulus;
        let term = |v: u64, e: i64| -> Result<u64> {
            if e >= 0 {
                Ok(pow_mod(v, e as u64, md))
            } else {
                let inv =
                    inv_mod(v, md).ok_or_else(|| Error::NonInvertible(format!("{md}: {x}")))?;
                Ok(pow_mod(inv, e.unsigned_abs(), md))
            }
        };
        Ok(mul_mod(term(self.i1(x), m.0)?, term(self.i2(x), m.1)?, md))
    }

    /// Lifts a pair `(i₁, i₂)` of residues mod `pⁿ` to `a + bω` with `0 <= a, b < pⁿ`.
    pub fn crt(&self, x1: u64, x2: u64) -> QuadInt {
        let m = self.modulus;
        let inv = inv_mod(sub_mod(self.r1, self.r2, m), m).expect("r1 - r2 is a unit");
        let b = mul_mod(sub_mod(x1, x2, m), inv, m);
        let a = sub_mod(x1, mul_mod(b, self.r1, m), m);
        QuadInt::new(self.sp.field(), a, b)
    }
}

/// The character `c ↦ i₁(c)^{m₁} i₂(c)^{m₂} mod pⁿ`.
#[derive(Debug, Clone)]
pub struct CharExponent {
    pub m: (i64, i64),
    pub embed: PadicEmbed,
}

impl CharExponent {
    pub fn new(embed: PadicEmbed, m: (i64, i64)) -> Self {
        CharExponent { m, embed }
    }

    pub fn value(&self, c: &QuadInt) -> Result<u64> {
        self.embed.i_power(self.m, c)
    }
}

/// Whether `π^{p-1} - 1` fails to be divisible by `𝔭̄²` (side `𝔭̄`), or by
/// `𝔭²` with `π̄` in place of `π` (side `𝔭`). Computed in `Z/p²` through the
/// embedding that kills the relevant prime.
pub fn purely_local_test(sp: &SplitPrime, side: Side) -> bool {
    let emb = hensel_embed(sp, 2).expect("p² fits in 63 bits");
    let p = sp.p;
    let g = match side {
        Side::PBar => emb.i2(&sp.pi),
        Side::P => emb.i1(&sp.pi_bar),
    };
    pow_mod(g, p - 1, emb.modulus) != 1
}

/// Whether the class of `i₂(π)` in `F_p^× / im(O_K^×)` has full order `(p-1)/w`.
pub fn frobenius_generates_test(sp: &SplitPrime) -> Result<bool> {
    let p = sp.p;
    let emb = hensel_embed(sp, 1)?;
    let g = emb.i2(&sp.pi);
    let k = (p - 1) / sp.field().w() as u64;
    for q in prime_factors(k)? {
        if pow_mod(g, (p - 1) / q, p) == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::primes_in;
    use crate::quadfield::{make_field, split_prime, Field, CLASS_NUMBER_ONE};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gauss(p: u64) -> SplitPrime {
        split_prime(&make_field(1).unwrap(), p).unwrap()
    }

    #[test]
    fn gaussian_five() {
        let sp = gauss(5);
        let i = QuadInt::omega(sp.field());
        let e1 = hensel_embed(&sp, 1).unwrap();
        assert_eq!((e1.i1(&i), e1.i2(&i)), (3, 2));
        let e3 = hensel_embed(&sp, 3).unwrap();
        assert_eq!(e3.r1 % 5, 3);
        assert_eq!(e3.i_power((2, 0), &i).unwrap() % 5, 4);
        assert_eq!(e1.i_power((2, 0), &i).unwrap(), 4);
        assert_eq!(e1.i_power((0, 0), &i).unwrap(), 1);
        assert!(matches!(
            e1.i_power((-1, 0), &sp.pi),
            Err(Error::NonInvertible(_))
        ));
        assert_eq!(
            e1.i_power((0, -1), &sp.pi).unwrap(),
            inv_mod(e1.i2(&sp.pi), 5).unwrap()
        );
    }

    #[test]
    fn lifts_are_compatible_and_kill_the_right_prime() {
        for d in CLASS_NUMBER_ONE {
            let ctx = make_field(d as i64).unwrap();
            for p in [5u64, 11, 13, 17, 23, 29, 31, 41, 47, 53, 59] {
                let Ok(sp) = split_prime(&ctx, p) else {
                    continue;
                };
                let mut prev: Option<PadicEmbed> = None;
                for n in 1..=5 {
                    let e = hensel_embed(&sp, n).unwrap();
                    if let Some(pe) = prev {
                        assert_eq!(e.r1 % pe.modulus, pe.r1);
                        assert_eq!(e.r2 % pe.modulus, pe.r2);
                    }
                    let w = QuadInt::omega(ctx.field);
                    let pin = sp.pi.pow(n);
                    let pibn = sp.pi_bar.pow(n);
                    let r1 = QuadInt::from_i64(ctx.field, e.r1 as i64);
                    let r2 = QuadInt::from_i64(ctx.field, e.r2 as i64);
                    assert!(pin.divides(&(&w - &r1)));
                    assert!(pibn.divides(&(&w - &r2)));
                    assert_eq!(e.i1(&sp.pi) % p, 0);
                    assert_eq!(e.i2(&sp.pi_bar) % p, 0);
                    assert_ne!(e.i2(&sp.pi) % p, 0);
                    assert_ne!(e.r1 % p, e.r2 % p);
                    prev = Some(e);
                }
            }
        }
    }

    /// Oracle: divide `π^{p-1} - 1` by `π̄` twice in exact arithmetic.
    fn purely_local_by_division(sp: &SplitPrime, side: Side) -> bool {
        let (x, y) = match side {
            Side::PBar => (&sp.pi, &sp.pi_bar),
            Side::P => (&sp.pi_bar, &sp.pi),
        };
        let one = QuadInt::one(x.field());
        let v = &x.pow((sp.p - 1) as u32) - &one;
        let once = v.exact_divide(y).expect("Fermat: divisible once");
        once.exact_divide(y).is_err()
    }

    #[test]
    fn purely_local_gaussian_five() {
        let sp = gauss(5);
        let one = QuadInt::one(sp.field());
        let v = &sp.pi.pow(4) - &one;
        assert_eq!(v.to_i64_pair(), Some((-8, 24)));
        assert!(purely_local_test(&sp, Side::PBar));
        assert!(purely_local_by_division(&sp, Side::PBar));
    }

    #[test]
    fn purely_local_matches_division_oracle() {
        for d in CLASS_NUMBER_ONE {
            let ctx = make_field(d as i64).unwrap();
            for p in primes_in(5, 700) {
                let Ok(sp) = split_prime(&ctx, p) else {
                    continue;
                };
                for side in [Side::P, Side::PBar] {
                    assert_eq!(
                        purely_local_test(&sp, side),
                        purely_local_by_division(&sp, side),
                        "d={d} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn the_gaussian_counter_example() {
        let sp = gauss(29789);
        assert!(!purely_local_test(&sp, Side::PBar));
        assert!(!purely_local_test(&sp, Side::P));
        assert!(!purely_local_by_division(&sp, Side::PBar));
        let sw = sp.swapped();
        assert!(!purely_local_test(&sw, Side::PBar));
    }

    /// Oracle: order of `i₂(π)` in `F_p^×/μ_w` by listing the cyclic subgroup.
    fn frobenius_by_enumeration(sp: &SplitPrime) -> bool {
        let p = sp.p;
        let e = hensel_embed(sp, 1).unwrap();
        let w = sp.field().w() as u64;
        let units: Vec<u64> = sp.field().units().iter().map(|u| e.i2(u)).collect();
        let g = e.i2(&sp.pi);
        let mut cosets = std::collections::HashSet::new();
        let mut x = 1u64;
        loop {
            let key = units.iter().map(|&u| mul_mod(u, x, p)).min().unwrap();
            if !cosets.insert(key) {
                break;
            }
            x = mul_mod(x, g, p);
        }
        cosets.len() as u64 == (p - 1) / w
    }

    #[test]
    fn frobenius_matches_enumeration() {
        assert!(frobenius_generates_test(&gauss(5)).unwrap());
        assert_eq!(
            frobenius_generates_test(&gauss(13)).unwrap(),
            frobenius_by_enumeration(&gauss(13))
        );
        for d in CLASS_NUMBER_ONE {
            let ctx = make_field(d as i64).unwrap();
            for p in primes_in(5, 2000) {
                let Ok(sp) = split_prime(&ctx, p) else {
                    continue;
                };
                let v = frobenius_generates_test(&sp).unwrap();
                assert_eq!(v, frobenius_by_enumeration(&sp), "d={d} p={p}");
                for u in &ctx.units {
                    assert_eq!(frobenius_generates_test(&sp.with_unit(u)).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn embeddings_are_ring_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in CLASS_NUMBER_ONE {
            let f = Field::new(d).unwrap();
            let sp = primes_in(5, 200)
                .into_iter()
                .find_map(|p| crate::quadfield::split_in(f, p).ok())
                .unwrap();
            let e = hensel_embed(&sp, 3).unwrap();
            let m = e.modulus;
            for _ in 0..1000 {
                let x = QuadInt::new(
                    f,
                    rng.gen_range(-1_000_000i64..1_000_000),
                    rng.gen_range(-1_000_000i64..1_000_000),
                );
                let y = QuadInt::new(
                    f,
                    rng.gen_range(-1_000_000i64..1_000_000),
                    rng.gen_range(-1_000_000i64..1_000_000),
                );
                for side in [Side::P, Side::PBar] {
                    let h = |z: &QuadInt| e.side(side, z);
                    assert_eq!(h(&(&x + &y)), add_mod(h(&x), h(&y), m));
                    assert_eq!(h(&(&x * &y)), mul_mod(h(&x), h(&y), m));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn char_exponent_is_multiplicative(a in 1i64..10_000, b in -10_000i64..10_000,
                                           c in 1i64..10_000, e in -10_000i64..10_000,
                                           m1 in -20i64..20, m2 in -20i64..20) {
            let sp = gauss(13);
            let emb = hensel_embed(&sp, 2).unwrap();
            let f = sp.field();
            let (x, y) = (QuadInt::new(f, a, b), QuadInt::new(f, c, e));
            prop_assume!(x.norm().mod_u(13) != 0 && y.norm().mod_u(13) != 0);
            let ch = CharExponent::new(emb.clone(), (m1, m2));
            let lhs = ch.value(&(&x * &y)).unwrap();
            let rhs = mul_mod(ch.value(&x).unwrap(), ch.value(&y).unwrap(), emb.modulus);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn crt_inverts_the_embeddings(x1 in 0u64..169, x2 in 0u64..169) {
            let emb = hensel_embed(&gauss(13), 2).unwrap();
            let c = emb.crt(x1, x2);
            prop_assert_eq!((emb.i1(&c), emb.i2(&c)), (x1, x2));
        }
    }
}
