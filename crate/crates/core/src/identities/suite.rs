use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::checks::*;
use super::report::IdentityReport;
use crate::analytic::{Lattice, LatticePoint, TorsionPoint};
use crate::error::{Error, Result};
use crate::ntheory::{gcd, primes_in};
use crate::quadfield::{split_in, Field, QuadInt, SplitPrime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Distribution,
    Galois,
    Cross,
    Norm,
    Lemma32,
    Lemma33,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "distribution",
        "galois",
        "cross",
        "norm",
        "lemma32",
        "lemma33",
        "all",
    ];

    pub fn parse(s: &str) -> Result<Suite> {
        Ok(match s {
            "distribution" => Suite::Distribution,
            "galois" => Suite::Galois,
            "cross" => Suite::Cross,
            "norm" => Suite::Norm,
            "lemma32" => Suite::Lemma32,
            "lemma33" => Suite::Lemma33,
            "all" => Suite::All,
            _ => return Err(Error::Precondition(format!("unknown suite {s:?}"))),
        })
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

fn norm_u64(x: &QuadInt) -> u64 {
    x.norm().to_u64().expect("small norm")
}

/// Non-units with norm prime to `avoid`, ordered by `(norm, b, a)`.
fn small_elements(f: Field, avoid: u64) -> impl Iterator<Item = QuadInt> {
    let mut v: Vec<QuadInt> = (0i64..=8)
        .flat_map(|b| (-12i64..=12).map(move |a| QuadInt::new(f, a, b)))
        .filter(|x| {
            let n = norm_u64(x);
            n > 1 && gcd(n, avoid) == 1
        })
        .collect();
    v.sort_by_key(|x| (norm_u64(x), x.b().clone(), x.a().clone()));
    v.into_iter()
}

/// Deterministic parameters used by the standard suite for one field.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub alpha: QuadInt,
    pub beta: QuadInt,
    pub tau: LatticePoint,
    pub galois_modulus: QuadInt,
    pub sp: SplitPrime,
}

impl SuiteParams {
    pub fn for_field(f: Field) -> SuiteParams {
        let (alpha, beta) = if f.d() == 1 {
            (QuadInt::new(f, 3, 2), QuadInt::new(f, 2, 1))
        } else {
            let alpha = small_elements(f, 6).next().unwrap();
            let beta = small_elements(f, 6 * norm_u64(&alpha)).next().unwrap();
            (alpha, beta)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a + f.d() as u64);
        let mut coord = || Rational::from((rng.gen_range(1i64..1 << 32), 1i64 << 32));
        let tau = LatticePoint::new(f, coord(), coord());
        let na_nb = norm_u64(&alpha) * norm_u64(&beta);
        let m = primes_in(5, 100)
            .into_iter()
            .find(|q| !na_nb.is_multiple_of(*q))
            .unwrap();
        let sp = primes_in(5, 1000)
            .into_iter()
            .filter(|p| !norm_u64(&alpha).is_multiple_of(*p))
            .find_map(|p| split_in(f, p).ok())
            .unwrap();
        SuiteParams {
            alpha,
            beta,
            tau,
            galois_modulus: QuadInt::from_i64(f, m as i64),
            sp,
        }
    }
}

/// Runs the standard instances of the selected identities on `lat`.
pub fn run_suite(lat: &Lattice, suite: Suite) -> Result<Vec<IdentityReport>> {
    let f = lat.field();
    let sp_ = SuiteParams::for_field(f);
    let (a, b, tau, sp) = (&sp_.alpha, &sp_.beta, &sp_.tau, &sp_.sp);
    let mut out = Vec::new();
    if suite.includes(Suite::Distribution) {
        out.push(check_distribution(lat, a, b, tau)?);
        out.push(check_distribution(lat, b, a, tau)?);
    }
    if suite.includes(Suite::Galois) {
        let m = &sp_.galois_modulus;
        let t = TorsionPoint::new(m, &QuadInt::new(f, 1, 1))?;
        out.push(check_galois_action(lat, a, b, &t)?);
        out.push(check_galois_action(lat, a, &f.unit_generator(), &t)?);
    }
    if suite.includes(Suite::Cross) {
        out.push(check_cross_relation(lat, b, a, tau)?);
    }
    if suite.includes(Suite::Norm) {
        let one = QuadInt::one(f);
        let g = &sp.pi * &sp.pi_bar;
        out.push(check_norm_relation(
            lat,
            &sp.pi,
            &sp.pi_bar,
            a,
            &TorsionPoint::new(&g, &one)?,
        )?);
        let g = &sp.pi * &sp.pi;
        out.push(check_norm_relation(
            lat,
            &sp.pi,
            &sp.pi,
            a,
            &TorsionPoint::new(&g, &one)?,
        )?);
    }
    if suite.includes(Suite::Lemma32) {
        let p = sp.p;
        out.push(check_lemma32_step(lat, sp, 1, 1, a, 0, 1)?);
        out.push(check_lemma32_step(lat, sp, 2, 1, a, p, 1)?);
        out.push(check_lemma32_step(lat, sp, 2, 2, a, 0, 2)?);
    }
    if suite.includes(Suite::Lemma33) {
        out.push(check_lemma33_norm_step(lat, sp, 1, a, 1)?);
        out.push(check_lemma33_norm_step(lat, sp, 2, a, 1)?);
        out.push(check_lemma33_norm_step(lat, sp, 2, a, 2)?);
        out.push(check_lemma33_translate(lat, sp, 2, a, 1)?);
    }
    Ok(out)
}
