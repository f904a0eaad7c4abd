use rug::ops::RemRounding;
use rug::Integer;

use super::split::residue;
use super::{Field, QuadInt, SplitPrime};
use crate::error::{Error, Result};
use crate::ntheory::{add_mod, inv_mod, mul_mod, sub_mod};

/// Hermite basis `{(A, 0), (B, C)}` of a full-rank sublattice of `Z²`,
/// coordinates taken with respect to `{1, ω}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

impl Hnf {
    fn empty() -> Self {
        Hnf {
            a: Integer::new(),
            b: Integer::new(),
            c: Integer::new(),
        }
    }

    fn push(&mut self, x: &Integer, y: &Integer) {
        if *y == 0 && self.c == 0 {
            self.a.gcd_mut(x);
            return;
        }
        let (g, u, v) = self.c.clone().extended_gcd(y.clone(), Integer::new());
        let new_b = Integer::from(&u * &self.b) + Integer::from(&v * x);
        let yg = Integer::from(y / &g);
        let cg = Integer::from(&self.c / &g);
        let zero_row = Integer::from(&yg * &self.b) - Integer::from(&cg * x);
        self.a.gcd_mut(&zero_row);
        self.b = new_b;
        self.c = g;
        if self.a != 0 {
            self.b %= &self.a;
            if self.b < 0 {
                self.b += &self.a;
            }
        }
    }

    /// The ideal generated by `gens`, as a lattice.
    pub fn of_ideal(gens: &[QuadInt]) -> Hnf {
        let mut h = Hnf::empty();
        for g in gens {
            let gw = g * &QuadInt::omega(g.field());
            h.push(g.a(), g.b());
            h.push(gw.a(), gw.b());
        }
        h
    }

    pub fn index(&self) -> Integer {
        Integer::from(&self.a * &self.c)
    }
}

/// True when the ideals `(x)` and `(y)` are coprime.
pub fn ideals_coprime(x: &QuadInt, y: &QuadInt) -> bool {
    Hnf::of_ideal(&[x.clone(), y.clone()]).index() == 1
}

/// The ring `O_K / (μ)` with canonical representatives `x + yω`,
/// `0 <= x < A`, `0 <= y < C`.
#[derive(Debug, Clone)]
pub struct ResidueRing {
    modulus: QuadInt,
    hnf: Hnf,
}

impl ResidueRing {
    pub fn new(modulus: &QuadInt) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let hnf = Hnf::of_ideal(std::slice::from_ref(modulus));
        Ok(ResidueRing {
            modulus: modulus.clone(),
            hnf,
        })
    }

    pub fn modulus(&self) -> &QuadInt {
        &self.modulus
    }

    pub fn field(&self) -> Field {
        self.modulus.field()
    }

    pub fn order(&self) -> Integer {
        self.hnf.index()
    }

    pub fn reduce(&self, x: &QuadInt) -> QuadInt {
        let h = &self.hnf;
        let (k, y) = x.b().clone().div_rem_euc(h.c.clone());
        let mut a = x.a() - Integer::from(&k * &h.b);
        a = a.rem_euc(&h.a);
        QuadInt::new(self.field(), a, y)
    }

    pub fn is_zero(&self, x: &QuadInt) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn congruent(&self, x: &QuadInt, y: &QuadInt) -> bool {
        self.is_zero(&(x - y))
    }

    pub fn is_unit(&self, x: &QuadInt) -> bool {
        ideals_coprime(x, &self.modulus)
    }

    /// All `N(μ)` residues, ordered by `(b, a)`.
    pub fn residues(&self) -> Vec<QuadInt> {
        let a = self.hnf.a.to_u64().expect("modulus too large to enumerate");
        let c = self.hnf.c.to_u64().expect("modulus too large to enumerate");
        let f = self.field();
        (0..c)
            .flat_map(|y| (0..a).map(move |x| QuadInt::new(f, x, y)))
            .collect()
    }

    pub fn unit_residues(&self) -> Vec<QuadInt> {
        self.residues()
            .into_iter()
            .filter(|r| self.is_unit(r))
            .collect()
    }

    /// Representatives of `{c unit mod μ : keep(c)} / im(O_K^×)`, each the
    /// smallest member of its orbit in `(b, a)` order.
    pub fn unit_quotient(&self, keep: impl Fn(&QuadInt) -> bool) -> Vec<QuadInt> {
        let units = self.field().units();
        let ord = |x: &QuadInt| (x.b().clone(), x.a().clone());
        self.unit_residues()
            .into_iter()
            .filter(|c| keep(c))
            .filter(|c| {
                let k = ord(c);
                units.iter().all(|u| ord(&self.reduce(&(u * c))) >= k)
            })
            .collect()
    }
}

fn image(x: &QuadInt, r: u64, p: u64) -> u64 {
    add_mod(residue(x.a(), p), mul_mod(residue(x.b(), p), r, p), p)
}

/// A transversal of `im(O_K^×)` in `(O_K/p)^×`, of size `(p-1)²/w`.
///
/// Residues are handled through their images `(i₁(c), i₂(c))` in `F_p^× × F_p^×`;
/// each orbit is represented by its lexicographically smallest pair, lifted
/// back to `0 <= a, b < p` by CRT. Ordered by that pair, so `1` comes first.
pub fn residue_transversal(sp: &SplitPrime) -> Vec<QuadInt> {
    let p = sp.p;
    let (r1, r2) = sp.omega_roots();
    let field = sp.field();
    let unit_images: Vec<(u64, u64)> = field
        .units()
        .iter()
        .map(|u| (image(u, r1, p), image(u, r2, p)))
        .collect();
    let diff_inv = inv_mod(sub_mod(r1, r2, p), p).expect("r1 != r2 for split p");
    let mut out = Vec::with_capacity(((p - 1) * (p - 1)) as usize / field.w() as usize);
    for x in 1..p {
        for y in 1..p {
            let least = unit_images
                .iter()
                .all(|&(u1, u2)| (mul_mod(u1, x, p), mul_mod(u2, y, p)) >= (x, y));
            if least {
                let b = mul_mod(sub_mod(x, y, p), diff_inv, p);
                let a = sub_mod(x, mul_mod(b, r1, p), p);
                out.push(QuadInt::new(field, a, b));
            }
        }
    }
    out
}

/// A transversal of `im(O_K^×)` in `(O_K/𝔭)^× = F_p^×`, as rational integers
/// in `[1, p)`, of size `(p-1)/w`. The same list serves for `𝔭̄`.
pub fn prime_transversal(sp: &SplitPrime) -> Vec<QuadInt> {
    let p = sp.p;
    let (r1, _) = sp.omega_roots();
    let field = sp.field();
    let unit_images: Vec<u64> = field.units().iter().map(|u| image(u, r1, p)).collect();
    (1..p)
        .filter(|&x| unit_images.iter().all(|&u| mul_mod(u, x, p) >= x))
        .map(|x| QuadInt::from_i64(field, x as i64))
        .collect()
}
