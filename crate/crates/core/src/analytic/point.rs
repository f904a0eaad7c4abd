use std::fmt;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadfield::{ideals_coprime, Field, QuadInt, ResidueRing, SplitPrime};

/// A point `x + yω` of `K ⊗ R = C` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: Rational,
    pub y: Rational,
    field: Field,
}

fn frac(x: &Rational) -> Rational {
    let fl = x.clone().floor();
    Rational::from(x - &fl)
}

fn centre(x: &Rational) -> Rational {
    let shifted = x + Rational::from((1, 2));
    let fl = shifted.floor();
    Rational::from(x - &fl)
}

impl LatticePoint {
    pub fn new(field: Field, x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        LatticePoint {
            x: x.into(),
            y: y.into(),
            field,
        }
    }

    pub fn origin(field: Field) -> Self {
        LatticePoint::new(field, 0, 0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The point `num / den` for `den ≠ 0`.
    pub fn quotient(num: &QuadInt, den: &QuadInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = den.norm();
        let t = num * &den.conj();
        Ok(LatticePoint::new(
            num.field(),
            Rational::from((t.a().clone(), n.clone())),
            Rational::from((t.b().clone(), n)),
        ))
    }

    /// Representative with both coordinates in `[0, 1)`.
    pub fn reduced(&self) -> Self {
        LatticePoint::new(self.field, frac(&self.x), frac(&self.y))
    }

    /// Representative with both coordinates in `[-1/2, 1/2)`.
    pub fn centred(&self) -> Self {
        LatticePoint::new(self.field, centre(&self.x), centre(&self.y))
    }

    pub fn is_lattice_point(&self) -> bool {
        *self.x.denom() == 1 && *self.y.denom() == 1
    }

    pub fn scale(&self, alpha: &QuadInt) -> Self {
        assert_eq!(alpha.field(), self.field);
        let (a, b) = (alpha.a(), alpha.b());
        let (t, n) = (self.field.t(), self.field.n());
        let x = Rational::from(&self.x * a) - Rational::from(&self.y * b) * n;
        let y = Rational::from(&self.x * b)
            + Rational::from(&self.y * a)
            + Rational::from(&self.y * b) * t;
        LatticePoint::new(self.field, x, y)
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticePoint::new(
            self.field,
            Rational::from(&self.x + &o.x),
            Rational::from(&self.y + &o.y),
        )
    }

    pub fn neg(&self) -> Self {
        LatticePoint::new(
            self.field,
            Rational::from(-&self.x),
            Rational::from(-&self.y),
        )
    }

    /// Scales by a rational integer.
    pub fn times(&self, k: &Integer) -> Self {
        LatticePoint::new(
            self.field,
            Rational::from(&self.x * k),
            Rational::from(&self.y * k),
        )
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> Integer {
        self.x.denom().clone().lcm(self.y.denom())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({}){}", self.x, self.y, self.field.omega_symbol())
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A class `r / μ` in `(1/μ)O_K / O_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionPoint {
    pub modulus: QuadInt,
    pub residue: QuadInt,
    pub point: LatticePoint,
    pub primitive: bool,
}

impl TorsionPoint {
    pub fn new(modulus: &QuadInt, residue: &QuadInt) -> Result<Self> {
        let point = LatticePoint::quotient(residue, modulus)?.reduced();
        Ok(TorsionPoint {
            modulus: modulus.clone(),
            residue: residue.clone(),
            point,
            primitive: ideals_coprime(residue, modulus),
        })
    }
}

/// All `N(μ)` points of `E[μ]`, or only the primitive ones, in residue order.
pub fn torsion_points(mu: &QuadInt, primitive_only: bool) -> Result<Vec<TorsionPoint>> {
    if mu.is_unit() || mu.is_zero() {
        return Err(Error::Precondition(format!(
            "modulus {mu} must be a non-zero non-unit"
        )));
    }
    let ring = ResidueRing::new(mu)?;
    ring.residues()
        .iter()
        .map(|r| TorsionPoint::new(mu, r))
        .filter(|t| {
            t.as_ref()
                .map(|t| t.primitive || !primitive_only)
                .unwrap_or(true)
        })
        .collect()
}

/// The basis points `ω_{1,n} = 1/πⁿ` and `ω_{2,n} = 1/π̄ⁿ` of `E[pⁿ]`.
pub fn basis_points(sp: &SplitPrime, n: u32) -> (LatticePoint, LatticePoint) {
    let f = sp.field();
    let one = QuadInt::one(f);
    let w1 = LatticePoint::quotient(&one, &sp.pi.pow(n))
        .unwrap()
        .reduced();
    let w2 = LatticePoint::quotient(&one, &sp.pi_bar.pow(n))
        .unwrap()
        .reduced();
    (w1, w2)
}

/// `a ω_{1,n} + b ω_{2,n}`, reduced.
pub fn basis_combination(sp: &SplitPrime, n: u32, a: &Integer, b: &Integer) -> LatticePoint {
    let (w1, w2) = basis_points(sp, n);
    w1.times(a).add(&w2.times(b)).reduced()
}
