use std::collections::HashMap;

use rug::float::Round;
use rug::{Complex, Float, Integer};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::analytic::{decimal, log2, PrecisionContext, ThetaValue};
use crate::error::{Error, Result};
use crate::ntheory::mul_mod;
use crate::padic::Side;
use crate::quadfield::{residue, Field, QuadInt, SplitPrime};

/// Which Galois group the conjugates are indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// `Gal(K(p)/K) = (O_K/p)^× / im(O_K^×)`.
    Full,
    /// `Gal(K(𝔭)/K)` (or `K(𝔭̄)`), acting through reduction at that prime.
    Prime(Side),
}

/// Labels for the conjugates: a transversal of the Galois group, with a
/// lookup from residues to transversal positions.
#[derive(Debug, Clone)]
pub struct GaloisLabels {
    pub sp: SplitPrime,
    pub level: Level,
    pub reps: Vec<QuadInt>,
    index: HashMap<(u64, u64), usize>,
    r1: u64,
    r2: u64,
}

impl GaloisLabels {
    pub fn new(sp: &SplitPrime, level: Level, reps: Vec<QuadInt>) -> Result<Self> {
        let (r1, r2) = sp.omega_roots();
        let mut labels = GaloisLabels {
            sp: sp.clone(),
            level,
            reps: Vec::new(),
            index: HashMap::new(),
            r1,
            r2,
        };
        let units = sp.field().units();
        for (i, c) in reps.iter().enumerate() {
            for u in &units {
                let key = labels.key(&(u * c));
                if key.0 == 0 || key.1 == 0 && level == Level::Full {
                    return Err(Error::BadCosets(format!("{c} is not a unit mod {}", sp.p)));
                }
                if let Some(j) = labels.index.insert(key, i) {
                    if j != i {
                        return Err(Error::BadCosets(format!(
                            "{c} and {} share a class",
                            reps[j]
                        )));
                    }
                }
            }
        }
        let expected = match level {
            Level::Full => (sp.p - 1) * (sp.p - 1),
            Level::Prime(_) => sp.p - 1,
        };
        if labels.index.len() as u64 != expected {
            return Err(Error::BadCosets(format!(
                "{} classes cover {} of {expected} residues",
                reps.len(),
                labels.index.len()
            )));
        }
        labels.reps = reps;
        Ok(labels)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    fn key(&self, c: &QuadInt) -> (u64, u64) {
        let p = self.sp.p;
        let at = |r: u64| (residue(c.a(), p) + mul_mod(residue(c.b(), p), r, p)) % p;
        match self.level {
            Level::Full => (at(self.r1), at(self.r2)),
            Level::Prime(Side::P) => (at(self.r1), 1),
            Level::Prime(Side::PBar) => (at(self.r2), 1),
        }
    }

    /// Position of the class of `c`, if `c` is a unit at the relevant primes.
    pub fn position(&self, c: &QuadInt) -> Option<usize> {
        self.index.get(&self.key(c)).copied()
    }
}

/// A monic polynomial with `O_K` coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPoly(pub Vec<QuadInt>);

impl QuadPoly {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn field(&self) -> Field {
        self.0[0].field()
    }

    /// Whether every coefficient lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.0.iter().all(|c| c.b().is_zero())
    }

    pub fn constant_term(&self) -> &QuadInt {
        &self.0[0]
    }
}

impl Serialize for QuadPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .0
            .iter()
            .map(|c| [c.a().to_string(), c.b().to_string()])
            .collect();
        pairs.serialize(s)
    }
}

/// An algebraic integer of `K(𝔪)` known through its conjugates, with the
/// characteristic polynomial recognised over `O_K`.
#[derive(Debug, Clone)]
pub struct AlgebraicUnit {
    pub conjugates: Vec<ThetaValue>,
    pub labels: Option<GaloisLabels>,
    pub minpoly: QuadPoly,
    pub rounding_residual: Float,
    pub prec: PrecisionContext,
}

/// `∏ (X - v)`, constant term first.
fn char_poly(values: &[Complex], w: u32) -> Vec<Complex> {
    let mut coeffs = vec![Complex::with_val(w, 1)];
    for v in values {
        let mut next = vec![Complex::new(w); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Complex::with_val(w, c * v);
        }
        coeffs = next;
    }
    coeffs
}

/// `Σ log₂(1 + |v|)`, a bound on the bit size of the coefficients of `∏ (X - v)`.
pub fn coefficient_bits(conjugates: &[ThetaValue]) -> f64 {
    conjugates
        .iter()
        .map(|v| {
            let l = v.log_abs.to_f64() / std::f64::consts::LN_2;
            l.max(0.0) + 1.0
        })
        .sum()
}

/// Real and imaginary parts of `ω`.
fn omega_parts(field: Field, w: u32) -> (Float, Float) {
    let d = Float::with_val(w, field.d()).sqrt();
    match field.t() {
        0 => (Float::new(w), d),
        _ => (Float::with_val(w, 0.5), d / 2u32),
    }
}

pub(crate) fn to_complex(x: &QuadInt, w: u32) -> Complex {
    let (re_w, im_w) = omega_parts(x.field(), w);
    Complex::with_val(
        w,
        (
            Float::with_val(w, &re_w * x.b()) + x.a(),
            Float::with_val(w, &im_w * x.b()),
        ),
    )
}

/// Nearest point of `O_K = Z + Zω` to `z`, and the distance to it.
fn round_to_ok(field: Field, z: &Complex, w: u32) -> (QuadInt, Float) {
    let (re_w, im_w) = omega_parts(field, w);
    let round = |x: Float| -> Integer { x.to_integer_round(Round::Nearest).expect("finite").0 };
    let b = round(Float::with_val(w, z.imag() / &im_w));
    let a = round(Float::with_val(
        w,
        z.real() - Float::with_val(w, &re_w * &b),
    ));
    let x = QuadInt::new(field, a, b);
    let approx = to_complex(&x, w);
    let err = Float::with_val(w, Complex::with_val(w, z - &approx).abs_ref());
    (x, err)
}

impl AlgebraicUnit {
    /// Recognises `∏ (X - v)` over `O_K` from the conjugates.
    pub fn from_conjugates(
        field: Field,
        conjugates: Vec<ThetaValue>,
        labels: Option<GaloisLabels>,
        prec: PrecisionContext,
    ) -> Result<Self> {
        if conjugates.is_empty() {
            return Err(Error::Precondition("empty conjugate vector".into()));
        }
        let w = prec.working();
        let values: Vec<Complex> = conjugates.iter().map(|v| v.value()).collect();
        let coeffs = char_poly(&values, w);
        // Floating-point error of the expansion is at most about deg · ∏(1 + |v|) · 2^-w.
        let bound_log2 =
            coefficient_bits(&conjugates) + ((conjugates.len() + 1) as f64).log2() - w as f64;
        let mut worst = Float::with_val(w, bound_log2.ceil() as i32).exp2();
        let mut poly = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            let (x, err) = round_to_ok(field, c, w);
            if err > worst {
                worst = err;
            }
            poly.push(x);
        }
        if worst > prec.tol() {
            return Err(Error::RecognitionFailure {
                log2_residual: log2(&worst),
            });
        }
        Ok(AlgebraicUnit {
            conjugates,
            labels,
            minpoly: QuadPoly(poly),
            rounding_residual: worst,
            prec,
        })
    }

    /// The element `x ∈ O_K` itself, as a unit of degree one.
    pub fn from_element(x: &QuadInt, prec: PrecisionContext) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let z = to_complex(x, prec.working());
        Self::from_conjugates(
            x.field(),
            vec![ThetaValue::from_complex(&z, x.to_string())],
            None,
            prec,
        )
    }

    pub fn field(&self) -> Field {
        self.minpoly.field()
    }

    pub fn degree(&self) -> usize {
        self.conjugates.len()
    }

    /// `max_v |f(v)| / Σ |cᵢ||v|ⁱ` over the conjugates.
    pub fn root_residual(&self) -> Float {
        let w = self.prec.working();
        let coeffs: Vec<Complex> = self.minpoly.0.iter().map(|c| to_complex(c, w)).collect();
        let mut worst = Float::new(w);
        for v in self.conjugates.iter().map(|v| v.value()) {
            let mut acc = Complex::new(w);
            let mut scale = Float::new(w);
            for c in coeffs.iter().rev() {
                acc = Complex::with_val(w, &acc * &v) + c;
                scale = Float::with_val(w, &scale * Float::with_val(w, v.abs_ref()))
                    + Float::with_val(w, c.abs_ref());
            }
            let r = Float::with_val(w, acc.abs_ref()) / scale;
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    /// Largest `|cᵢ - vᵢ|/|vᵢ|` between two conjugate vectors of equal length.
    pub fn max_residual(&self, other: &AlgebraicUnit) -> Result<Float> {
        if self.degree() != other.degree() {
            return Err(Error::Precondition(format!(
                "degrees differ: {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        let w = self.prec.working();
        let mut worst = Float::new(w);
        for (a, b) in self.conjugates.iter().zip(&other.conjugates) {
            let r = a.residual(b);
            if r > worst {
                worst = r;
            }
        }
        Ok(worst)
    }

    /// Whether all conjugates agree within tolerance, so the value lies in `K`.
    pub fn is_rational_over_k(&self) -> bool {
        let first = &self.conjugates[0];
        self.conjugates
            .iter()
            .all(|v| v.residual(first) < self.prec.tol())
    }
}

impl Serialize for AlgebraicUnit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicUnit", 5)?;
        st.serialize_field("d", &self.field().d())?;
        st.serialize_field("precision_bits", &self.prec.bits())?;
        st.serialize_field("minpoly", &self.minpoly)?;
        let r = log2(&self.rounding_residual);
        st.serialize_field("rounding_residual_log2", &r.is_finite().then_some(r))?;
        let conj: Vec<[String; 2]> = self
            .conjugates
            .iter()
            .map(|v| {
                let z = v.value();
                [decimal(z.real()), decimal(z.imag())]
            })
            .collect();
        st.serialize_field("conjugates", &conj)?;
        st.end()
    }
}
