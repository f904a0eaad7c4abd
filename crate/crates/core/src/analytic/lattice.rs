use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::{LatticePoint, PrecisionContext};
use crate::error::{Error, Result};
use crate::quadfield::{Field, OmegaKind, QuadInt};

/// The lattice `L = Z + Zτ` with `τ = ω`, together with q-series caches.
#[derive(Debug, Clone)]
pub struct Lattice {
    field: Field,
    prec: PrecisionContext,
    tau: Complex,
    q: Complex,
    qpow: Vec<Complex>,
    /// `1/12 - Σ 2qⁿ/(1-qⁿ)²`
    const_term: Complex,
    two_pi_i: Complex,
    delta: Complex,
}

pub fn make_lattice(field: Field, prec: PrecisionContext) -> Lattice {
    let w = prec.working();
    let pi = Float::with_val(w, Constant::Pi);
    let sqrt_d = Float::with_val(w, field.d()).sqrt();
    let tau = match field.omega_kind() {
        OmegaKind::SqrtMinusD => Complex::with_val(w, (0, &sqrt_d)),
        OmegaKind::HalfInteger => Complex::with_val(w, (0.5, Float::with_val(w, &sqrt_d / 2u32))),
    };
    let two_pi_i = Complex::with_val(w, (0, Float::with_val(w, &pi * 2u32)));
    let q = Complex::with_val(w, &two_pi_i * &tau).exp();
    // |q|^{n-1/2} < 2^{-w} for n > w / (2π Im τ / ln 2) + 1/2
    let bits_per_term = 2.0 * std::f64::consts::PI * tau.imag().to_f64() / std::f64::consts::LN_2;
    let n_max = (w as f64 / bits_per_term).ceil() as usize + 2;
    let mut qpow = Vec::with_capacity(n_max);
    let mut qn = q.clone();
    let mut const_term = Complex::with_val(w, 1) / 12u32;
    let mut prod = Complex::with_val(w, 1);
    for _ in 0..n_max {
        let one_minus = Complex::with_val(w, 1 - &qn);
        let term = Complex::with_val(w, &qn * 2u32) / Complex::with_val(w, one_minus.square_ref());
        const_term -= term;
        prod *= &one_minus;
        qpow.push(qn.clone());
        qn *= &q;
    }
    let two_pi_12 = Float::with_val(w, &pi * 2u32).pow(12u32);
    let delta = prod.pow(24u32) * &q * two_pi_12;
    Lattice {
        field,
        prec,
        tau,
        q,
        qpow,
        const_term,
        two_pi_i,
        delta,
    }
}

impl Lattice {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn prec(&self) -> PrecisionContext {
        self.prec
    }

    pub fn working(&self) -> u32 {
        self.prec.working()
    }

    pub fn tau(&self) -> &Complex {
        &self.tau
    }

    pub fn q(&self) -> &Complex {
        &self.q
    }

    pub fn series_terms(&self) -> usize {
        self.qpow.len()
    }

    /// `Δ(L)`.
    pub fn discriminant(&self) -> &Complex {
        &self.delta
    }

    pub fn complex_of(&self, pt: &LatticePoint) -> Complex {
        let w = self.working();
        let x = Float::with_val(w, &pt.x);
        let y = Float::with_val(w, &pt.y);
        Complex::with_val(w, &self.tau * &y) + x
    }

    pub fn quad_to_complex(&self, x: &QuadInt) -> Complex {
        let w = self.working();
        let a = Float::with_val(w, x.a());
        let b = Float::with_val(w, x.b());
        Complex::with_val(w, &self.tau * &b) + a
    }

    /// `℘(z; L)` from the q-expansion; `z` should already be reduced near 0.
    fn series(&self, z: &Complex) -> Complex {
        let w = self.working();
        let u = Complex::with_val(w, &self.two_pi_i * z).exp();
        let uinv = Complex::with_val(w, 1 / &u);
        let lambert = |x: &Complex| -> Complex {
            let den = Complex::with_val(w, 1 - x);
            Complex::with_val(w, x / Complex::with_val(w, den.square_ref()))
        };
        let mut s = Complex::with_val(w, &self.const_term + lambert(&u));
        for qn in &self.qpow {
            s += lambert(&Complex::with_val(w, qn * &u));
            s += lambert(&Complex::with_val(w, qn * &uinv));
        }
        let factor = Complex::with_val(w, self.two_pi_i.square_ref());
        s * factor
    }

    /// `℘` at an exact point. The centred representative of `{z, -z}` is
    /// chosen canonically, so `℘(-z) = ℘(z)` holds bit for bit.
    pub fn wp(&self, pt: &LatticePoint) -> Result<Complex> {
        let a = pt.centred();
        let b = pt.neg().centred();
        let rep = if a >= b { a } else { b };
        if rep.is_lattice_point() {
            return Err(Error::PoleAtLatticePoint);
        }
        Ok(self.series(&self.complex_of(&rep)))
    }

    /// Reduces an arbitrary complex number modulo `L` to near the origin.
    pub fn reduce_complex(&self, z: &Complex) -> Complex {
        let w = self.working();
        let k = Float::with_val(w, z.imag() / self.tau.imag()).round();
        let z = Complex::with_val(w, z - Complex::with_val(w, &self.tau * &k));
        let j = Float::with_val(w, z.real()).round();
        z - j
    }

    /// `℘` at an arbitrary complex number.
    pub fn wp_complex(&self, z: &Complex) -> Result<Complex> {
        let r = self.reduce_complex(z);
        if r.is_zero() {
            return Err(Error::PoleAtLatticePoint);
        }
        Ok(self.series(&r))
    }

    /// `℘(z; cL) = c⁻² ℘(z/c; L)`.
    pub fn wp_scaled(&self, c: &Complex, z: &Complex) -> Result<Complex> {
        let w = self.working();
        let v = self.wp_complex(&Complex::with_val(w, z / c))?;
        Ok(v / Complex::with_val(w, c.square_ref()))
    }

    /// `Δ(cL) = c⁻¹² Δ(L)`.
    pub fn discriminant_scaled(&self, c: &Complex) -> Complex {
        let w = self.working();
        Complex::with_val(w, &self.delta / Complex::with_val(w, c).pow(12i32))
    }

    /// `(e₁, e₂, e₃) = (℘(1/2), ℘(τ/2), ℘((1+τ)/2))`.
    pub fn half_period_values(&self) -> (Complex, Complex, Complex) {
        let f = self.field;
        let h = rug::Rational::from((1, 2));
        let e = |x: &rug::Rational, y: &rug::Rational| {
            self.wp(&LatticePoint::new(f, x.clone(), y.clone()))
                .unwrap()
        };
        let z = rug::Rational::new();
        (e(&h, &z), e(&z, &h), e(&h, &h))
    }

    /// `16 (e₁-e₂)² (e₂-e₃)² (e₁-e₃)²`.
    pub fn discriminant_from_half_periods(&self) -> Complex {
        let w = self.working();
        let (e1, e2, e3) = self.half_period_values();
        let d12 = Complex::with_val(w, &e1 - &e2);
        let d23 = Complex::with_val(w, &e2 - &e3);
        let d13 = Complex::with_val(w, &e1 - &e3);
        let p = d12 * d23 * d13;
        Complex::with_val(w, p.square_ref()) * 16u32
    }
}

/// `|a - b| / |b|`.
pub fn relative_error(a: &Complex, b: &Complex) -> Float {
    let w = a.prec().0.max(b.prec().0);
    let diff = Complex::with_val(w, a - b);
    Float::with_val(w, diff.abs_ref()) / Float::with_val(w, b.abs_ref())
}
