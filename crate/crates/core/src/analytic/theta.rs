use rug::{Complex, Float};
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{decimal, torsion_points, Lattice, LatticePoint};
use crate::error::{Error, Result};
use crate::quadfield::QuadInt;

/// A non-zero complex number held as `exp(log_abs + i·arg)`, with `arg`
/// accumulated without reduction modulo `2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaValue {
    pub log_abs: Float,
    pub arg: Float,
    pub tag: String,
}

impl ThetaValue {
    pub fn one(prec: u32) -> Self {
        ThetaValue {
            log_abs: Float::new(prec),
            arg: Float::new(prec),
            tag: String::new(),
        }
    }

    pub fn from_complex(z: &Complex, tag: impl Into<String>) -> Self {
        let w = z.prec().0;
        ThetaValue {
            log_abs: Float::with_val(w, z.abs_ref()).ln(),
            arg: Float::with_val(w, z.arg_ref()),
            tag: tag.into(),
        }
    }

    pub fn prec(&self) -> u32 {
        self.log_abs.prec()
    }

    pub fn value(&self) -> Complex {
        let w = self.prec();
        Complex::with_val(w, (&self.log_abs, &self.arg)).exp()
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn mul(&self, o: &ThetaValue) -> ThetaValue {
        let w = self.prec();
        ThetaValue {
            log_abs: Float::with_val(w, &self.log_abs + &o.log_abs),
            arg: Float::with_val(w, &self.arg + &o.arg),
            tag: String::new(),
        }
    }

    pub fn div(&self, o: &ThetaValue) -> ThetaValue {
        self.mul(&o.pow(-1))
    }

    pub fn pow(&self, k: i64) -> ThetaValue {
        let w = self.prec();
        ThetaValue {
            log_abs: Float::with_val(w, &self.log_abs * k),
            arg: Float::with_val(w, &self.arg * k),
            tag: String::new(),
        }
    }

    pub fn product<'a>(prec: u32, items: impl IntoIterator<Item = &'a ThetaValue>) -> ThetaValue {
        items
            .into_iter()
            .fold(ThetaValue::one(prec), |acc, x| acc.mul(x))
    }

    /// `|self/other - 1|`.
    pub fn residual(&self, other: &ThetaValue) -> Float {
        let w = self.prec().max(other.prec());
        let q = self.div(other);
        let e = Complex::with_val(w, (&q.log_abs, &q.arg)).exp() - 1u32;
        Float::with_val(w, e.abs_ref())
    }
}

impl Serialize for ThetaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.value();
        let mut st = s.serialize_struct("ThetaValue", 5)?;
        st.serialize_field("re", &decimal(v.real()))?;
        st.serialize_field("im", &decimal(v.imag()))?;
        st.serialize_field("log_abs", &decimal(&self.log_abs))?;
        st.serialize_field("arg", &decimal(&self.arg))?;
        st.serialize_field("tag", &self.tag)?;
        st.end()
    }
}

/// `θ_𝔞 = α⁻¹² Δ^{N𝔞-1} ∏_{ν ∈ E[𝔞]∖O} (℘ - ℘(ν))⁻⁶` for `𝔞 = (α)`, with the
/// values `℘(ν)` cached.
#[derive(Debug, Clone)]
pub struct ThetaFunction<'l> {
    lat: &'l Lattice,
    alpha: QuadInt,
    alpha_c: Complex,
    nu_wp: Vec<Complex>,
    prefactor: ThetaValue,
}

impl<'l> ThetaFunction<'l> {
    pub fn new(lat: &'l Lattice, alpha: &QuadInt) -> Result<Self> {
        if alpha.is_zero() || alpha.is_unit() {
            return Err(Error::Precondition(format!(
                "ideal ({alpha}) must be proper and non-zero"
            )));
        }
        let w = lat.working();
        let nu_wp = torsion_points(alpha, false)?
            .iter()
            .filter(|t| !t.residue.is_zero())
            .map(|t| lat.wp(&t.point))
            .collect::<Result<Vec<_>>>()?;
        let n = alpha.norm().to_i64().expect("norm fits in i64");
        let alpha_c = lat.quad_to_complex(alpha);
        let a = ThetaValue::from_complex(&alpha_c, "");
        let d = ThetaValue::from_complex(lat.discriminant(), "");
        let prefactor = a.pow(-12).mul(&d.pow(n - 1));
        debug_assert_eq!(prefactor.prec(), w);
        Ok(ThetaFunction {
            lat,
            alpha: alpha.clone(),
            alpha_c,
            nu_wp,
            prefactor,
        })
    }

    pub fn alpha(&self) -> &QuadInt {
        &self.alpha
    }

    pub fn lattice(&self) -> &'l Lattice {
        self.lat
    }

    pub fn norm(&self) -> i64 {
        self.nu_wp.len() as i64 + 1
    }

    /// Rejects points on or within `2^{-B/4}` of `(1/α)L`.
    fn check_divisor(&self, z: &LatticePoint) -> Result<()> {
        let az = z.scale(&self.alpha);
        if az.is_lattice_point() {
            return Err(Error::EvaluationAtDivisor(format!(
                "{z} is {}-torsion",
                self.alpha
            )));
        }
        let w = self.lat.working();
        let dist = Float::with_val(w, self.lat.complex_of(&az.centred()).abs_ref());
        let alpha_abs = Float::with_val(w, self.alpha_c.abs_ref());
        if dist / alpha_abs < self.lat.prec().divisor_margin() {
            return Err(Error::EvaluationAtDivisor(format!(
                "{z} is within 2^-{} of E[{}]",
                self.lat.prec().bits() / 4,
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn eval(&self, z: &LatticePoint) -> Result<ThetaValue> {
        self.check_divisor(z)?;
        let w = self.lat.working();
        let wz = self.lat.wp(z)?;
        let mut acc = self.prefactor.clone();
        for v in &self.nu_wp {
            let diff = Complex::with_val(w, &wz - v);
            let log_abs = Float::with_val(w, diff.abs_ref()).ln();
            let arg = Float::with_val(w, diff.arg_ref());
            acc.log_abs -= log_abs * 6u32;
            acc.arg -= arg * 6u32;
        }
        acc.tag = format!("theta_({})({})", self.alpha, z.reduced());
        Ok(acc)
    }
}

/// One-shot evaluation of `θ_𝔞(z)` for `𝔞 = (α)`.
pub fn theta_a(lat: &Lattice, alpha: &QuadInt, z: &LatticePoint) -> Result<ThetaValue> {
    ThetaFunction::new(lat, alpha)?.eval(z)
}
