use serde::Serialize;

use super::QuadInt;
use crate::error::{Error, Result};

/// The nine imaginary quadratic fields of class number one, by `d` in `Q(sqrt(-d))`.
pub const CLASS_NUMBER_ONE: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaKind {
    /// `ω = sqrt(-d)`
    SqrtMinusD,
    /// `ω = (1 + sqrt(-d)) / 2`
    HalfInteger,
}

/// Lightweight copyable tag identifying the field; every `QuadInt` carries one.
///
/// With `ω² = tω - n` the ring of integers is `Z[ω]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    d: u32,
}

impl Field {
    pub fn new(d: u32) -> Result<Self> {
        if CLASS_NUMBER_ONE.contains(&d) {
            Ok(Field { d })
        } else {
            Err(Error::UnsupportedField(d as i64))
        }
    }

    pub fn d(self) -> u32 {
        self.d
    }

    pub fn omega_kind(self) -> OmegaKind {
        if self.d % 4 == 3 {
            OmegaKind::HalfInteger
        } else {
            OmegaKind::SqrtMinusD
        }
    }

    /// Trace of ω.
    pub fn t(self) -> i64 {
        match self.omega_kind() {
            OmegaKind::HalfInteger => 1,
            OmegaKind::SqrtMinusD => 0,
        }
    }

    /// Norm of ω.
    pub fn n(self) -> i64 {
        match self.omega_kind() {
            OmegaKind::HalfInteger => (1 + self.d as i64) / 4,
            OmegaKind::SqrtMinusD => self.d as i64,
        }
    }

    pub fn discriminant(self) -> i64 {
        match self.omega_kind() {
            OmegaKind::HalfInteger => -(self.d as i64),
            OmegaKind::SqrtMinusD => -4 * self.d as i64,
        }
    }

    pub fn w(self) -> u32 {
        match self.d {
            1 => 4,
            3 => 6,
            _ => 2,
        }
    }

    /// A generator of the unit group.
    pub fn unit_generator(self) -> QuadInt {
        match self.d {
            1 | 3 => QuadInt::omega(self),
            _ => QuadInt::from_i64(self, -1),
        }
    }

    /// The `w` units as powers `ζ^0, ζ^1, ...` of [`Field::unit_generator`].
    pub fn units(self) -> Vec<QuadInt> {
        let g = self.unit_generator();
        let mut out = Vec::with_capacity(self.w() as usize);
        let mut u = QuadInt::one(self);
        for _ in 0..self.w() {
            out.push(u.clone());
            u = &u * &g;
        }
        out
    }

    /// Symbol used for ω when printing.
    pub fn omega_symbol(self) -> &'static str {
        if self.d == 1 {
            "i"
        } else {
            "w"
        }
    }
}

/// Fully populated description of a class-number-one field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldContext {
    pub d: u32,
    pub omega_kind: OmegaKind,
    pub discriminant: i64,
    pub w_k: u32,
    pub units: Vec<QuadInt>,
    #[serde(skip)]
    pub field: Field,
}

pub fn make_field(d: i64) -> Result<FieldContext> {
    let d32 = u32::try_from(d).map_err(|_| Error::UnsupportedField(d))?;
    let field = Field::new(d32).map_err(|_| Error::UnsupportedField(d))?;
    Ok(FieldContext {
        d: d32,
        omega_kind: field.omega_kind(),
        discriminant: field.discriminant(),
        w_k: field.w(),
        units: field.units(),
        field,
    })
}
