use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Field;
use crate::error::{Error, Result};

/// An element `a + bω` of the ring of integers, with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    a: Integer,
    b: Integer,
    field: Field,
}

impl QuadInt {
    pub fn new(field: Field, a: impl Into<Integer>, b: impl Into<Integer>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            field,
        }
    }

    pub fn from_i64(field: Field, a: i64) -> Self {
        QuadInt::new(field, a, 0)
    }

    pub fn zero(field: Field) -> Self {
        QuadInt::new(field, 0, 0)
    }

    pub fn one(field: Field) -> Self {
        QuadInt::new(field, 1, 0)
    }

    pub fn omega(field: Field) -> Self {
        QuadInt::new(field, 0, 1)
    }

    pub fn a(&self) -> &Integer {
        &self.a
    }

    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.a.to_i64()?, self.b.to_i64()?))
    }

    pub fn conj(&self) -> QuadInt {
        let t = self.field.t();
        QuadInt {
            a: (&self.a + Integer::from(&self.b * t)),
            b: Integer::from(-&self.b),
            field: self.field,
        }
    }

    /// `N(a + bω) = a² + tab + nb²`.
    pub fn norm(&self) -> Integer {
        let f = self.field;
        let mut s = Integer::from(self.a.square_ref());
        s += Integer::from(&self.a * &self.b) * f.t();
        s += Integer::from(self.b.square_ref()) * f.n();
        s
    }

    pub fn trace(&self) -> Integer {
        Integer::from(&self.a * 2) + Integer::from(&self.b * self.field.t())
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn scale(&self, k: &Integer) -> QuadInt {
        QuadInt {
            a: Integer::from(&self.a * k),
            b: Integer::from(&self.b * k),
            field: self.field,
        }
    }

    pub fn pow(&self, mut e: u32) -> QuadInt {
        let mut acc = QuadInt::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns `q` with `self = q * y`, or `NotDivisible`.
    pub fn exact_divide(&self, y: &QuadInt) -> Result<QuadInt> {
        check_same(self.field, y.field);
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self * &y.conj();
        let n = y.norm();
        if num.a.is_divisible(&n) && num.b.is_divisible(&n) {
            Ok(QuadInt {
                a: num.a.div_exact(&n),
                b: num.b.div_exact(&n),
                field: self.field,
            })
        } else {
            Err(Error::NotDivisible {
                dividend: self.to_string(),
                divisor: y.to_string(),
            })
        }
    }

    pub fn divides(&self, x: &QuadInt) -> bool {
        !self.is_zero() && x.exact_divide(self).is_ok()
    }

    /// Parses literals such as `3+2w`, `3+2*w`, `-1-i`, `5` or `w`.
    ///
    /// Both `w` and `i` (and `ω`) denote the ring generator ω.
    pub fn parse(field: Field, s: &str) -> Result<QuadInt> {
        let bad = || Error::Precondition(format!("cannot parse {s:?} as a+b*w"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut a = Integer::new();
        let mut b = Integer::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == compact.len() => (1, rest),
                _ => return Err(bad()),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map(|i| i + 1)
                .unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() || term.starts_with(['+', '-']) {
                return Err(bad());
            }
            let generator = ['w', 'i', 'ω'].iter().find_map(|&c| term.strip_suffix(c));
            if let Some(coeff) = generator {
                let c = match coeff.strip_suffix('*') {
                    Some("") => return Err(bad()),
                    Some(c) => c.parse::<Integer>().map_err(|_| bad())?,
                    None if coeff.is_empty() => Integer::from(1),
                    None => coeff.parse::<Integer>().map_err(|_| bad())?,
                };
                b += c * sign;
            } else {
                let c = term.parse::<Integer>().map_err(|_| bad())?;
                a += c * sign;
            }
        }
        Ok(QuadInt::new(field, a, b))
    }
}

fn check_same(f: Field, g: Field) {
    assert_eq!(f, g, "mixing elements of different fields");
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.field.omega_symbol();
        if self.b == 0 {
            return write!(f, "{}", self.a);
        }
        let coeff = if self.b == 1 {
            String::new()
        } else if self.b == -1 {
            "-".to_string()
        } else {
            self.b.to_string()
        };
        if self.a == 0 {
            return write!(f, "{coeff}{sym}");
        }
        if self.b < 0 {
            write!(f, "{}{}{}", self.a, coeff, sym)
        } else {
            write!(f, "{}+{}{}", self.a, coeff, sym)
        }
    }
}

fn int_field<S: SerializeStruct>(
    st: &mut S,
    key: &'static str,
    v: &Integer,
) -> std::result::Result<(), S::Error> {
    match v.to_i64() {
        Some(x) => st.serialize_field(key, &x),
        None => st.serialize_field(key, &v.to_string()),
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QuadInt", 3)?;
        int_field(&mut st, "a", &self.a)?;
        int_field(&mut st, "b", &self.b)?;
        st.serialize_field("d", &self.field.d())?;
        st.end()
    }
}

impl<'x> Add<&'x QuadInt> for &'x QuadInt {
    type Output = QuadInt;
    fn add(self, o: &QuadInt) -> QuadInt {
        check_same(self.field, o.field);
        QuadInt {
            a: Integer::from(&self.a + &o.a),
            b: Integer::from(&self.b + &o.b),
            field: self.field,
        }
    }
}

impl<'x> Sub<&'x QuadInt> for &'x QuadInt {
    type Output = QuadInt;
    fn sub(self, o: &QuadInt) -> QuadInt {
        check_same(self.field, o.field);
        QuadInt {
            a: Integer::from(&self.a - &o.a),
            b: Integer::from(&self.b - &o.b),
            field: self.field,
        }
    }
}

impl<'x> Mul<&'x QuadInt> for &'x QuadInt {
    type Output = QuadInt;
    fn mul(self, o: &QuadInt) -> QuadInt {
        check_same(self.field, o.field);
        let f = self.field;
        let bb = Integer::from(&self.b * &o.b);
        let mut a = Integer::from(&self.a * &o.a);
        a -= Integer::from(&bb * f.n());
        let mut b = Integer::from(&self.a * &o.b);
        b += Integer::from(&self.b * &o.a);
        b += bb * f.t();
        QuadInt { a, b, field: f }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: Integer::from(-&self.a),
            b: Integer::from(-&self.b),
            field: self.field,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $m(self, o: QuadInt) -> QuadInt { (&self).$m(&o) }
        }
        impl<'x> $tr<&'x QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $m(self, o: &QuadInt) -> QuadInt { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}
