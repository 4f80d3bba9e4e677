//! Exact-or-float real numbers used for PAR values and probabilities.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::ZSqrt2;

pub type Rational = Ratio<i128>;

/// A ratio computed exactly when the arithmetic allows it, otherwise a float.
#[derive(Clone, Copy, Debug)]
pub enum Real {
    Exact(Rational),
    Float(f64),
}

impl Real {
    pub fn int(v: i128) -> Self {
        Real::Exact(Rational::from_integer(v))
    }

    /// `num / den` for values in Z[√2]; exact when both are rational.
    pub fn quotient(num: ZSqrt2, den: ZSqrt2) -> Self {
        if num.is_rational() && den.is_rational() && den.a != 0 {
            Real::Exact(Rational::new(num.a, den.a))
        } else {
            Real::Float(num.to_f64() / den.to_f64())
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Float(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<Rational> {
        match self {
            Real::Exact(r) => Some(*r),
            Real::Float(_) => None,
        }
    }

    pub fn log2(&self) -> f64 {
        self.exact_log2()
            .map(|v| v as f64)
            .unwrap_or_else(|| self.to_f64().log2())
    }

    /// `log2` of an exact power of two (including negative powers).
    pub fn exact_log2(&self) -> Option<i64> {
        let r = self.as_exact()?;
        let (n, d) = (*r.numer(), *r.denom());
        if n <= 0 {
            return None;
        }
        if d == 1 && n.count_ones() == 1 {
            Some(n.trailing_zeros() as i64)
        } else if n == 1 && d.count_ones() == 1 {
            Some(-(d.trailing_zeros() as i64))
        } else {
            None
        }
    }

    /// Exact power of two, `2^e`.
    pub fn pow2(e: i64) -> Self {
        if e >= 0 {
            Real::int(1i128 << e)
        } else {
            Real::Exact(Rational::new(1, 1i128 << (-e)))
        }
    }

    /// Equality with a float tolerance when either side is a float.
    pub fn approx_eq(&self, other: &Real, rel_tol: f64) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Float(v) => *v == 0.0,
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::int(v as i128)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Real::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Real::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Exact values serialize as `"p/q"` strings, floats as JSON numbers.
impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(_) => serializer.serialize_str(&self.to_string()),
            Real::Float(v) => serializer.serialize_f64(*v),
        }
    }
}
