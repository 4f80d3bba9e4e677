//! Exact arithmetic in the cyclotomic ring Z[ω], ω = e^{iπ/4}, and in Z[√2].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// `a + bω + cω² + dω³` with integer coefficients; `ω⁴ = −1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZOmega(pub [i64; 4]);

impl ZOmega {
    pub const ZERO: ZOmega = ZOmega([0, 0, 0, 0]);
    pub const ONE: ZOmega = ZOmega([1, 0, 0, 0]);
    /// ω² = i.
    pub const I: ZOmega = ZOmega([0, 0, 1, 0]);

    pub const fn int(v: i64) -> Self {
        ZOmega([v, 0, 0, 0])
    }

    /// ω^p for any integer p.
    pub fn omega_pow(p: i64) -> Self {
        let p = p.rem_euclid(8) as usize;
        let mut c = [0i64; 4];
        if p < 4 {
            c[p] = 1;
        } else {
            c[p - 4] = -1;
        }
        ZOmega(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.0[1] == 0 && self.0[2] == 0 && self.0[3] == 0
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.0;
        ZOmega([a, -d, -c, -b])
    }

    /// Multiplication by ω^p (a signed rotation of the coefficients).
    pub fn mul_omega_pow(&self, p: i64) -> Self {
        let p = p.rem_euclid(8) as usize;
        let mut out = [0i64; 4];
        for (i, &v) in self.0.iter().enumerate() {
            let e = i + p;
            let (slot, sign) = ((e % 4), if (e / 4) % 2 == 0 { 1 } else { -1 });
            out[slot] += sign * v;
        }
        ZOmega(out)
    }

    /// `|z|²` as an element of Z[√2].
    pub fn norm_sq(&self) -> ZSqrt2 {
        let [a, b, c, d] = self.0.map(i128::from);
        ZSqrt2 {
            a: a * a + b * b + c * c + d * d,
            b: a * b + b * c + c * d - d * a,
        }
    }

    /// All four coefficients even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|v| v % 2 == 0)
    }

    pub fn half(&self) -> Self {
        ZOmega(self.0.map(|v| v / 2))
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let [a, b, c, d] = self.0.map(|v| v as f64);
        Complex64::new(a + s * b - s * d, s * b + c + s * d)
    }
}

impl Add for ZOmega {
    type Output = ZOmega;
    fn add(self, o: ZOmega) -> ZOmega {
        ZOmega([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for ZOmega {
    type Output = ZOmega;
    fn sub(self, o: ZOmega) -> ZOmega {
        self + (-o)
    }
}

impl Neg for ZOmega {
    type Output = ZOmega;
    fn neg(self) -> ZOmega {
        ZOmega(self.0.map(|v| -v))
    }
}

impl AddAssign for ZOmega {
    fn add_assign(&mut self, o: ZOmega) {
        *self = *self + o;
    }
}

impl SubAssign for ZOmega {
    fn sub_assign(&mut self, o: ZOmega) {
        *self = *self - o;
    }
}

impl Mul for ZOmega {
    type Output = ZOmega;
    fn mul(self, o: ZOmega) -> ZOmega {
        let mut out = [0i64; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = self.0[i] * o.0[j];
                if i + j < 4 {
                    out[i + j] += v;
                } else {
                    out[i + j - 4] -= v;
                }
            }
        }
        ZOmega(out)
    }
}

impl fmt::Display for ZOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a} {b} {c} {d}")
    }
}

/// `a + b√2` with 128-bit coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZSqrt2 {
    pub a: i128,
    pub b: i128,
}

impl ZSqrt2 {
    pub const ZERO: ZSqrt2 = ZSqrt2 { a: 0, b: 0 };

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2
    }

    /// Exact sign, falling back to floating point only if squaring overflows.
    pub fn signum(&self) -> i32 {
        let (a, b) = (self.a, self.b);
        let sa = a.signum() as i32;
        let sb = b.signum() as i32;
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with 2b²
        match (
            a.checked_mul(a),
            b.checked_mul(b).and_then(|v| v.checked_mul(2)),
        ) {
            (Some(a2), Some(b2)) => match a2.cmp(&b2) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => 0,
            },
            _ => {
                let v = self.to_f64();
                if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

impl Add for ZSqrt2 {
    type Output = ZSqrt2;
    fn add(self, o: ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }
}

impl AddAssign for ZSqrt2 {
    fn add_assign(&mut self, o: ZSqrt2) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl Sub for ZSqrt2 {
    type Output = ZSqrt2;
    fn sub(self, o: ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }
}

impl PartialOrd for ZSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}
