//! Numeric abstraction shared by the float and the interval code paths.
//!
//! Predicates such as [`Scalar::surely_neg`] mean "proven" for intervals: an
//! interval is only negative if every member is. For `f64` they are the plain
//! comparisons.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::interval::Interval;

pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn two_pi() -> Self;
    fn try_div(self, rhs: Self) -> Option<Self>;
    fn try_sqrt(self) -> Option<Self>;
    fn try_acos(self) -> Option<Self>;
    fn cosine(self) -> Self;
    fn sine(self) -> Self;
    fn surely_neg(self) -> bool;
    fn surely_pos(self) -> bool;
    /// Representative float value (the midpoint for intervals).
    fn approx(self) -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn square(self) -> Self {
        self * self
    }

    /// Proven `self < rhs`.
    fn surely_lt(self, rhs: Self) -> bool {
        (rhs - self).surely_pos()
    }

    /// Determinant of a 3×3 matrix by cofactor expansion along the first row.
    fn det3(m: [[Self; 3]; 3]) -> Self {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// `(s, e)` with `s + e = a + b` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `(p, e)` with `p + e = a·b` exactly.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn two_pi() -> Self {
        std::f64::consts::TAU
    }
    fn try_div(self, rhs: Self) -> Option<Self> {
        (rhs != 0.0).then(|| self / rhs)
    }
    fn try_sqrt(self) -> Option<Self> {
        (self >= 0.0).then(|| self.sqrt())
    }
    fn try_acos(self) -> Option<Self> {
        (-1.0..=1.0).contains(&self).then(|| self.acos())
    }
    fn cosine(self) -> Self {
        self.cos()
    }
    fn sine(self) -> Self {
        self.sin()
    }
    fn surely_neg(self) -> bool {
        self < 0.0
    }
    fn surely_pos(self) -> bool {
        self > 0.0
    }
    fn approx(self) -> f64 {
        self
    }
    fn square(self) -> Self {
        self * self
    }
    /// Compensated expansion: the six triple products are split exactly
    /// (up to a second-order term) and summed with error compensation, so
    /// cofactors of nearly degenerate simplices keep their relative accuracy.
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        const TERMS: [(usize, usize, usize, f64); 6] = [
            (0, 1, 2, 1.0),
            (1, 2, 0, 1.0),
            (2, 0, 1, 1.0),
            (0, 2, 1, -1.0),
            (2, 1, 0, -1.0),
            (1, 0, 2, -1.0),
        ];
        let (mut sum, mut comp) = (0.0, 0.0);
        for (a, b, c, s) in TERMS {
            let (p, e) = two_prod(s * m[0][a], m[1][b]);
            let (q, f) = two_prod(p, m[2][c]);
            for x in [q, f, e * m[2][c]] {
                let (t, err) = two_sum(sum, x);
                sum = t;
                comp += err;
            }
        }
        sum + comp
    }
}

impl Scalar for Interval {
    fn from_f64(x: f64) -> Self {
        Interval::point(x)
    }
    fn two_pi() -> Self {
        Interval::TWO_PI
    }
    fn try_div(self, rhs: Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
    fn try_sqrt(self) -> Option<Self> {
        self.sqrt().ok()
    }
    fn try_acos(self) -> Option<Self> {
        self.acos().ok()
    }
    fn cosine(self) -> Self {
        self.cos()
    }
    fn sine(self) -> Self {
        self.sin()
    }
    fn surely_neg(self) -> bool {
        self.certainly_negative()
    }
    fn surely_pos(self) -> bool {
        self.certainly_positive()
    }
    fn approx(self) -> f64 {
        self.mid()
    }
    fn square(self) -> Self {
        self.sqr()
    }
}
