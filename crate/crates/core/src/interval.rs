//! Outward-rounded interval arithmetic over `f64` endpoints.
//!
//! Every operation returns an interval that contains the exact real result
//! set of its inputs. The basic operations (`+ - * /` and `sqrt`) are
//! correctly rounded by IEEE 754, so their round-to-nearest results are
//! pushed outward by one ulp. Transcendental functions come from the
//! platform libm, which is not correctly rounded; their endpoint values are
//! pushed outward by [`TRANSCENDENTAL_SLACK_ULPS`] ulps. `cosh` and `acosh`
//! are assembled from `exp`, `ln` and `sqrt` so that they inherit those
//! bounds instead of relying on the libm accuracy of `cosh`/`acosh`.
//!
//! No global rounding mode is touched, so values can be shared freely
//! between threads.

mod matrix;

pub use matrix::{interval_matrix_invertible, IntervalMatrix, ShapeError};

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Number of ulps by which libm results are widened on each side.
pub const TRANSCENDENTAL_SLACK_ULPS: u32 = 2;

/// Lower bound of pi (the `f64` closest to pi lies below it).
const PI_LO: f64 = std::f64::consts::PI;
/// Upper bound of pi.
const PI_HI: f64 = 3.141_592_653_589_793_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("{func}: argument outside the real domain")]
    Domain { func: &'static str },
    #[error("interval bounds are not ordered or not finite")]
    InvalidBounds,
}

/// A closed interval `[lo, hi]` of reals.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const PI: Interval = Interval { lo: PI_LO, hi: PI_HI };
    pub const TWO_PI: Interval = Interval {
        lo: 2.0 * PI_LO,
        hi: 2.0 * PI_HI,
    };

    /// Builds `[lo, hi]`, rejecting unordered or NaN bounds.
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::InvalidBounds);
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// The smallest interval containing both `a` and `b`.
    pub fn hull(a: f64, b: f64) -> Self {
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    /// `[mid - rad, mid + rad]`, rounded outward.
    pub fn around(mid: f64, rad: f64) -> Self {
        let rad = rad.abs();
        Interval {
            lo: down(mid - rad),
            hi: up(mid + rad),
        }
    }

    /// Interval that marks a failed computation; all predicates on it are false.
    pub const fn failed() -> Self {
        Interval {
            lo: f64::NAN,
            hi: f64::NAN,
        }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    /// Upper bound on the width.
    pub fn width(self) -> f64 {
        up(self.hi - self.lo)
    }

    /// Upper bound on the radius around [`Interval::mid`].
    pub fn rad(self) -> f64 {
        let m = self.mid();
        up((m - self.lo).max(self.hi - m))
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// True when both endpoints are finite numbers.
    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    /// `other ⊆ self`.
    pub fn encloses(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` lies in the interior of `self`.
    pub fn interior_encloses(self, other: Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn intersects(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn union(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Every member is `< 0`.
    pub fn certainly_negative(self) -> bool {
        self.hi < 0.0
    }

    /// Every member is `> 0`.
    pub fn certainly_positive(self) -> bool {
        self.lo > 0.0
    }

    /// Every member of `self` is below every member of `other`.
    pub fn certainly_lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval {
            lo: mul_bounds(a.lo, a.lo).0.max(0.0),
            hi: mul_bounds(a.hi, a.hi).1,
        }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Err(IntervalError::DivisionByZero);
        }
        Ok(hull_of_bounds([
            div_bounds(self.lo, rhs.lo),
            div_bounds(self.lo, rhs.hi),
            div_bounds(self.hi, rhs.lo),
            div_bounds(self.hi, rhs.hi),
        ]))
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if !(self.lo >= 0.0) {
            return Err(IntervalError::Domain { func: "sqrt" });
        }
        Ok(Interval {
            lo: sqrt_bounds(self.lo).0.max(0.0),
            hi: sqrt_bounds(self.hi).1,
        })
    }

    pub fn exp(self) -> Interval {
        let lo = if self.lo == 0.0 {
            1.0
        } else {
            down_n(self.lo.exp(), TRANSCENDENTAL_SLACK_ULPS).max(0.0)
        };
        let hi = if self.hi == 0.0 {
            1.0
        } else {
            up_n(self.hi.exp(), TRANSCENDENTAL_SLACK_ULPS)
        };
        Interval { lo, hi }
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if !(self.lo > 0.0) {
            return Err(IntervalError::Domain { func: "ln" });
        }
        Ok(Interval {
            lo: down_n(self.lo.ln(), TRANSCENDENTAL_SLACK_ULPS),
            hi: up_n(self.hi.ln(), TRANSCENDENTAL_SLACK_ULPS),
        })
    }

    pub fn cosh(self) -> Interval {
        let at = |x: f64| {
            let p = Interval::point(x);
            (p.exp() + (-p).exp()) * Interval::point(0.5)
        };
        if self.lo >= 0.0 {
            Interval {
                lo: at(self.lo).lo.max(1.0),
                hi: at(self.hi).hi,
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: at(self.hi).lo.max(1.0),
                hi: at(self.lo).hi,
            }
        } else {
            Interval {
                lo: 1.0,
                hi: at(self.lo).hi.max(at(self.hi).hi),
            }
        }
    }

    pub fn acosh(self) -> Result<Interval, IntervalError> {
        if !(self.lo >= 1.0) {
            return Err(IntervalError::Domain { func: "acosh" });
        }
        let at = |y: f64| -> Result<Interval, IntervalError> {
            let p = Interval::point(y);
            let s = (p.sqr() - Interval::ONE).max_zero().sqrt()?;
            (p + s).ln()
        };
        Ok(Interval {
            lo: at(self.lo)?.lo.max(0.0),
            hi: at(self.hi)?.hi,
        })
    }

    /// `max(self, 0)` elementwise, used where the exact value is known to be non-negative.
    fn max_zero(self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn acos(self) -> Result<Interval, IntervalError> {
        if !(self.lo >= -1.0 && self.hi <= 1.0) {
            return Err(IntervalError::Domain { func: "acos" });
        }
        let lo = if self.hi == 1.0 {
            0.0
        } else {
            down_n(self.hi.acos(), TRANSCENDENTAL_SLACK_ULPS).max(0.0)
        };
        let hi = if self.lo == -1.0 {
            PI_HI
        } else {
            up_n(self.lo.acos(), TRANSCENDENTAL_SLACK_ULPS).min(PI_HI)
        };
        Ok(Interval { lo, hi })
    }

    pub fn cos(self) -> Interval {
        if !self.is_finite() {
            return Interval::failed();
        }
        if self.hi - self.lo >= 2.0 * PI_LO {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let (ca, cb) = (self.lo.cos(), self.hi.cos());
        let mut lo = down_n(ca.min(cb), TRANSCENDENTAL_SLACK_ULPS);
        let mut hi = up_n(ca.max(cb), TRANSCENDENTAL_SLACK_ULPS);
        // cos peaks at even multiples of pi and bottoms out at odd ones.
        for (n, _) in multiples_of_pi_maybe_inside(self, 0.0) {
            if n % 2 == 0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
        Interval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        }
    }

    pub fn sin(self) -> Interval {
        if !self.is_finite() {
            return Interval::failed();
        }
        if self.hi - self.lo >= 2.0 * PI_LO {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let (sa, sb) = (self.lo.sin(), self.hi.sin());
        let mut lo = down_n(sa.min(sb), TRANSCENDENTAL_SLACK_ULPS);
        let mut hi = up_n(sa.max(sb), TRANSCENDENTAL_SLACK_ULPS);
        // sin peaks at (2k + 1/2) pi and bottoms out at (2k - 1/2) pi.
        for (n, _) in multiples_of_pi_maybe_inside(self, 0.5) {
            if n.rem_euclid(2) == 0 {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
        Interval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        }
    }

    /// Decimal rendering whose printed bounds enclose the stored bounds.
    pub fn to_decimal_pair(self) -> (String, String) {
        let (lo, hi) = self.outward_decimal_bounds();
        (format!("{lo:e}"), format!("{hi:e}"))
    }

    /// Interval from decimal bounds, widened by one ulp on each side so that
    /// it encloses the decimal interval whatever the parser's rounding.
    pub fn from_decimal_pair(lo: &str, hi: &str) -> Result<Interval, IntervalError> {
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| IntervalError::InvalidBounds);
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(IntervalError::InvalidBounds);
        }
        Interval::new(down(lo), up(hi))
    }

    /// Endpoints widened by one ulp, so that their shortest decimal
    /// representations still enclose the stored endpoints.
    pub fn outward_decimal_bounds(self) -> (f64, f64) {
        let lo = if self.lo == f64::NEG_INFINITY { self.lo } else { down(self.lo) };
        let hi = if self.hi == f64::INFINITY { self.hi } else { up(self.hi) };
        (lo, hi)
    }
}

/// Integers `n` for which `(n + offset) * pi` may lie inside `x`, paired with
/// an enclosure of `(n + offset) * pi`.
fn multiples_of_pi_maybe_inside(x: Interval, offset: f64) -> Vec<(i64, Interval)> {
    let first = (x.lo / PI_HI - offset).floor() as i64 - 1;
    let last = (x.hi / PI_LO - offset).ceil() as i64 + 1;
    let mut out = Vec::new();
    if last - first > 8 {
        // Only reachable for widths near 2 pi at huge magnitudes; report both extrema.
        out.push((0, Interval::ZERO));
        out.push((1, Interval::ZERO));
        return out;
    }
    for n in first..=last {
        let k = Interval::point(n as f64 + offset);
        let pos = k * Interval::PI;
        if pos.intersects(x) {
            out.push((n, pos));
        }
    }
    out
}

/// Enclosure of the exact square root of a non-negative float.
fn sqrt_bounds(x: f64) -> (f64, f64) {
    let r = x.sqrt();
    if x == 0.0 || !r.is_finite() || x < TINY {
        return if x == 0.0 { (0.0, 0.0) } else { (down(r), up(r)) };
    }
    correct(r, (-r).mul_add(r, x))
}

/// Values this small may lose the sign of their rounding error to underflow.
const TINY: f64 = 1e-290;

/// Enclosure of the exact sum of two floats.
fn add_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return (down(s), up(s));
    }
    // TwoSum: `err` is the exact rounding error of `s`.
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    correct(s, err)
}

/// Enclosure of the exact product of two floats.
fn mul_bounds(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if !p.is_finite() || p.abs() < TINY {
        if p == 0.0 && (a == 0.0 || b == 0.0) {
            return (0.0, 0.0);
        }
        return (down(p), up(p));
    }
    correct(p, a.mul_add(b, -p))
}

/// Enclosure of the exact quotient of two floats, `b != 0`.
fn div_bounds(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if !q.is_finite() || q.abs() < TINY || a.abs() < TINY {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        return (down(q), up(q));
    }
    // a − q·b, exactly representable; its sign relative to b locates a/b.
    let r = (-q).mul_add(b, a);
    correct(q, if b > 0.0 { r } else { -r })
}

/// Bounds for a value `v + err` with `v` a float and `err` only known by sign.
fn correct(v: f64, err: f64) -> (f64, f64) {
    if err == 0.0 {
        (v, v)
    } else if err > 0.0 {
        (v, up(v))
    } else {
        (down(v), v)
    }
}

fn hull_of_bounds(v: [(f64, f64); 4]) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (l, h) in v {
        if l.is_nan() || h.is_nan() {
            return Interval::failed();
        }
        lo = lo.min(l);
        hi = hi.max(h);
    }
    Interval { lo, hi }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair();
        write!(f, "[{lo}, {hi}]")
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        let lo = add_bounds(self.lo, rhs.lo).0;
        let hi = add_bounds(self.hi, rhs.hi).1;
        if lo.is_nan() || hi.is_nan() {
            return Interval::failed();
        }
        Interval { lo, hi }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        // Exact zeros stay exact so that zero blocks of matrices remain point intervals.
        if (self.lo == 0.0 && self.hi == 0.0 && rhs.is_finite())
            || (rhs.lo == 0.0 && rhs.hi == 0.0 && self.is_finite())
        {
            return Interval::ZERO;
        }
        hull_of_bounds([
            mul_bounds(self.lo, rhs.lo),
            mul_bounds(self.lo, rhs.hi),
            mul_bounds(self.hi, rhs.lo),
            mul_bounds(self.hi, rhs.hi),
        ])
    }
}

/// Division through the operator marks failure with a NaN interval when the
/// divisor contains zero; use [`Interval::checked_div`] to get an error.
impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).unwrap_or(Interval::failed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_arithmetic() {
        let a = Interval::new(1.0, 2.0).unwrap();
        let b = Interval::new(3.0, 4.0).unwrap();
        let s = a + b;
        assert!(s.encloses(Interval::new(4.0, 6.0).unwrap()));
        assert!(s.width() < 2.0 + 1e-14);

        let u = Interval::new(-1.0, 1.0).unwrap();
        let p = u * u;
        assert!(p.encloses(Interval::new(-1.0, 1.0).unwrap()));
        assert!(p.lo() >= -1.0 - 1e-15 && p.hi() <= 1.0 + 1e-15);
    }

    #[test]
    fn one_third_is_tight() {
        let q = Interval::ONE.checked_div(Interval::point(3.0)).unwrap();
        let third = 1.0 / 3.0;
        assert!(q.contains(third));
        // at most one ulp on each side of the nearest double
        assert!(q.lo() >= third.next_down() && q.hi() <= third.next_up());
        assert!(q.lo() < q.hi());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let z = Interval::new(-1.0, 1.0).unwrap();
        assert_eq!(
            Interval::ONE.checked_div(z),
            Err(IntervalError::DivisionByZero)
        );
        assert!(!(Interval::ONE / z).is_finite());
    }

    #[test]
    fn elementary_examples() {
        let c = Interval::ZERO.cosh();
        assert!(c.contains(1.0));
        assert!(c.width() <= 4.0 * f64::EPSILON);

        let full = Interval::new(-1.0, 1.0).unwrap().acos().unwrap();
        assert!(full.lo() <= 0.0 && full.hi() >= std::f64::consts::PI);
        assert!(full.hi() <= PI_HI);

        let r = Interval::ONE.cosh().acosh().unwrap();
        assert!(r.contains(1.0));
        assert!(r.width() < 1e-14);
    }

    #[test]
    fn domain_preconditions() {
        assert!(Interval::new(-0.1, 1.0).unwrap().sqrt().is_err());
        assert!(Interval::new(0.5, 1.1).unwrap().acos().is_err());
        assert!(Interval::new(0.5, 2.0).unwrap().acosh().is_err());
        assert!(Interval::new(0.0, 2.0).unwrap().ln().is_err());
        assert!(Interval::new(0.0, 4.0).unwrap().sqrt().unwrap().contains(2.0));
    }

    #[test]
    fn trig_interior_extrema() {
        let x = Interval::new(-0.5, 0.5).unwrap().cos();
        assert_eq!(x.hi(), 1.0);
        let x = Interval::new(3.0, 3.3).unwrap().cos();
        assert_eq!(x.lo(), -1.0);
        let x = Interval::new(1.0, 2.0).unwrap().sin();
        assert_eq!(x.hi(), 1.0);
        let x = Interval::new(-2.0, -1.0).unwrap().sin();
        assert_eq!(x.lo(), -1.0);
        // monotone piece, no extremum
        let x = Interval::new(0.2, 0.3).unwrap().cos();
        assert!(x.hi() < 1.0 && x.lo() > 0.9);
        let two_pi = Interval::TWO_PI.cos();
        assert!(two_pi.contains(1.0));
        assert!(Interval::TWO_PI.sin().contains(0.0));
    }

    #[test]
    fn pi_bounds_bracket_pi() {
        const { assert!(PI_LO < PI_HI) };
        assert_eq!(PI_LO.next_up(), PI_HI);
    }

    #[test]
    fn decimal_rendering_is_outward() {
        let x = Interval::ONE.checked_div(Interval::point(3.0)).unwrap();
        let (lo, hi) = x.to_decimal_pair();
        let lo: f64 = lo.parse().unwrap();
        let hi: f64 = hi.parse().unwrap();
        assert!(lo < x.lo() && hi > x.hi());
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }
}
