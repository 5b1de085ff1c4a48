//! Fixed-size matrices over a [`Scalar`], used for the SO(3) and PGL(2,ℂ)
//! labels.

use std::ops::{Add, Mul, Neg, Sub};

use crate::interval::{Interval, IntervalMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn identity() -> Self {
        Mat3(std::array::from_fn(|r| std::array::from_fn(|c| if r == c { T::one() } else { T::zero() })))
    }

    pub fn zero() -> Self {
        Mat3([[T::zero(); 3]; 3])
    }

    pub fn transpose(&self) -> Self {
        Mat3(std::array::from_fn(|r| std::array::from_fn(|c| self.0[c][r])))
    }

    /// The entries `(0,1)`, `(0,2)`, `(1,2)` above the diagonal.
    pub fn upper(&self) -> [T; 3] {
        [self.0[0][1], self.0[0][2], self.0[1][2]]
    }

    pub fn approx(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c].approx()))
    }
}

impl<T: Scalar> Add for Mat3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Mat3(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c] + rhs.0[r][c])))
    }
}

impl<T: Scalar> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Mat3(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c] + self.0[r][2] * rhs.0[2][c])
        }))
    }
}

impl Mat3<Interval> {
    pub fn to_interval_matrix(&self) -> IntervalMatrix {
        IntervalMatrix::from_fn(3, 3, |r, c| self.0[r][c])
    }

    pub fn encloses_identity(&self) -> bool {
        self.to_interval_matrix().encloses_identity()
    }
}

/// A complex number over a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }

    pub fn real(re: T) -> Self {
        Cx { re, im: T::zero() }
    }

    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn approx(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.approx(), self.im.approx())
    }
}

impl<T: Scalar> Add for Cx<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: Scalar> Sub for Cx<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: Scalar> Neg for Cx<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Cx::new(-self.re, -self.im)
    }
}

impl<T: Scalar> Mul for Cx<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Cx::new(self.re * rhs.re - self.im * rhs.im, self.re * rhs.im + self.im * rhs.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[Cx<T>; 2]; 2]);

impl<T: Scalar> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[Cx::one(), Cx::zero()], [Cx::zero(), Cx::one()]])
    }

    pub fn approx(&self) -> [[num_complex::Complex64; 2]; 2] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c].approx()))
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Mat2(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c])
        }))
    }
}

impl Mat2<Interval> {
    /// The enclosure contains a nonzero multiple of the identity: both
    /// off-diagonal entries and the diagonal difference enclose 0 and the
    /// diagonal is bounded away from 0.
    pub fn encloses_projective_identity(&self) -> bool {
        let m = &self.0;
        let zero = |z: Cx<Interval>| z.re.contains_zero() && z.im.contains_zero();
        let nonzero = |z: Cx<Interval>| !(z.re.contains_zero() && z.im.contains_zero());
        zero(m[0][1]) && zero(m[1][0]) && zero(m[0][0] - m[1][1]) && nonzero(m[0][0])
    }
}
