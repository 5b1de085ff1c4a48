//! Small dense interval matrices.

use nalgebra::DMatrix;
use thiserror::Error;

use super::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("shape mismatch: {left:?} vs {right:?}")]
pub struct ShapeError {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

/// Row-major matrix of intervals.
#[derive(Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl std::fmt::Debug for IntervalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntervalMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntervalMatrix { rows, cols, data }
    }

    /// Point-interval copy of a float matrix.
    pub fn from_f64(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| Interval::point(m[(r, c)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[Interval] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.data
    }

    /// Matrix of midpoints.
    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].mid())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Every entry of `self` contains the corresponding entry of `m`.
    pub fn contains_point(&self, m: &DMatrix<f64>) -> bool {
        self.shape() == (m.nrows(), m.ncols())
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self[(r, c)].contains(m[(r, c)])))
    }

    /// Every entry of `self` encloses the corresponding entry of `other`.
    pub fn encloses(&self, other: &IntervalMatrix) -> bool {
        self.shape() == other.shape()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.encloses(*b))
    }

    pub fn encloses_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self[(r, c)].contains(if r == c { 1.0 } else { 0.0 })))
    }

    pub fn transpose(&self) -> IntervalMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn mat_mul(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix, ShapeError> {
        if self.cols != rhs.rows {
            return Err(ShapeError {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Interval::ZERO;
            for k in 0..self.cols {
                acc = acc + self[(r, k)] * rhs[(k, c)];
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Interval]) -> Result<Vec<Interval>, ShapeError> {
        if self.cols != v.len() {
            return Err(ShapeError {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Interval::ZERO, |acc, (a, b)| acc + *a * *b)
            })
            .collect())
    }

    pub fn sub(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix, ShapeError> {
        if self.shape() != rhs.shape() {
            return Err(ShapeError {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (r, c): (usize, usize)) -> &Interval {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Interval {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &mut self.data[r * self.cols + c]
    }
}

/// Proves that every member matrix of `m` is invertible.
///
/// With `n` a float approximate inverse of the midpoint, every entry of
/// `m·n − Id` must be bounded in absolute value by less than `1/r²`. Then the
/// row sums of `|m·n − Id|` are below `1/r < 1`, so `m·n` is invertible for
/// every member, and so is `m`.
pub fn interval_matrix_invertible(m: &IntervalMatrix) -> bool {
    let r = m.rows();
    if r != m.cols() || r == 0 || !m.is_finite() {
        return false;
    }
    let Some(n) = m.mid().try_inverse() else {
        return false;
    };
    if n.iter().any(|x| !x.is_finite()) {
        return false;
    }
    let Ok(prod) = m.mat_mul(&IntervalMatrix::from_f64(&n)) else {
        return false;
    };
    let Ok(dev) = prod.sub(&IntervalMatrix::identity(r)) else {
        return false;
    };
    // 1/r² is rounded down so that the test stays strict.
    let r2 = Interval::point(r as f64).sqr();
    let bound = (Interval::ONE / r2).lo();
    dev.entries().iter().all(|e| e.is_finite() && e.mag() < bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot_z(w: Interval) -> IntervalMatrix {
        let (c, s) = (w.cos(), w.sin());
        let mut m = IntervalMatrix::identity(3);
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        m
    }

    #[test]
    fn identity_products() {
        let id = IntervalMatrix::identity(4);
        let p = id.mat_mul(&id).unwrap();
        assert_eq!(p, id);
        let z = IntervalMatrix::zeros(4, 2);
        let m = IntervalMatrix::from_fn(4, 4, |r, c| Interval::new(r as f64, (r + c) as f64 + 1.0).unwrap());
        assert_eq!(m.mat_mul(&z).unwrap(), IntervalMatrix::zeros(4, 2));
    }

    #[test]
    fn half_turns_compose_to_identity() {
        let r = rot_z(Interval::PI);
        let rr = r.mat_mul(&r).unwrap();
        assert!(rr.encloses_identity());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = IntervalMatrix::zeros(2, 3);
        assert!(a.mat_mul(&a).is_err());
        assert!(a.mul_vec(&[Interval::ONE; 2]).is_err());
    }

    #[test]
    fn invertibility_examples() {
        assert!(interval_matrix_invertible(&IntervalMatrix::identity(3)));
        assert!(!interval_matrix_invertible(&IntervalMatrix::zeros(3, 3)));
        let wide = IntervalMatrix::from_fn(3, 3, |_, _| Interval::new(-1.0, 1.0).unwrap());
        assert!(!interval_matrix_invertible(&wide));
        assert!(!interval_matrix_invertible(&IntervalMatrix::zeros(2, 3)));
    }
}
