//! Midpoint-radius enclosures of 3×3 matrices.
//!
//! Long products of interval rotation matrices suffer from the wrapping
//! effect: entrywise intervals grow geometrically with the number of
//! factors. A ball `{C + E : ‖E‖₂ ≤ ε}` with a float center and a spectral
//! norm radius only accumulates the errors additively, since the centers are
//! close to orthogonal. All radius arithmetic rounds upward.

use super::mat::Mat3;
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball3 {
    pub center: [[f64; 3]; 3],
    /// Upper bound on the spectral norm of the deviation from the center.
    pub radius: f64,
}

fn point_matrix(c: &[[f64; 3]; 3]) -> Mat3<Interval> {
    Mat3(std::array::from_fn(|r| std::array::from_fn(|k| Interval::point(c[r][k]))))
}

/// Upward-rounded Frobenius norm of `m − center`, with `center` the entrywise
/// midpoints of `m`. Returns the center and the bound.
fn recenter(m: &Mat3<Interval>) -> ([[f64; 3]; 3], Interval) {
    let center: [[f64; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|k| m.0[r][k].mid()));
    let mut sum = Interval::ZERO;
    for r in 0..3 {
        for k in 0..3 {
            let dev = Interval::point((m.0[r][k] - Interval::point(center[r][k])).mag());
            sum = sum + dev.sqr();
        }
    }
    (center, sum.sqrt().unwrap_or(Interval::failed()))
}

/// Upper bound on the spectral norm: `‖C‖₂² = ρ(CᵀC) ≤ ‖CᵀC‖∞`.
fn norm2_bound(c: &[[f64; 3]; 3]) -> Interval {
    let p = point_matrix(c);
    let g = p.transpose() * p;
    let row_max = (0..3)
        .map(|r| (0..3).fold(Interval::ZERO, |acc, k| acc + Interval::point(g.0[r][k].mag())).hi())
        .fold(0.0, f64::max);
    Interval::point(row_max).sqrt().unwrap_or(Interval::failed())
}

impl Ball3 {
    pub fn from_interval(m: &Mat3<Interval>) -> Ball3 {
        let (center, r) = recenter(m);
        Ball3 {
            center,
            radius: r.hi(),
        }
    }

    pub fn identity() -> Ball3 {
        Ball3 {
            center: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            radius: 0.0,
        }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Ball3) -> Ball3 {
        let (center, rounding) = recenter(&(point_matrix(&self.center) * point_matrix(&rhs.center)));
        let (na, nb) = (norm2_bound(&self.center), norm2_bound(&rhs.center));
        let (ea, eb) = (Interval::point(self.radius), Interval::point(rhs.radius));
        let radius = rounding + na * eb + ea * nb + ea * eb;
        Ball3 {
            center,
            radius: if radius.is_finite() { radius.hi() } else { f64::INFINITY },
        }
    }

    /// Entrywise enclosure; every entry of the deviation is bounded by its
    /// spectral norm.
    pub fn to_interval(&self) -> Mat3<Interval> {
        Mat3(std::array::from_fn(|r| {
            std::array::from_fn(|k| {
                if self.radius.is_finite() {
                    Interval::around(self.center[r][k], self.radius)
                } else {
                    Interval::failed()
                }
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gimbal::rot_z;

    #[test]
    fn long_rotation_products_stay_tight() {
        let w = Interval::new(0.3, 0.3 + 1e-12).unwrap();
        let r = rot_z(w);
        let rb = Ball3::from_interval(&r);
        let mut naive = Mat3::<Interval>::identity();
        let mut ball = Ball3::identity();
        for _ in 0..400 {
            naive = r * naive;
            ball = rb.mul(&ball);
        }
        let exact = rot_z(Interval::point(400.0) * w);
        let enclosure = ball.to_interval();
        for i in 0..3 {
            for j in 0..3 {
                assert!(enclosure.0[i][j].intersects(exact.0[i][j]));
            }
        }
        assert!(ball.radius < 1e-8, "{}", ball.radius);
        assert!(naive.0[0][0].width() > enclosure.0[0][0].width());
    }
}
