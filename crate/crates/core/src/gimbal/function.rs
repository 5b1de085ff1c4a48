use thiserror::Error;

use super::ball::Ball3;
use super::labels::{rot_z, rot_z_derivative, CocycleLabels};
use super::loops::{build_gimbal_loops, GimbalLoop, Letter, LoopError};
use super::mat::Mat3;
use crate::geometry::GeometryError;
use crate::interval::{interval_matrix_invertible, Interval, IntervalMatrix};
use crate::scalar::Scalar;
use crate::triangulation::Triangulation;

/// Column of the variable of each polygon letter, looked up by edge class.
fn var_column(sim: &[usize], class: usize) -> usize {
    sim.iter()
        .position(|&s| s == class)
        .expect("polygon letters belong to approximate edges")
}

fn letter_matrix<T: Scalar>(labels: &CocycleLabels<T>, l: &Letter, sim: &[usize], values: &[T]) -> Mat3<T> {
    match l {
        Letter::Edge(e) => labels.so3(*e).expect("loops contain β- and γ-edges only"),
        Letter::Polygon(end) => rot_z(values[var_column(sim, end.class)]),
    }
}

/// The gimbal matrix of a loop: the product of its letters with polygon
/// letters replaced by `R_T` for the value `T` of their edge class.
pub fn gimbal_matrix<T: Scalar>(lp: &GimbalLoop, labels: &CocycleLabels<T>, sim: &[usize], values: &[T]) -> Mat3<T> {
    lp.letters
        .iter()
        .fold(Mat3::identity(), |acc, l| letter_matrix(labels, l, sim, values) * acc)
}

/// `g(T)`: the three upper entries of every gimbal matrix, vertex by vertex.
pub fn gimbal_function<T: Scalar>(
    loops: &[GimbalLoop],
    labels: &CocycleLabels<T>,
    sim: &[usize],
    values: &[T],
) -> Vec<T> {
    loops
        .iter()
        .flat_map(|lp| gimbal_matrix(lp, labels, sim, values).upper())
        .collect()
}

/// `Dg(T)` by the product rule, with the rows of vertex `k` at `3k..3k+3`
/// and one column per entry of `sim`.
pub fn gimbal_jacobian<T: Scalar>(
    loops: &[GimbalLoop],
    labels: &CocycleLabels<T>,
    sim: &[usize],
    values: &[T],
) -> Vec<Vec<T>> {
    let n = sim.len();
    let mut out = vec![vec![T::zero(); n]; 3 * loops.len()];
    for (k, lp) in loops.iter().enumerate() {
        let mats: Vec<Mat3<T>> = lp.letters.iter().map(|l| letter_matrix(labels, l, sim, values)).collect();
        // prefix[j] = M_{j-1} ⋯ M_0, suffix[j] = M_{len-1} ⋯ M_j.
        let len = mats.len();
        let mut prefix = vec![Mat3::identity(); len + 1];
        for j in 0..len {
            prefix[j + 1] = mats[j] * prefix[j];
        }
        let mut suffix = vec![Mat3::identity(); len + 1];
        for j in (0..len).rev() {
            suffix[j] = suffix[j + 1] * mats[j];
        }
        for (j, l) in lp.letters.iter().enumerate() {
            if let Letter::Polygon(end) = l {
                let col = var_column(sim, end.class);
                let d = suffix[j + 1] * rot_z_derivative(values[col]) * prefix[j];
                for (r, x) in d.upper().into_iter().enumerate() {
                    out[3 * k + r][col] = out[3 * k + r][col] + x;
                }
            }
        }
    }
    out
}

/// Rigorous `g(T)` through midpoint-radius products.
pub fn gimbal_function_enclosure(
    loops: &[GimbalLoop],
    labels: &CocycleLabels<Interval>,
    sim: &[usize],
    values: &[Interval],
) -> Vec<Interval> {
    loops
        .iter()
        .flat_map(|lp| {
            lp.letters
                .iter()
                .fold(Ball3::identity(), |acc, l| {
                    Ball3::from_interval(&letter_matrix(labels, l, sim, values)).mul(&acc)
                })
                .to_interval()
                .upper()
        })
        .collect()
}

/// Rigorous `[Dg(T)]` through midpoint-radius products; the layout is that
/// of [`gimbal_jacobian`].
pub fn gimbal_jacobian_enclosure(
    loops: &[GimbalLoop],
    labels: &CocycleLabels<Interval>,
    sim: &[usize],
    values: &[Interval],
) -> IntervalMatrix {
    let n = sim.len();
    let mut out = IntervalMatrix::zeros(3 * loops.len(), n);
    for (k, lp) in loops.iter().enumerate() {
        let mats: Vec<Ball3> = lp
            .letters
            .iter()
            .map(|l| Ball3::from_interval(&letter_matrix(labels, l, sim, values)))
            .collect();
        let len = mats.len();
        let mut prefix = vec![Ball3::identity(); len + 1];
        for j in 0..len {
            prefix[j + 1] = mats[j].mul(&prefix[j]);
        }
        let mut suffix = vec![Ball3::identity(); len + 1];
        for j in (0..len).rev() {
            suffix[j] = suffix[j + 1].mul(&mats[j]);
        }
        for (j, l) in lp.letters.iter().enumerate() {
            if let Letter::Polygon(end) = l {
                let col = var_column(sim, end.class);
                let d = Ball3::from_interval(&rot_z_derivative(values[col]));
                let term = suffix[j + 1].mul(&d).mul(&prefix[j]).to_interval();
                for (r, x) in term.upper().into_iter().enumerate() {
                    out[(3 * k + r, col)] = out[(3 * k + r, col)] + x;
                }
            }
        }
    }
    out
}

/// Maps an angle to the branch `(−π, π]` modulo `2π`, by subtracting the
/// multiple of `2π` nearest to the midpoint.
pub fn principal_angle(x: Interval) -> Interval {
    let k = (x.mid() / std::f64::consts::TAU).round();
    x - Interval::point(k) * Interval::TWO_PI
}

/// Outcome of the gimbal-lock test.
#[derive(Debug, Clone)]
pub struct GimbalCheck {
    pub loops: Vec<GimbalLoop>,
    /// `[Dg(K)]` for the box `K` of approximate angle sums.
    pub jacobian: IntervalMatrix,
    /// `g(2π, …, 2π)`.
    pub at_two_pi: Vec<Interval>,
    /// `g(δ)` with `δ` the angle sums reduced to `(−π, π]`.
    pub at_delta: Vec<Interval>,
    /// `K` contains `(2π, …, 2π)` and `[Dg(K)]` is proven invertible.
    pub avoided: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GimbalError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("expected {expected} approximate edges, got {found}")]
    Dimension { expected: usize, found: usize },
}

/// Builds the loops for `sim`, evaluates `[Dg(K)]` on the box `K` of the
/// approximate angle sums `theta[e], e ∈ sim`, with labels from the
/// parameter box `nu`, and tests it for invertibility.
pub fn gimbal_lock_check(
    t: &Triangulation,
    nu: &[Interval],
    theta: &[Interval],
    sim: &[usize],
) -> Result<GimbalCheck, GimbalError> {
    check_len(t, sim)?;
    let loops = build_gimbal_loops(t, sim)?;
    gimbal_lock_check_with_loops(t, nu, theta, sim, loops)
}

fn check_len(t: &Triangulation, sim: &[usize]) -> Result<(), GimbalError> {
    let expected = 3 * t.num_vertices();
    if sim.len() != expected {
        return Err(GimbalError::Dimension {
            expected,
            found: sim.len(),
        });
    }
    Ok(())
}

/// As [`gimbal_lock_check`] with loops supplied by the caller, which must
/// already be validated for `sim`.
pub fn gimbal_lock_check_with_loops(
    t: &Triangulation,
    nu: &[Interval],
    theta: &[Interval],
    sim: &[usize],
    loops: Vec<GimbalLoop>,
) -> Result<GimbalCheck, GimbalError> {
    check_len(t, sim)?;
    let labels = CocycleLabels::new(t, nu)?;
    let k: Vec<Interval> = sim.iter().map(|&e| theta[e]).collect();
    let jacobian = gimbal_jacobian_enclosure(&loops, &labels, sim, &k);
    let two_pi = vec![Interval::TWO_PI; sim.len()];
    let at_two_pi = gimbal_function_enclosure(&loops, &labels, sim, &two_pi);
    let delta: Vec<Interval> = k.iter().map(|&x| principal_angle(x)).collect();
    let at_delta = gimbal_function_enclosure(&loops, &labels, sim, &delta);
    let avoided = k.iter().all(|x| x.encloses(Interval::TWO_PI))
        && interval_matrix_invertible(&jacobian);
    Ok(GimbalCheck {
        loops,
        jacobian,
        at_two_pi,
        at_delta,
        avoided,
    })
}
