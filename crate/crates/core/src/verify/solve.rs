//! Unverified float solver for the edge equations, used to produce the
//! approximate solution that the interval steps then certify.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{self, GramData};
use crate::triangulation::Triangulation;

/// Angles above this are pushed down while far from a solution.
const ANGLE_CAP: f64 = 2.6;
const ANGLE_TARGET: f64 = 2.5;
/// Singular values below this fraction of the largest are dropped.
const RCOND: f64 = 1e-4;
const MAX_HALVINGS: usize = 14;
/// Stop once every residual is this small.
const TOLERANCE: f64 = 1e-12;
/// A stalled iteration still counts as solved below this residual.
const ACCEPT: f64 = 1e-9;
/// Penalty rows are dropped once the residual is this small.
const PENALTY_OFF: f64 = 1e-6;
/// Parameters stay at least this far below −1.
const NU_MARGIN: f64 = 1e-9;
const START: f64 = -2.0;
const JITTER: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iters: 100, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub nu: Vec<f64>,
    /// `max_e |Θ_e − 2π|`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("expected {expected} initial parameters, got {found}")]
    InitLength { expected: usize, found: usize },
    #[error("initial parameters are not realized")]
    BadStart,
    #[error("no progress after {iterations} iterations, residual {residual:e}")]
    Stalled { iterations: usize, residual: f64, nu: Vec<f64> },
    #[error("iteration cap {iterations} reached, residual {residual:e}")]
    IterationCap { iterations: usize, residual: f64, nu: Vec<f64> },
}

impl SolveError {
    /// Best parameters reached before giving up.
    pub fn best(&self) -> Option<(&[f64], f64)> {
        match self {
            SolveError::Stalled { nu, residual, .. } | SolveError::IterationCap { nu, residual, .. } => {
                Some((nu, *residual))
            }
            _ => None,
        }
    }
}

struct Eval {
    data: Vec<GramData<f64>>,
    theta_sums: Vec<f64>,
}

fn evaluate(t: &Triangulation, nu: &[f64]) -> Option<Eval> {
    if nu.iter().any(|&v| !(v < -1.0 - NU_MARGIN)) {
        return None;
    }
    let data = geometry::gram_data(t, nu).ok()?;
    if data.iter().any(|d| geometry::realization_check(&d.g, &d.c).is_err()) {
        return None;
    }
    let theta_sums = geometry::angle_sums_from(t, &data);
    Some(Eval { data, theta_sums })
}

/// `max_e |Θ_e − 2π|`, or `None` if some simplex is not realized.
pub fn residual(t: &Triangulation, nu: &[f64]) -> Option<f64> {
    let e = evaluate(t, nu)?;
    Some(max_abs_residual(&e.theta_sums))
}

fn max_abs_residual(sums: &[f64]) -> f64 {
    sums.iter()
        .map(|s| (s - std::f64::consts::TAU).abs())
        .fold(0.0, f64::max)
}

/// Residual rows: the edge equations, then one row per large angle.
fn residual_rows(e: &Eval, penalty: bool) -> Vec<f64> {
    let mut rows: Vec<f64> = e.theta_sums.iter().map(|s| s - std::f64::consts::TAU).collect();
    if penalty {
        for d in &e.data {
            for i in 0..4 {
                for j in i + 1..4 {
                    if d.theta[i][j] > ANGLE_CAP {
                        rows.push(d.theta[i][j] - ANGLE_TARGET);
                    }
                }
            }
        }
    }
    rows
}

fn jacobian_rows(t: &Triangulation, nu: &[f64], e: &Eval, penalty: bool) -> Option<DMatrix<f64>> {
    let m = t.num_edges();
    let full = geometry::jacobian(t, nu).ok()?;
    let mut rows: Vec<Vec<f64>> = full;
    if penalty {
        for (tet, d) in e.data.iter().enumerate() {
            for i in 0..4 {
                for j in i + 1..4 {
                    if d.theta[i][j] > ANGLE_CAP {
                        let grad = geometry::dihedral_angle_gradient(&d.g, &d.c, i, j)?;
                        let mut row = vec![0.0; m];
                        for (f, g) in grad.iter().enumerate() {
                            row[t.edge_class_of(tet, f)] += g;
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    Some(DMatrix::from_fn(rows.len(), m, |r, c| rows[r][c]))
}

fn pseudo_inverse_solve(j: DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = j.svd(true, true);
    let u = svd.u.as_ref()?;
    let v_t = svd.v_t.as_ref()?;
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if !(smax > 0.0) {
        return None;
    }
    let ut_r = u.transpose() * r;
    let scaled = DVector::from_fn(ut_r.len(), |i, _| {
        let s = svd.singular_values[i];
        if s > RCOND * smax {
            ut_r[i] / s
        } else {
            0.0
        }
    });
    Some(v_t.transpose() * scaled)
}

fn sum_squares(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Gauss–Newton iteration with pseudo-inverse steps and step halving on the
/// residual `Θ − 2π`.
///
/// Without `init` the start is `ν = −2` on every edge plus a small
/// perturbation drawn from `seed`. No claim is made about the output; the
/// certification steps decide.
pub fn bootstrap_solve(
    t: &Triangulation,
    init: Option<&[f64]>,
    opts: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let m = t.num_edges();
    let mut nu = match init {
        Some(v) if v.len() != m => {
            return Err(SolveError::InitLength {
                expected: m,
                found: v.len(),
            })
        }
        Some(v) => v.to_vec(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..m).map(|_| START + rng.random_range(-JITTER..JITTER)).collect()
        }
    };
    let mut eval = evaluate(t, &nu).ok_or(SolveError::BadStart)?;
    let mut iterations = 0;
    loop {
        let res = max_abs_residual(&eval.theta_sums);
        if res < TOLERANCE {
            return Ok(SolveReport {
                nu,
                residual: res,
                iterations,
            });
        }
        if iterations >= opts.max_iters {
            return Err(SolveError::IterationCap {
                iterations,
                residual: res,
                nu,
            });
        }
        iterations += 1;
        let penalty = res > PENALTY_OFF;
        let rows = residual_rows(&eval, penalty);
        let norm = sum_squares(&rows);
        let stalled = |nu: Vec<f64>| {
            if res < ACCEPT {
                Ok(SolveReport {
                    nu,
                    residual: res,
                    iterations,
                })
            } else {
                Err(SolveError::Stalled {
                    iterations,
                    residual: res,
                    nu,
                })
            }
        };
        let Some(j) = jacobian_rows(t, &nu, &eval, penalty) else {
            return stalled(nu);
        };
        let Some(step) = pseudo_inverse_solve(j, &DVector::from_vec(rows)) else {
            return stalled(nu);
        };
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = nu.iter().zip(step.iter()).map(|(v, s)| v - scale * s).collect();
            if let Some(e) = evaluate(t, &cand) {
                if sum_squares(&residual_rows(&e, penalty)) < norm {
                    accepted = Some((cand, e));
                    break;
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((cand, e)) => {
                nu = cand;
                eval = e;
            }
            None => return stalled(nu),
        }
    }
}
