//! Interval certification of the kept edge equations (Step II) and the
//! realization and angle checks on the resulting box (Steps III–IV).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Partition;
use crate::geometry::{self, GeometryError, RealizationFailure};
use crate::interval::{Interval, IntervalMatrix};
use crate::triangulation::Triangulation;

/// Smallest starting half-width of the inflation loop.
const MIN_RADIUS: f64 = 1e-14;
/// Starting half-width as a multiple of the residual.
const RESIDUAL_FACTOR: f64 = 10.0;
const GROWTH: f64 = 4.0;
const MAX_ROUNDS: usize = 20;
/// Rounds of `X ← K(X) ∩ X` after containment.
const TIGHTEN_ROUNDS: usize = 8;
const REFINE_ITERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifyMethod {
    Krawczyk,
    IntervalNewton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub method: CertifyMethod,
    /// Run float Newton on the kept equations first.
    pub refine: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            method: CertifyMethod::Krawczyk,
            refine: false,
        }
    }
}

/// Parameter enclosures proven to contain a solution of the kept equations.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedBox {
    /// One enclosure per edge; point intervals on the fixed edges.
    pub nu: Vec<Interval>,
    /// The float center used for the certification.
    pub center: Vec<f64>,
    /// Inflation rounds until containment.
    pub rounds: usize,
    pub method: CertifyMethod,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("expected {expected} parameters, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("the kept subsystem has no equations")]
    Empty,
    #[error("midpoint Jacobian of the kept subsystem is singular")]
    Singular,
    #[error("geometry undefined on the box in round {round}: {source}")]
    Evaluation { round: usize, source: GeometryError },
    #[error("zero in a preconditioned diagonal entry in round {round}")]
    Pivot { round: usize },
    #[error("no containment after {rounds} inflation rounds")]
    NoContainment { rounds: usize },
}

/// `K(x₀, X) = x₀ − C·f(x₀) + (Id − C·J(X))·(X − x₀)`.
///
/// `fx0` encloses `f(x₀)` and `jx` encloses the Jacobian over `X`.
pub fn krawczyk_operator(
    x0: &[f64],
    x: &[Interval],
    fx0: &[Interval],
    jx: &IntervalMatrix,
    c: &DMatrix<f64>,
) -> Vec<Interval> {
    let n = x0.len();
    let ci = IntervalMatrix::from_f64(c);
    let cf = ci.mul_vec(fx0).expect("conformable");
    let cj = ci.mat_mul(jx).expect("conformable");
    let a = IntervalMatrix::identity(n).sub(&cj).expect("conformable");
    let d: Vec<Interval> = x.iter().zip(x0).map(|(xi, &x0i)| *xi - Interval::point(x0i)).collect();
    let ad = a.mul_vec(&d).expect("conformable");
    (0..n).map(|i| Interval::point(x0[i]) - cf[i] + ad[i]).collect()
}

/// One preconditioned interval Gauss–Seidel sweep. Returns the new box and
/// whether every component landed in the interior of `x`.
fn gauss_seidel(
    x0: &[f64],
    x: &[Interval],
    fx0: &[Interval],
    jx: &IntervalMatrix,
    c: &DMatrix<f64>,
) -> Option<(Vec<Interval>, bool)> {
    let n = x0.len();
    let ci = IntervalMatrix::from_f64(c);
    let b: Vec<Interval> = ci.mul_vec(fx0).expect("conformable").into_iter().map(|v| -v).collect();
    let a = ci.mat_mul(jx).expect("conformable");
    let mut d: Vec<Interval> = x.iter().zip(x0).map(|(xi, &x0i)| *xi - Interval::point(x0i)).collect();
    let mut inside = true;
    let mut out = x.to_vec();
    for i in 0..n {
        if a[(i, i)].contains_zero() {
            return None;
        }
        let mut acc = b[i];
        for j in (0..n).filter(|&j| j != i) {
            acc = acc - a[(i, j)] * d[j];
        }
        let ni = Interval::point(x0[i]) + acc / a[(i, i)];
        inside &= x[i].interior_encloses(ni);
        let narrowed = ni.intersection(x[i])?;
        out[i] = narrowed;
        d[i] = narrowed - Interval::point(x0[i]);
    }
    Some((out, inside))
}

fn with_vars(part: &Partition, base: &[f64], vars: &[Interval]) -> Vec<Interval> {
    let mut nu: Vec<Interval> = base.iter().map(|&v| Interval::point(v)).collect();
    for (&e, &v) in part.var.iter().zip(vars) {
        nu[e] = v;
    }
    nu
}

fn kept_residual(
    t: &Triangulation,
    part: &Partition,
    nu: &[Interval],
) -> Result<Vec<Interval>, GeometryError> {
    let sums = geometry::angle_sums(t, nu)?;
    Ok(part.eq.iter().map(|&e| sums[e] - Interval::TWO_PI).collect())
}

fn float_kept_residual(t: &Triangulation, part: &Partition, nu: &[f64]) -> Option<Vec<f64>> {
    let sums = geometry::angle_sums(t, nu).ok()?;
    Some(part.eq.iter().map(|&e| sums[e] - std::f64::consts::TAU).collect())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn float_kept_jacobian(t: &Triangulation, part: &Partition, nu: &[f64]) -> Option<DMatrix<f64>> {
    let j = geometry::jacobian_submatrix(t, nu, &part.eq, &part.var).ok()?;
    Some(DMatrix::from_fn(part.eq.len(), part.var.len(), |r, c| j[r][c]))
}

/// Float Newton on the kept equations over the varied parameters.
///
/// Iterates while the kept residual strictly decreases and returns the best
/// point; the input is returned unchanged if no step helps.
pub fn refine(t: &Triangulation, part: &Partition, nu0: &[f64]) -> Vec<f64> {
    let mut best = nu0.to_vec();
    let Some(mut best_res) = float_kept_residual(t, part, &best).map(|r| max_abs(&r)) else {
        return best;
    };
    for _ in 0..REFINE_ITERS {
        let (Some(f), Some(j)) = (float_kept_residual(t, part, &best), float_kept_jacobian(t, part, &best)) else {
            break;
        };
        let Some(step) = j.lu().solve(&DVector::from_vec(f)) else {
            break;
        };
        let mut cand = best.clone();
        for (k, &e) in part.var.iter().enumerate() {
            cand[e] -= step[k];
        }
        match float_kept_residual(t, part, &cand).map(|r| max_abs(&r)) {
            Some(r) if r < best_res && cand.iter().all(|&v| v < -1.0) => {
                best = cand;
                best_res = r;
            }
            _ => break,
        }
    }
    best
}

/// Proves that the kept equations `Θ_e = 2π, e ∈ eq` have a unique solution
/// in a box over the varied parameters, with the fixed ones held at `nu0`.
pub fn certify_subsystem(
    t: &Triangulation,
    nu0: &[f64],
    part: &Partition,
    opts: &CertifyOptions,
) -> Result<CertifiedBox, CertifyError> {
    let m = t.num_edges();
    if nu0.len() != m {
        return Err(CertifyError::Dimension {
            expected: m,
            found: nu0.len(),
        });
    }
    if part.var.is_empty() {
        return Err(CertifyError::Empty);
    }
    let center = if opts.refine { refine(t, part, nu0) } else { nu0.to_vec() };
    let x0: Vec<f64> = part.var.iter().map(|&e| center[e]).collect();
    let c = float_kept_jacobian(t, part, &center)
        .and_then(|j| j.try_inverse())
        .filter(|c| c.iter().all(|x| x.is_finite()))
        .ok_or(CertifyError::Singular)?;
    let fx0 = kept_residual(t, part, &with_vars(part, &center, &x0.iter().map(|&v| Interval::point(v)).collect::<Vec<_>>()))
        .map_err(|source| CertifyError::Evaluation { round: 0, source })?;
    let res = fx0.iter().fold(0.0, |a: f64, v| a.max(v.mag()));
    let jac = |x: &[Interval], round: usize| -> Result<IntervalMatrix, CertifyError> {
        let nu = with_vars(part, &center, x);
        let j = geometry::jacobian_submatrix(t, &nu, &part.eq, &part.var)
            .map_err(|source| CertifyError::Evaluation { round, source })?;
        Ok(IntervalMatrix::from_fn(part.eq.len(), part.var.len(), |r, c| j[r][c]))
    };
    let step = |x: &[Interval], round: usize| -> Result<(Vec<Interval>, bool), CertifyError> {
        let jx = jac(x, round)?;
        match opts.method {
            CertifyMethod::Krawczyk => {
                let k = krawczyk_operator(&x0, x, &fx0, &jx, &c);
                let inside = x.iter().zip(&k).all(|(xi, ki)| xi.interior_encloses(*ki));
                Ok((k, inside))
            }
            CertifyMethod::IntervalNewton => {
                gauss_seidel(&x0, x, &fx0, &jx, &c).ok_or(CertifyError::Pivot { round })
            }
        }
    };
    let mut radius = MIN_RADIUS.max(RESIDUAL_FACTOR * res);
    for round in 1..=MAX_ROUNDS {
        let x: Vec<Interval> = x0.iter().map(|&v| Interval::around(v, radius)).collect();
        let (k, inside) = match step(&x, round) {
            Ok(v) => v,
            Err(CertifyError::Pivot { .. }) => {
                radius *= GROWTH;
                continue;
            }
            Err(e) => return Err(e),
        };
        if inside {
            // Every root in X lies in K(X), so intersecting keeps the proof valid.
            let mut cur: Vec<Interval> = k.iter().zip(&x).map(|(ki, xi)| ki.intersection(*xi).unwrap_or(*ki)).collect();
            for _ in 0..TIGHTEN_ROUNDS {
                let Ok((k, _)) = step(&cur, round) else { break };
                let next: Option<Vec<Interval>> = k.iter().zip(&cur).map(|(ki, xi)| ki.intersection(*xi)).collect();
                let Some(next) = next else { break };
                let old: f64 = cur.iter().map(|v| v.width()).sum();
                let new: f64 = next.iter().map(|v| v.width()).sum();
                cur = next;
                if !(new < old) {
                    break;
                }
            }
            return Ok(CertifiedBox {
                nu: with_vars(part, &center, &cur),
                center,
                rounds: round,
                method: opts.method,
            });
        }
        radius *= GROWTH;
    }
    Err(CertifyError::NoContainment { rounds: MAX_ROUNDS })
}

/// Interval angle sums on a certified box and realization of every simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleCheck {
    pub theta: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngleCheckError {
    #[error("parameter enclosure {edge} is not below -1")]
    Parameter { edge: usize },
    #[error("tet {tet} not realized: {reason}")]
    Realization { tet: usize, reason: RealizationFailure },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("angle sum of edge {edge} excludes 2π")]
    AngleSum { edge: usize },
}

/// Checks that every simplex is realized over the whole box and that every
/// angle sum enclosure contains `2π`.
pub fn check_realization_and_angles(t: &Triangulation, nu: &[Interval]) -> Result<AngleCheck, AngleCheckError> {
    if let Some(edge) = nu.iter().position(|v| !v.certainly_lt(-Interval::ONE)) {
        return Err(AngleCheckError::Parameter { edge });
    }
    let data = geometry::gram_data(t, nu)?;
    for (tet, d) in data.iter().enumerate() {
        geometry::realization_check(&d.g, &d.c).map_err(|reason| AngleCheckError::Realization { tet, reason })?;
    }
    let theta = geometry::angle_sums_from(t, &data);
    if let Some(edge) = theta.iter().position(|s| !s.is_finite() || !s.encloses(Interval::TWO_PI)) {
        return Err(AngleCheckError::AngleSum { edge });
    }
    Ok(AngleCheck { theta })
}
