//! The five certification steps run in order; a step only runs when every
//! earlier one passed.

use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::geometry;
use crate::gimbal::{gimbal_lock_check, gimbal_lock_check_with_loops, GimbalCheck, GimbalLoop};
use crate::interval::Interval;
use crate::triangulation::Triangulation;
use crate::verify::{
    certify_subsystem, check_realization_and_angles, make_partition, select_submatrix, AngleCheckError,
    CertifiedBox, CertifyOptions, Partition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Step {
    /// Full-rank subsystem selection.
    I,
    /// Interval certification of the kept equations.
    II,
    /// Realization of every simplex on the box.
    III,
    /// Angle sum enclosures contain `2π`.
    IV,
    /// Gimbal lock avoided.
    V,
}

impl Step {
    pub const ALL: [Step; 5] = [Step::I, Step::II, Step::III, Step::IV, Step::V];

    pub fn description(self) -> &'static str {
        match self {
            Step::I => "select full-rank subsystem",
            Step::II => "certify kept edge equations",
            Step::III => "realize every simplex",
            Step::IV => "enclose 2π in every angle sum",
            Step::V => "avoid gimbal lock",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Step::I => "I",
            Step::II => "II",
            Step::III => "III",
            Step::IV => "IV",
            Step::V => "V",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum StepStatus {
    Passed,
    Failed(String),
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: Step,
    #[serde(flatten)]
    pub status: StepStatus,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub steps: Vec<StepReport>,
    pub partition: Option<Partition>,
    pub certified: Option<CertifiedBox>,
    pub theta: Option<Vec<Interval>>,
    pub gimbal: Option<GimbalCheck>,
    pub timings: Vec<(Step, Duration)>,
}

impl PipelineOutcome {
    fn new() -> Self {
        PipelineOutcome {
            steps: Step::ALL
                .iter()
                .map(|&step| StepReport {
                    step,
                    status: StepStatus::Skipped,
                })
                .collect(),
            partition: None,
            certified: None,
            theta: None,
            gimbal: None,
            timings: Vec::new(),
        }
    }

    fn set(&mut self, step: Step, status: StepStatus) {
        self.steps[step as usize].status = status;
    }

    pub fn verified(&self) -> bool {
        self.steps.iter().all(|s| s.status == StepStatus::Passed)
    }

    pub fn failed_step(&self) -> Option<Step> {
        self.steps
            .iter()
            .find(|s| matches!(s.status, StepStatus::Failed(_)))
            .map(|s| s.step)
    }
}

fn timed<R>(timings: &mut Vec<(Step, Duration)>, step: Step, f: impl FnOnce() -> R) -> R {
    let start = Instant::now();
    let r = f();
    timings.push((step, start.elapsed()));
    r
}

/// Step I: rows and columns of a full-rank `(m − 3o)`-square submatrix of
/// the Jacobian at the float point.
pub fn select_partition(t: &Triangulation, nu0: &[f64]) -> Result<Partition, String> {
    let (m, o) = (t.num_edges(), t.num_vertices());
    if 3 * o >= m {
        return Err(format!("{m} edges leave no equations beside the 3·{o} approximate ones"));
    }
    if nu0.len() != m {
        return Err(format!("expected {m} parameters, got {}", nu0.len()));
    }
    if let Some(e) = nu0.iter().position(|&v| !(v < -1.0)) {
        return Err(format!("parameter of edge {e} is not below -1"));
    }
    let j = geometry::jacobian(t, nu0).map_err(|e| e.to_string())?;
    let jm = DMatrix::from_fn(m, m, |r, c| j[r][c]);
    let (rows, cols) = select_submatrix(&jm, m - 3 * o).map_err(|e| e.to_string())?;
    make_partition(t, &rows, &cols).map_err(|e| e.to_string())
}

/// Steps III–V on a parameter box with a given partition. Gimbal loops are
/// built unless supplied; supplied loops must already be validated.
pub fn verify_box(
    t: &Triangulation,
    nu: &[Interval],
    part: &Partition,
    loops: Option<Vec<GimbalLoop>>,
    out: &mut PipelineOutcome,
) {
    let checked = timed(&mut out.timings, Step::III, || check_realization_and_angles(t, nu));
    let theta = match checked {
        Ok(a) => {
            out.set(Step::III, StepStatus::Passed);
            out.set(Step::IV, StepStatus::Passed);
            a.theta
        }
        Err(AngleCheckError::AngleSum { edge }) => {
            out.set(Step::III, StepStatus::Passed);
            out.set(Step::IV, StepStatus::Failed(format!("angle sum of edge {edge} excludes 2π")));
            return;
        }
        Err(e) => {
            out.set(Step::III, StepStatus::Failed(e.to_string()));
            return;
        }
    };
    let gimbal = timed(&mut out.timings, Step::V, || match loops {
        Some(l) => gimbal_lock_check_with_loops(t, nu, &theta, &part.sim, l),
        None => gimbal_lock_check(t, nu, &theta, &part.sim),
    });
    out.theta = Some(theta);
    match gimbal {
        Ok(g) => {
            let status = if !g.avoided {
                StepStatus::Failed("interval Jacobian of the gimbal function not proven invertible".into())
            } else if !g.at_two_pi.iter().all(|x| x.contains_zero()) {
                StepStatus::Failed("gimbal function at 2π excludes 0".into())
            } else {
                StepStatus::Passed
            };
            out.set(Step::V, status);
            out.gimbal = Some(g);
        }
        Err(e) => out.set(Step::V, StepStatus::Failed(e.to_string())),
    }
}

/// Runs Steps I–V from approximate parameters `nu0`.
pub fn run_pipeline(t: &Triangulation, nu0: &[f64], opts: &CertifyOptions) -> PipelineOutcome {
    let mut out = PipelineOutcome::new();
    let part = match timed(&mut out.timings, Step::I, || select_partition(t, nu0)) {
        Ok(p) => p,
        Err(e) => {
            out.set(Step::I, StepStatus::Failed(e));
            return out;
        }
    };
    out.set(Step::I, StepStatus::Passed);
    out.partition = Some(part.clone());
    let certified = match timed(&mut out.timings, Step::II, || certify_subsystem(t, nu0, &part, opts)) {
        Ok(b) => b,
        Err(e) => {
            out.set(Step::II, StepStatus::Failed(e.to_string()));
            return out;
        }
    };
    out.set(Step::II, StepStatus::Passed);
    let nu = certified.nu.clone();
    out.certified = Some(certified);
    verify_box(t, &nu, &part, None, &mut out);
    out
}

/// Outcome shell for re-verification, with Steps I and II taken as given.
pub fn outcome_for_recheck(part: Partition) -> PipelineOutcome {
    let mut out = PipelineOutcome::new();
    out.set(Step::I, StepStatus::Passed);
    out.set(Step::II, StepStatus::Passed);
    out.partition = Some(part);
    out
}
