//! Rigorous verification of hyperbolic structures on finite triangulations of
//! closed oriented 3-manifolds.
//!
//! Given a triangulation and approximate edge lengths, the pipeline proves
//! the existence of edge parameters near the input such that every
//! tetrahedron is a genuine hyperbolic simplex and the dihedral angles around
//! every edge sum to exactly `2π`.

// Index loops mirror the matrix formulas; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod geometry;
pub mod gimbal;
pub mod interval;
pub mod pipeline;
pub mod scalar;
pub mod triangulation;
pub mod verify;

pub use interval::{Interval, IntervalMatrix};
pub use scalar::Scalar;
pub use triangulation::Triangulation;
pub use certificate::Certificate;
pub use pipeline::{run_pipeline, PipelineOutcome, Step, StepStatus};
