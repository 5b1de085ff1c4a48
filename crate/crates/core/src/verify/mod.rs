//! Steps I–IV: approximate solution, full-rank subsystem selection, interval
//! certification of the kept edge equations, and the realization and angle
//! checks on the certified box.

mod krawczyk;
mod pivot;
mod solve;

pub use krawczyk::{
    certify_subsystem, check_realization_and_angles, krawczyk_operator, refine, AngleCheck, AngleCheckError,
    CertifiedBox, CertifyError, CertifyMethod, CertifyOptions,
};
pub use pivot::{make_partition, select_submatrix, Partition, PartitionError, PivotError};
pub use solve::{bootstrap_solve, residual, SolveError, SolveOptions, SolveReport};
