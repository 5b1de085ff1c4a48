//! Step V: the SO(3) cocycle on the doubly truncated complex, gimbal loops
//! in the vertex links, and the gimbal-lock test that upgrades the
//! approximate edge equations to exact ones.

mod ball;
mod cells;
mod function;
mod labels;
mod loops;
mod mat;
mod probe;

pub use ball::Ball3;
pub use cells::{all_cells, cocycle_closure, prism_holonomy, Cell, CellClosure, CellKind};
pub use function::{
    gimbal_function, gimbal_function_enclosure, gimbal_jacobian, gimbal_jacobian_enclosure, gimbal_lock_check, gimbal_lock_check_with_loops, gimbal_matrix, principal_angle, GimbalCheck, GimbalError,
};
pub use labels::{pgl2_alpha, pgl2_beta, pgl2_gamma, rot_z, rot_z_derivative, so3_beta, CocycleLabels};
pub use loops::{
    build_gimbal_loop, build_gimbal_loops, removed_ends, validate_gimbal_loop, GimbalLoop, Letter, LetterParseError,
    LoopError,
};
pub use mat::{Cx, Mat2, Mat3};
pub use probe::{edge_fixed_points, probe_partitions, sigma_min, ProbeReport, ProbeRow};
