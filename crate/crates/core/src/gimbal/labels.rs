//! The natural cocycle on the doubly truncated simplices.
//!
//! For a flag `σ` the γ-edge at `σ` turns by the dihedral angle at the tet
//! edge `σ(0)σ(1)`, which is `θ_{σ(2)σ(3)}`, and the β-edge at `σ` turns by
//! the face angle `η_{σ(0),σ(1)σ(2)}`. Even flags carry the negated dihedral
//! angle, so that reversing a γ-edge inverts its label; β-labels are
//! involutions.

use super::mat::{Cx, Mat2, Mat3};
use crate::geometry::{self, GeometryError, GramData};
use crate::scalar::Scalar;
use crate::triangulation::{EdgeKind, Flag, Perm4, TEdge, Triangulation};

/// z-rotation `R_ω`.
pub fn rot_z<T: Scalar>(w: T) -> Mat3<T> {
    let (c, s) = (w.cosine(), w.sine());
    let (o, l) = (T::zero(), T::one());
    Mat3([[c, -s, o], [s, c, o], [o, o, l]])
}

/// `dR_ω/dω`.
pub fn rot_z_derivative<T: Scalar>(w: T) -> Mat3<T> {
    let (c, s) = (w.cosine(), w.sine());
    let o = T::zero();
    Mat3([[-s, -c, o], [c, -s, o], [o, o, o]])
}

/// The SO(3) β-label for face angle `η`.
pub fn so3_beta<T: Scalar>(eta: T) -> Mat3<T> {
    let (c, s) = (eta.cosine(), eta.sine());
    let (o, l) = (T::zero(), T::one());
    Mat3([[-c, o, s], [o, -l, o], [s, o, c]])
}

/// The PGL(2,ℂ) α-label for an edge with parameter `v`.
pub fn pgl2_alpha<T: Scalar>(v: T) -> Option<Mat2<T>> {
    let r = (v.square() - T::one()).try_sqrt()? - v;
    Some(Mat2([[Cx::zero(), Cx::real(r)], [Cx::one(), Cx::zero()]]))
}

/// The PGL(2,ℂ) β-label for face angle `η`.
pub fn pgl2_beta<T: Scalar>(eta: T) -> Mat2<T> {
    let h = T::from_f64(0.5) * eta;
    let (c, s) = (h.cosine(), h.sine());
    Mat2([[Cx::real(-c), Cx::real(s)], [Cx::real(s), Cx::real(c)]])
}

/// The PGL(2,ℂ) γ-label `diag(e^{iθ}, 1)`.
pub fn pgl2_gamma<T: Scalar>(theta: T) -> Mat2<T> {
    Mat2([[Cx::new(theta.cosine(), theta.sine()), Cx::zero()], [Cx::zero(), Cx::one()]])
}

/// Angles and SO(3) labels of every tetrahedron at one parameter point or box.
#[derive(Debug, Clone)]
pub struct CocycleLabels<T> {
    data: Vec<GramData<T>>,
    nu: Vec<T>,
    /// Indexed by tet and permutation rank.
    theta: Vec<[T; 24]>,
    eta: Vec<[T; 24]>,
    beta: Vec<[Mat3<T>; 24]>,
    gamma: Vec<[Mat3<T>; 24]>,
}

impl<T: Scalar> CocycleLabels<T> {
    pub fn new(t: &Triangulation, nu: &[T]) -> Result<Self, GeometryError> {
        let data = geometry::gram_data(t, nu)?;
        let perms: Vec<Perm4> = Perm4::all().collect();
        let mut theta = Vec::with_capacity(t.num_tets());
        let mut eta = Vec::with_capacity(t.num_tets());
        for (tet, d) in data.iter().enumerate() {
            let mut th = [T::zero(); 24];
            let mut et = [T::zero(); 24];
            for (k, p) in perms.iter().enumerate() {
                let (a, b, c, e) = (p.apply(0), p.apply(1), p.apply(2), p.apply(3));
                th[k] = if p.is_odd() { d.theta[c][e] } else { -d.theta[c][e] };
                et[k] = d.vertex_angle(tet, a, b, c)?;
            }
            theta.push(th);
            eta.push(et);
        }
        let beta = eta.iter().map(|et| std::array::from_fn(|k| so3_beta(et[k]))).collect();
        let gamma = theta.iter().map(|th| std::array::from_fn(|k| rot_z(th[k]))).collect();
        Ok(CocycleLabels {
            data,
            nu: nu.to_vec(),
            theta,
            eta,
            beta,
            gamma,
        })
    }

    pub fn gram_data(&self) -> &[GramData<T>] {
        &self.data
    }

    /// Signed dihedral angle carried by the γ-edge at `f`.
    pub fn theta(&self, f: Flag) -> T {
        self.theta[f.tet][f.perm.index()]
    }

    /// Face angle carried by the β-edge at `f`.
    pub fn eta(&self, f: Flag) -> T {
        self.eta[f.tet][f.perm.index()]
    }

    /// SO(3) label of a β- or γ-edge; `None` for α-edges.
    pub fn so3(&self, e: TEdge) -> Option<Mat3<T>> {
        let k = e.start.perm.index();
        match e.kind {
            EdgeKind::Beta => Some(self.beta[e.start.tet][k]),
            EdgeKind::Gamma => Some(self.gamma[e.start.tet][k]),
            EdgeKind::Alpha => None,
        }
    }

    /// PGL(2,ℂ) label of any edge.
    pub fn pgl2(&self, t: &Triangulation, e: TEdge) -> Option<Mat2<T>> {
        match e.kind {
            EdgeKind::Alpha => pgl2_alpha(self.nu[t.edge_class_of(e.start.tet, t.flag_local_edge(e.start))]),
            EdgeKind::Beta => Some(pgl2_beta(self.eta(e.start))),
            EdgeKind::Gamma => Some(pgl2_gamma(self.theta(e.start))),
        }
    }

    /// SO(3) product along a path; the first edge is applied first.
    pub fn so3_path(&self, path: &[TEdge]) -> Option<Mat3<T>> {
        path.iter().try_fold(Mat3::identity(), |acc, e| Some(self.so3(*e)? * acc))
    }

    /// PGL(2,ℂ) product along a path; the first edge is applied first.
    pub fn pgl2_path(&self, t: &Triangulation, path: &[TEdge]) -> Option<Mat2<T>> {
        path.iter().try_fold(Mat2::identity(), |acc, e| Some(self.pgl2(t, *e)? * acc))
    }
}
