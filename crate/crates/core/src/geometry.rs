//! Per-simplex hyperbolic geometry from edge parameters `ν_e = −cosh(l_e)`.
//!
//! Every function is generic over [`Scalar`], so the solver runs on `f64` and
//! the certification runs the identical formulas on intervals.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::triangulation::{opposite_edge, Triangulation, LOCAL_EDGES};

pub type Mat4<T> = [[T; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("tet {tet}: dihedral angle θ_{i}{j} undefined")]
    DihedralAngle { tet: usize, i: usize, j: usize },
    #[error("tet {tet}: vertex angle at {i} undefined")]
    VertexAngle { tet: usize, i: usize },
    #[error("tet {tet}: angle derivative undefined at θ_{i}{j}")]
    Derivative { tet: usize, i: usize, j: usize },
}

/// Why a Gram matrix fails to describe a hyperbolic simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RealizationFailure {
    #[error("characteristic polynomial coefficient a{0} has the wrong sign")]
    CharPoly(usize),
    #[error("cofactor c_{0}{0} is not negative")]
    DiagonalCofactor(usize),
    #[error("c_{0}{1}² < c_{0}{0}·c_{1}{1} fails")]
    OffDiagonal(usize, usize),
}

/// Edge parameters `ν_e` from lengths.
pub fn params_from_lengths(lengths: &[f64]) -> Vec<f64> {
    lengths.iter().map(|l| -l.cosh()).collect()
}

/// Lengths `l_e = acosh(−ν_e)` from edge parameters.
pub fn lengths_from_params(nu: &[f64]) -> Vec<f64> {
    nu.iter().map(|v| (-v).acosh()).collect()
}

/// Vertex Gram matrix of tetrahedron `tet`.
pub fn gram_matrix<T: Scalar>(t: &Triangulation, nu: &[T], tet: usize) -> Mat4<T> {
    let mut g = [[-T::one(); 4]; 4];
    for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
        let v = nu[t.edge_class_of(tet, e)];
        g[a][b] = v;
        g[b][a] = v;
    }
    g
}

fn others(i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for x in 0..4 {
        if x != i {
            out[k] = x;
            k += 1;
        }
    }
    out
}

fn sign<T: Scalar>(x: T, odd: bool) -> T {
    if odd {
        -x
    } else {
        x
    }
}

/// Cofactor matrix `c_ij = (−1)^{i+j} det(G_ij)`.
pub fn cofactors<T: Scalar>(g: &Mat4<T>) -> Mat4<T> {
    let mut c = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let (r, s) = (others(i), others(j));
            let minor = std::array::from_fn(|a| std::array::from_fn(|b| g[r[a]][s[b]]));
            c[i][j] = sign(T::det3(minor), (i + j) % 2 == 1);
        }
    }
    c
}

/// Dihedral angle `θ_ij = arccos(c_ij / √(c_ii c_jj))` between faces `i` and `j`.
pub fn dihedral_angle<T: Scalar>(c: &Mat4<T>, i: usize, j: usize) -> Option<T> {
    let p = c[i][i] * c[j][j];
    if !p.surely_pos() {
        return None;
    }
    c[i][j].try_div(p.try_sqrt()?)?.try_acos()
}

/// Vertex angle `η_{i,jk}` of face-triangle corner `i` between edges `ij` and `ik`.
pub fn vertex_angle<T: Scalar>(g: &Mat4<T>, i: usize, j: usize, k: usize) -> Option<T> {
    let (vij, vik, vjk) = (g[i][j], g[i][k], g[j][k]);
    let d = (vij.square() - T::one()) * (vik.square() - T::one());
    if !d.surely_pos() {
        return None;
    }
    (vij * vik + vjk).try_div(d.try_sqrt()?)?.try_acos()
}

/// Coefficients `(a0, a1, a2)` of `det(x·Id − G) = x⁴ + 4x³ + a2·x² + a1·x + a0`.
pub fn char_poly_coefficients<T: Scalar>(g: &Mat4<T>, c: &Mat4<T>) -> (T, T, T) {
    let mut a2 = T::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            a2 = a2 + (g[i][i] * g[j][j] - g[i][j] * g[j][i]);
        }
    }
    let a1 = -(c[0][0] + c[1][1] + c[2][2] + c[3][3]);
    let a0 = (0..4).fold(T::zero(), |acc, j| acc + g[0][j] * c[0][j]);
    (a0, a1, a2)
}

/// Checks that `G` is the Gram matrix of a non-degenerate hyperbolic simplex.
///
/// The sign pattern of the characteristic polynomial forces one negative and
/// three positive eigenvalues, the cofactor conditions make every angle
/// well defined.
pub fn realization_check<T: Scalar>(g: &Mat4<T>, c: &Mat4<T>) -> Result<(), RealizationFailure> {
    let (a0, a1, a2) = char_poly_coefficients(g, c);
    if !a2.surely_neg() {
        return Err(RealizationFailure::CharPoly(2));
    }
    if !a1.surely_pos() {
        return Err(RealizationFailure::CharPoly(1));
    }
    if !a0.surely_neg() {
        return Err(RealizationFailure::CharPoly(0));
    }
    for i in 0..4 {
        if !c[i][i].surely_neg() {
            return Err(RealizationFailure::DiagonalCofactor(i));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !c[i][j].square().surely_lt(c[i][i] * c[j][j]) {
                return Err(RealizationFailure::OffDiagonal(i, j));
            }
        }
    }
    Ok(())
}

/// Gram matrix, cofactors and dihedral angles of one tetrahedron.
#[derive(Debug, Clone, Copy)]
pub struct GramData<T> {
    pub g: Mat4<T>,
    pub c: Mat4<T>,
    /// `theta[i][j]` for `i != j`; the diagonal is zero.
    pub theta: Mat4<T>,
}

impl<T: Scalar> GramData<T> {
    pub fn new(t: &Triangulation, nu: &[T], tet: usize) -> Result<Self, GeometryError> {
        let g = gram_matrix(t, nu, tet);
        let c = cofactors(&g);
        let mut theta = [[T::zero(); 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let a = dihedral_angle(&c, i, j).ok_or(GeometryError::DihedralAngle { tet, i, j })?;
                theta[i][j] = a;
                theta[j][i] = a;
            }
        }
        Ok(GramData { g, c, theta })
    }

    /// Dihedral angle at local edge `e`, which separates the faces opposite
    /// the endpoints of the complementary edge.
    pub fn angle_at_edge(&self, e: usize) -> T {
        let (i, j) = LOCAL_EDGES[opposite_edge(e)];
        self.theta[i][j]
    }

    pub fn vertex_angle(&self, tet: usize, i: usize, j: usize, k: usize) -> Result<T, GeometryError> {
        vertex_angle(&self.g, i, j, k).ok_or(GeometryError::VertexAngle { tet, i })
    }
}

/// Gram data for every tetrahedron.
pub fn gram_data<T: Scalar>(t: &Triangulation, nu: &[T]) -> Result<Vec<GramData<T>>, GeometryError> {
    (0..t.num_tets()).map(|tet| GramData::new(t, nu, tet)).collect()
}

/// Angle sums `Θ_e` from precomputed Gram data.
pub fn angle_sums_from<T: Scalar>(t: &Triangulation, data: &[GramData<T>]) -> Vec<T> {
    let mut sums = vec![T::zero(); t.num_edges()];
    for (tet, d) in data.iter().enumerate() {
        for e in 0..6 {
            let class = t.edge_class_of(tet, e);
            sums[class] = sums[class] + d.angle_at_edge(e);
        }
    }
    sums
}

/// Angle sums `Θ_e` around every edge class.
pub fn angle_sums<T: Scalar>(t: &Triangulation, nu: &[T]) -> Result<Vec<T>, GeometryError> {
    Ok(angle_sums_from(t, &gram_data(t, nu)?))
}

fn det2<T: Scalar>(g: &Mat4<T>, rows: [usize; 2], cols: [usize; 2]) -> T {
    g[rows[0]][cols[0]] * g[rows[1]][cols[1]] - g[rows[0]][cols[1]] * g[rows[1]][cols[0]]
}

fn complement2(a: usize, b: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut k = 0;
    for x in 0..4 {
        if x != a && x != b {
            out[k] = x;
            k += 1;
        }
    }
    out
}

/// Derivative of `c_kl` by the single matrix entry `G[m][n]`, treating all
/// entries as independent.
fn cofactor_entry_derivative<T: Scalar>(g: &Mat4<T>, k: usize, l: usize, m: usize, n: usize) -> T {
    if m == k || n == l {
        return T::zero();
    }
    let mi = if m < k { m } else { m - 1 };
    let ni = if n < l { n } else { n - 1 };
    let minor = det2(g, complement2(k, m), complement2(l, n));
    sign(minor, (k + l + mi + ni) % 2 == 1)
}

/// Derivative of `c_kl` by the symmetric parameter `v_mn = v_nm`.
pub fn cofactor_derivative<T: Scalar>(g: &Mat4<T>, k: usize, l: usize, m: usize, n: usize) -> T {
    cofactor_entry_derivative(g, k, l, m, n) + cofactor_entry_derivative(g, k, l, n, m)
}

/// Derivatives of `θ_ij` by the six parameters of the tetrahedron, in
/// [`LOCAL_EDGES`] order.
pub fn dihedral_angle_gradient<T: Scalar>(g: &Mat4<T>, c: &Mat4<T>, i: usize, j: usize) -> Option<[T; 6]> {
    let (cii, cjj, cij) = (c[i][i], c[j][j], c[i][j]);
    let disc = cii * cjj - cij.square();
    if !disc.surely_pos() {
        return None;
    }
    let scale = -(T::one().try_div(disc.try_sqrt()?)?);
    let half = T::from_f64(0.5);
    let fi = (half * cij).try_div(cii)?;
    let fj = (half * cij).try_div(cjj)?;
    let mut out = [T::zero(); 6];
    for (slot, &(m, n)) in out.iter_mut().zip(LOCAL_EDGES.iter()) {
        let d = cofactor_derivative(g, i, j, m, n)
            - fi * cofactor_derivative(g, i, i, m, n)
            - fj * cofactor_derivative(g, j, j, m, n);
        *slot = scale * d;
    }
    Some(out)
}

/// Dense Jacobian `∂Θ_row / ∂ν_col` restricted to the given rows and columns.
pub fn jacobian_submatrix<T: Scalar>(
    t: &Triangulation,
    nu: &[T],
    rows: &[usize],
    cols: &[usize],
) -> Result<Vec<Vec<T>>, GeometryError> {
    let m = t.num_edges();
    let mut row_pos = vec![usize::MAX; m];
    for (p, &r) in rows.iter().enumerate() {
        row_pos[r] = p;
    }
    let mut col_pos = vec![usize::MAX; m];
    for (p, &c) in cols.iter().enumerate() {
        col_pos[c] = p;
    }
    let mut out = vec![vec![T::zero(); cols.len()]; rows.len()];
    for tet in 0..t.num_tets() {
        let g = gram_matrix(t, nu, tet);
        let c = cofactors(&g);
        for e in 0..6 {
            let r = row_pos[t.edge_class_of(tet, e)];
            if r == usize::MAX {
                continue;
            }
            let (i, j) = LOCAL_EDGES[opposite_edge(e)];
            let grad = dihedral_angle_gradient(&g, &c, i, j).ok_or(GeometryError::Derivative { tet, i, j })?;
            for (f, d) in grad.into_iter().enumerate() {
                let col = col_pos[t.edge_class_of(tet, f)];
                if col != usize::MAX {
                    out[r][col] = out[r][col] + d;
                }
            }
        }
    }
    Ok(out)
}

/// Full `m × m` Jacobian with rows indexed by angle sums and columns by parameters.
pub fn jacobian<T: Scalar>(t: &Triangulation, nu: &[T]) -> Result<Vec<Vec<T>>, GeometryError> {
    let all: Vec<usize> = (0..t.num_edges()).collect();
    jacobian_submatrix(t, nu, &all, &all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn regular(v: f64) -> Mat4<f64> {
        let mut g = [[v; 4]; 4];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -1.0;
        }
        g
    }

    #[test]
    fn regular_cofactors_match_closed_form() {
        let v = -1f64.cosh();
        let c = cofactors(&regular(v));
        assert!((c[0][0] - (v + 1.0).powi(2) * (2.0 * v - 1.0)).abs() < 1e-12);
        assert!((c[0][1] + v * (v + 1.0).powi(2)).abs() < 1e-12);
        assert!((c[0][0] + 1.20524).abs() < 1e-4);
        assert!((c[0][1] - 0.45513).abs() < 1e-4);
        let theta = dihedral_angle(&c, 0, 1).unwrap();
        assert!((theta - 1.1828).abs() < 1e-3);
    }

    #[test]
    fn regular_is_realized() {
        for v in [-1.0001, -1.5, -3.0, -40.0] {
            let g = regular(v);
            assert_eq!(realization_check(&g, &cofactors(&g)), Ok(()));
        }
    }

    #[test]
    fn non_hyperbolic_gram_fails() {
        let g = regular(-0.5);
        assert!(realization_check(&g, &cofactors(&g)).is_err());
    }

    #[test]
    fn straddling_interval_fails_conservatively() {
        // a0 = det G = (−1 − v)³(3v − 1) changes sign at v = −1.
        let v = Interval::new(-1.01, -0.99).unwrap();
        let mut g = [[v; 4]; 4];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -Interval::ONE;
        }
        let c = cofactors(&g);
        let (a0, _, _) = char_poly_coefficients(&g, &c);
        assert!(a0.contains(0.0));
        assert!(realization_check(&g, &c).is_err());
    }

    #[test]
    fn cofactor_symmetry() {
        let mut g = regular(-2.0);
        let vals = [-1.3, -2.1, -1.7, -3.2, -1.9, -2.4];
        for (k, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            g[a][b] = vals[k];
            g[b][a] = vals[k];
        }
        let c = cofactors(&g);
        for i in 0..4 {
            for j in 0..4 {
                assert!((c[i][j] - c[j][i]).abs() < 1e-12);
            }
        }
        let e1 = vertex_angle(&g, 0, 1, 2).unwrap();
        let e2 = vertex_angle(&g, 0, 2, 1).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn gradient_matches_finite_differences_for_one_simplex() {
        let vals = [-1.3, -2.1, -1.7, -3.2, -1.9, -2.4];
        let build = |vals: &[f64; 6]| {
            let mut g = regular(-2.0);
            for (k, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
                g[a][b] = vals[k];
                g[b][a] = vals[k];
            }
            g
        };
        let g = build(&vals);
        let c = cofactors(&g);
        for (i, j) in LOCAL_EDGES {
            let grad = dihedral_angle_gradient(&g, &c, i, j).unwrap();
            for k in 0..6 {
                let h = 1e-6;
                let mut p = vals;
                let mut q = vals;
                p[k] += h;
                q[k] -= h;
                let tp = dihedral_angle(&cofactors(&build(&p)), i, j).unwrap();
                let tq = dihedral_angle(&cofactors(&build(&q)), i, j).unwrap();
                let fd = (tp - tq) / (2.0 * h);
                assert!((fd - grad[k]).abs() < 1e-6 * grad[k].abs().max(1.0), "{i}{j} {k}");
            }
        }
    }
}
