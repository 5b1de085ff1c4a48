//! 2-cells of the doubly truncated complex and the holonomy checks on them.

use super::labels::CocycleLabels;
use super::mat::{Mat2, Mat3};
use crate::interval::Interval;
use crate::triangulation::{big_hexagon, rectangle, small_hexagon, EdgeEnd, Flag, Perm4, TEdge, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellKind {
    SmallHexagon,
    Rectangle,
    BigHexagon,
}

/// A 2-cell given by its oriented boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub kind: CellKind,
    pub boundary: Vec<TEdge>,
}

fn first_odd(tet: usize, pred: impl Fn(Perm4) -> bool) -> Flag {
    Perm4::all()
        .find(|&p| p.is_odd() && pred(p))
        .map(|p| Flag::new(tet, p))
        .expect("an odd permutation exists")
}

/// Every 2-cell of every doubly truncated tetrahedron: four small hexagons,
/// six rectangles and four big hexagons per tetrahedron.
pub fn all_cells(t: &Triangulation) -> Vec<Cell> {
    let mut out = Vec::with_capacity(14 * t.num_tets());
    for tet in 0..t.num_tets() {
        for a in 0..4 {
            out.push(Cell {
                kind: CellKind::SmallHexagon,
                boundary: small_hexagon(t.hexagon_flag(tet, a)).to_vec(),
            });
        }
        for a in 0..4 {
            for b in a + 1..4 {
                let f = first_odd(tet, |p| p.apply(0) == a && p.apply(1) == b);
                out.push(Cell {
                    kind: CellKind::Rectangle,
                    boundary: rectangle(f).to_vec(),
                });
            }
        }
        for d in 0..4 {
            let f = first_odd(tet, |p| p.apply(3) == d);
            out.push(Cell {
                kind: CellKind::BigHexagon,
                boundary: big_hexagon(f).to_vec(),
            });
        }
    }
    out
}

/// Result of the closure check on one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellClosure {
    pub cell: Cell,
    /// SO(3) product encloses `Id`; only for small hexagons.
    pub so3: Option<bool>,
    /// PGL(2,ℂ) product encloses a multiple of `Id`.
    pub pgl2: bool,
    /// Largest width among the entries of the SO(3) product, or of the
    /// normalized PGL(2,ℂ) product for the other cells.
    pub width: f64,
}

fn mat3_width(m: &Mat3<Interval>) -> f64 {
    m.0.iter().flatten().map(|x| x.width()).fold(0.0, f64::max)
}

fn mat2_width(m: &Mat2<Interval>) -> f64 {
    m.0.iter()
        .flatten()
        .map(|z| z.re.width().max(z.im.width()))
        .fold(0.0, f64::max)
}

/// Checks the cocycle condition on every 2-cell.
pub fn cocycle_closure(t: &Triangulation, labels: &CocycleLabels<Interval>) -> Vec<CellClosure> {
    all_cells(t)
        .into_iter()
        .map(|cell| {
            let so3m = (cell.kind == CellKind::SmallHexagon).then(|| labels.so3_path(&cell.boundary)).flatten();
            let pgl = labels.pgl2_path(t, &cell.boundary);
            let pgl2 = pgl.as_ref().is_some_and(|m| m.encloses_projective_identity());
            let width = match (&so3m, &pgl) {
                (Some(m), _) => mat3_width(m),
                (None, Some(m)) => mat2_width(m),
                _ => f64::INFINITY,
            };
            CellClosure {
                so3: so3m.map(|m| m.encloses_identity()),
                pgl2,
                width,
                cell,
            }
        })
        .collect()
}

/// Product of the γ-labels around the polygon of an edge-class end.
///
/// This is the z-rotation by the angle sum of the edge.
pub fn prism_holonomy(t: &Triangulation, labels: &CocycleLabels<Interval>, end: EdgeEnd) -> Mat3<Interval> {
    let path = t.prism_end_boundary(t.polygon_start_flag(end));
    labels.so3_path(&path).expect("γ-edges carry SO(3) labels")
}
