//! The doubly truncated complex: every tetrahedron is truncated at its
//! vertices and edges, leaving a permutahedron whose 24 vertices are indexed
//! by permutations `σ`. The vertex `σ` sits near tet vertex `σ(0)`, on tet
//! edge `σ(0)σ(1)`, inside the face opposite `σ(3)`.
//!
//! Edges come in three kinds. An α-edge runs along a tet edge between its two
//! truncations, a β-edge crosses a vertex truncation inside a face, and a
//! γ-edge crosses an edge truncation between the two faces at that edge.
//! α- and β-edges lie in faces and so have two parametrizations; γ-edges
//! lie inside a single tetrahedron.

use std::collections::{BTreeMap, BTreeSet};

use super::{local_edge_index, Perm4, Triangulation};

const SWAP01: Perm4 = Perm4::new_unchecked([1, 0, 2, 3]);
const SWAP12: Perm4 = Perm4::new_unchecked([0, 2, 1, 3]);
const SWAP23: Perm4 = Perm4::new_unchecked([0, 1, 3, 2]);

/// A vertex of the doubly truncated complex as seen from one tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag {
    pub tet: usize,
    pub perm: Perm4,
}

impl Flag {
    pub fn new(tet: usize, perm: Perm4) -> Self {
        Flag { tet, perm }
    }

    /// `(tet, σ ∘ p)`.
    pub fn then(self, p: Perm4) -> Flag {
        Flag {
            tet: self.tet,
            perm: self.perm.compose(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Alpha,
    Beta,
    Gamma,
}

/// A directed edge of the doubly truncated complex, given by its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TEdge {
    pub kind: EdgeKind,
    pub start: Flag,
}

impl TEdge {
    pub fn alpha(start: Flag) -> Self {
        TEdge {
            kind: EdgeKind::Alpha,
            start,
        }
    }

    pub fn beta(start: Flag) -> Self {
        TEdge {
            kind: EdgeKind::Beta,
            start,
        }
    }

    pub fn gamma(start: Flag) -> Self {
        TEdge {
            kind: EdgeKind::Gamma,
            start,
        }
    }

    pub fn end(&self) -> Flag {
        self.start.then(match self.kind {
            EdgeKind::Alpha => SWAP01,
            EdgeKind::Beta => SWAP12,
            EdgeKind::Gamma => SWAP23,
        })
    }

    pub fn reverse(&self) -> TEdge {
        TEdge {
            kind: self.kind,
            start: self.end(),
        }
    }
}

/// One end of an edge class: `end` is 0 at the tail, 1 at the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEnd {
    pub class: usize,
    pub end: u8,
}

fn perm(digits: [u8; 4]) -> Perm4 {
    Perm4::new(digits).expect("valid permutation")
}

/// Boundary of the small hexagon at tet vertex `σ(0)`.
pub fn small_hexagon(f: Flag) -> [TEdge; 6] {
    [
        TEdge::beta(f),
        TEdge::gamma(f.then(perm([0, 2, 1, 3]))),
        TEdge::beta(f.then(perm([0, 2, 3, 1]))),
        TEdge::gamma(f.then(perm([0, 3, 2, 1]))),
        TEdge::beta(f.then(perm([0, 3, 1, 2]))),
        TEdge::gamma(f.then(perm([0, 1, 3, 2]))),
    ]
}

/// Boundary of the rectangle on the side of the truncated tet edge `σ(0)σ(1)`.
pub fn rectangle(f: Flag) -> [TEdge; 4] {
    [
        TEdge::gamma(f),
        TEdge::alpha(f.then(perm([0, 1, 3, 2]))),
        TEdge::gamma(f.then(perm([1, 0, 3, 2]))),
        TEdge::alpha(f.then(perm([1, 0, 2, 3]))),
    ]
}

/// Boundary of the big hexagon in the face opposite `σ(3)`.
pub fn big_hexagon(f: Flag) -> [TEdge; 6] {
    [
        TEdge::beta(f),
        TEdge::alpha(f.then(perm([0, 2, 1, 3]))),
        TEdge::beta(f.then(perm([2, 0, 1, 3]))),
        TEdge::alpha(f.then(perm([2, 1, 0, 3]))),
        TEdge::beta(f.then(perm([1, 2, 0, 3]))),
        TEdge::alpha(f.then(perm([1, 0, 2, 3]))),
    ]
}

/// A prism-end polygon of a vertex link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkPolygon {
    pub end: EdgeEnd,
    /// γ-edges in the boundary orientation induced from the link.
    pub boundary: Vec<TEdge>,
}

/// The link of a vertex class inside the doubly truncated complex: one small
/// hexagon per corner, and one polygon per incident edge-class end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkComplex {
    pub vertex: usize,
    /// One odd flag per small hexagon, in order of the corners.
    pub hexagons: Vec<Flag>,
    /// Polygons sorted by edge end.
    pub polygons: Vec<LinkPolygon>,
}

impl LinkComplex {
    pub fn polygon_index(&self, end: EdgeEnd) -> Option<usize> {
        self.polygons.binary_search_by(|p| p.end.cmp(&end)).ok()
    }
}

/// Smallest odd permutation mapping `0, 1` to `a, b`.
fn odd_flag_on_edge(tet: usize, a: usize, b: usize) -> Flag {
    let mut rest = (0..4).filter(|&x| x != a && x != b);
    let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
    let p = perm([a as u8, b as u8, c as u8, d as u8]);
    let p = if p.is_odd() {
        p
    } else {
        perm([a as u8, b as u8, d as u8, c as u8])
    };
    Flag::new(tet, p)
}

impl Triangulation {
    /// The other parametrization of the same vertex, across the face opposite `σ(3)`.
    pub fn glued_flag(&self, f: Flag) -> Flag {
        let g = self.gluing(f.tet, f.perm.apply(3));
        Flag::new(g.tet, g.perm.compose(f.perm))
    }

    /// Canonical parametrization of the vertex `f`.
    pub fn flag_key(&self, f: Flag) -> Flag {
        f.min(self.glued_flag(f))
    }

    pub fn same_flag_vertex(&self, a: Flag, b: Flag) -> bool {
        self.flag_key(a) == self.flag_key(b)
    }

    /// Canonical name of a directed edge.
    pub fn edge_key(&self, e: TEdge) -> TEdge {
        match e.kind {
            EdgeKind::Gamma => e,
            _ => TEdge {
                kind: e.kind,
                start: self.flag_key(e.start),
            },
        }
    }

    /// Canonical name of an undirected edge.
    pub fn undirected_edge_key(&self, e: TEdge) -> TEdge {
        self.edge_key(e).min(self.edge_key(e.reverse()))
    }

    /// The edge-class end on whose prism-end polygon `f` lies.
    pub fn flag_edge_end(&self, f: Flag) -> EdgeEnd {
        self.edge_end(f.tet, f.perm.apply(0), f.perm.apply(1))
    }

    /// Vertex class of the link containing `f`.
    pub fn flag_vertex_class(&self, f: Flag) -> usize {
        self.vertex_class_of(f.tet, f.perm.apply(0))
    }

    /// The γ-edges around the prism end containing `f`, starting at `f`.
    ///
    /// All flags visited share the parity of `f`; odd flags traverse the
    /// polygon in the orientation induced from the link.
    pub fn prism_end_boundary(&self, f: Flag) -> Vec<TEdge> {
        let mut out = Vec::new();
        let mut cur = f;
        loop {
            let g = TEdge::gamma(cur);
            out.push(g);
            cur = self.glued_flag(g.end());
            if cur == f {
                return out;
            }
            assert!(out.len() <= 6 * self.num_tets(), "prism walk did not close");
        }
    }

    /// Odd flag at the start of the polygon of `end`.
    pub fn polygon_start_flag(&self, end: EdgeEnd) -> Flag {
        let rep = self.edge_classes()[end.class].reps[0];
        let (tail, head) = rep.oriented();
        if end.end == 0 {
            odd_flag_on_edge(rep.tet, tail, head)
        } else {
            odd_flag_on_edge(rep.tet, head, tail)
        }
    }

    /// Odd flag naming the small hexagon at corner `(tet, a)`.
    pub fn hexagon_flag(&self, tet: usize, a: usize) -> Flag {
        Perm4::all()
            .filter(|p| p.is_odd() && p.apply(0) == a)
            .map(|p| Flag::new(tet, p))
            .next()
            .expect("an odd permutation exists")
    }

    /// The complex `L_k` for vertex class `v`.
    pub fn vertex_link_hexagon_complex(&self, v: usize) -> LinkComplex {
        let corners = &self.vertex_classes()[v].reps;
        let hexagons = corners.iter().map(|&(t, a)| self.hexagon_flag(t, a)).collect();
        let mut ends = BTreeSet::new();
        for &(t, a) in corners {
            for b in (0..4).filter(|&b| b != a) {
                ends.insert(self.edge_end(t, a, b));
            }
        }
        let polygons = ends
            .into_iter()
            .map(|end| LinkPolygon {
                end,
                boundary: self.prism_end_boundary(self.polygon_start_flag(end)),
            })
            .collect();
        LinkComplex {
            vertex: v,
            hexagons,
            polygons,
        }
    }

    /// Euler characteristic of `link` computed from its cells.
    pub fn link_complex_euler_characteristic(&self, link: &LinkComplex) -> i64 {
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut add = |e: TEdge, vertices: &mut BTreeSet<Flag>| {
            edges.insert(self.undirected_edge_key(e));
            vertices.insert(self.flag_key(e.start));
            vertices.insert(self.flag_key(e.end()));
        };
        for &h in &link.hexagons {
            for e in small_hexagon(h) {
                add(e, &mut vertices);
            }
        }
        for p in &link.polygons {
            for &e in &p.boundary {
                add(e, &mut vertices);
            }
        }
        let faces = link.hexagons.len() + link.polygons.len();
        vertices.len() as i64 - edges.len() as i64 + faces as i64
    }

    /// Every vertex of the doubly truncated complex, once.
    pub fn all_flag_keys(&self) -> Vec<Flag> {
        let mut out = BTreeSet::new();
        for t in 0..self.num_tets() {
            for p in Perm4::all() {
                out.insert(self.flag_key(Flag::new(t, p)));
            }
        }
        out.into_iter().collect()
    }

    /// Polygon boundaries keyed by edge end, for every end of every class.
    pub fn all_prism_ends(&self) -> BTreeMap<EdgeEnd, Vec<TEdge>> {
        let mut out = BTreeMap::new();
        for class in 0..self.num_edges() {
            for end in 0..2 {
                let e = EdgeEnd { class, end };
                out.insert(e, self.prism_end_boundary(self.polygon_start_flag(e)));
            }
        }
        out
    }

    /// The local edge `σ(0)σ(1)` of a flag.
    pub fn flag_local_edge(&self, f: Flag) -> usize {
        local_edge_index(f.perm.apply(0), f.perm.apply(1))
    }
}
