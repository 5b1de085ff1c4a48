//! Gimbal loops: closed words in the link of a vertex that run around a disk
//! of small hexagons and pass once around every removed prism-end polygon.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::triangulation::{small_hexagon, EdgeEnd, EdgeKind, Flag, Perm4, TEdge, Triangulation};

const SWAP12: Perm4 = Perm4::new_unchecked([0, 2, 1, 3]);

/// A letter of a gimbal loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// A β- or γ-edge of the link.
    Edge(TEdge),
    /// One turn around the polygon of an edge-class end.
    Polygon(EdgeEnd),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Edge(e) => {
                let k = match e.kind {
                    EdgeKind::Alpha => 'a',
                    EdgeKind::Beta => 'b',
                    EdgeKind::Gamma => 'g',
                };
                write!(f, "{k}{}:{}", e.start.tet, e.start.perm)
            }
            Letter::Polygon(end) => write!(f, "P{}.{}", end.class, end.end),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad loop letter {0:?}")]
pub struct LetterParseError(pub String);

impl FromStr for Letter {
    type Err = LetterParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LetterParseError(s.to_string());
        let (head, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        if head == "P" {
            let (class, end) = rest.split_once('.').ok_or_else(bad)?;
            let class = class.parse().map_err(|_| bad())?;
            let end: u8 = end.parse().map_err(|_| bad())?;
            if end > 1 {
                return Err(bad());
            }
            return Ok(Letter::Polygon(EdgeEnd { class, end }));
        }
        let kind = match head {
            "a" => EdgeKind::Alpha,
            "b" => EdgeKind::Beta,
            "g" => EdgeKind::Gamma,
            _ => return Err(bad()),
        };
        let (tet, perm) = rest.split_once(':').ok_or_else(bad)?;
        let tet = tet.parse().map_err(|_| bad())?;
        let perm = Perm4::from_digits(perm).ok_or_else(bad)?;
        Ok(Letter::Edge(TEdge {
            kind,
            start: Flag::new(tet, perm),
        }))
    }
}

/// A gimbal loop for one vertex class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GimbalLoop {
    pub vertex: usize,
    /// Letters in the order they are traversed.
    pub letters: Vec<Letter>,
    /// Odd flags of the small hexagons whose union the loop bounds.
    pub hexagons: Vec<Flag>,
}

impl GimbalLoop {
    /// The edges of the loop with the polygon letters dropped.
    pub fn edges(&self) -> impl Iterator<Item = TEdge> + '_ {
        self.letters.iter().filter_map(|l| match l {
            Letter::Edge(e) => Some(*e),
            Letter::Polygon(_) => None,
        })
    }

    pub fn polygons(&self) -> impl Iterator<Item = EdgeEnd> + '_ {
        self.letters.iter().filter_map(|l| match l {
            Letter::Polygon(p) => Some(*p),
            Letter::Edge(_) => None,
        })
    }

    pub fn word(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("vertex {vertex}: polygons of {missing:?} are unreachable")]
    Unreachable { vertex: usize, missing: Vec<EdgeEnd> },
    #[error("vertex {vertex}: letter {index} does not start where the previous one ends")]
    NotConsecutive { vertex: usize, index: usize },
    #[error("vertex {vertex}: edge letter {index} is not a link edge of this vertex")]
    ForeignEdge { vertex: usize, index: usize },
    #[error("vertex {vertex}: polygon {end:?} occurs {count} times")]
    PolygonCount { vertex: usize, end: EdgeEnd, count: usize },
    #[error("vertex {vertex}: polygon {end:?} does not follow an edge ending on it")]
    PolygonPlacement { vertex: usize, end: EdgeEnd },
    #[error("vertex {vertex}: the loop is not the boundary of its hexagons")]
    NotBoundary { vertex: usize },
    #[error("vertex {vertex}: {edges} edges around {hexagons} hexagons")]
    Length { vertex: usize, edges: usize, hexagons: usize },
    #[error("vertex {vertex}: no γ-edge at an even flag, wrong orientation")]
    Orientation { vertex: usize },
    #[error("vertex {vertex}: loop is empty")]
    Empty { vertex: usize },
}

/// Ends of the edge classes of `sim` that lie at vertex `v`, sorted.
pub fn removed_ends(t: &Triangulation, v: usize, sim: &[usize]) -> Vec<EdgeEnd> {
    let mut out = Vec::new();
    for &class in sim {
        for end in 0..2u8 {
            if t.edge_classes()[class].ends[end as usize] == v {
                out.push(EdgeEnd { class, end });
            }
        }
    }
    out.sort();
    out
}

fn corner(f: Flag) -> (usize, usize) {
    (f.tet, f.perm.apply(0))
}

/// Builds the gimbal loop of vertex class `v` for the removed edge ends
/// `removed`.
///
/// The loop starts as the boundary of the first small hexagon of the link.
/// Passing repeatedly over the loop, every β-edge across which an unused
/// hexagon lies is replaced by the other five edges of that hexagon, until
/// the loop meets every removed polygon. Each polygon letter is then placed
/// right after the first edge that ends on that polygon.
pub fn build_gimbal_loop(t: &Triangulation, v: usize, removed: &[EdgeEnd]) -> Result<GimbalLoop, LoopError> {
    let link = t.vertex_link_hexagon_complex(v);
    let start = link.hexagons[0];
    let mut path: Vec<TEdge> = small_hexagon(start).to_vec();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::from([corner(start)]);
    let mut hexagons = vec![start];
    let want: BTreeSet<EdgeEnd> = removed.iter().copied().collect();
    let touched = |path: &[TEdge]| -> BTreeSet<EdgeEnd> {
        path.iter()
            .map(|e| t.flag_edge_end(e.end()))
            .filter(|e| want.contains(e))
            .collect()
    };
    let mut i = 0;
    let mut changed_this_pass = false;
    while touched(&path).len() < want.len() {
        if i >= path.len() {
            if !changed_this_pass {
                let have = touched(&path);
                return Err(LoopError::Unreachable {
                    vertex: v,
                    missing: want.difference(&have).copied().collect(),
                });
            }
            i = 0;
            changed_this_pass = false;
        }
        let e = path[i];
        if e.kind == EdgeKind::Beta {
            let next = t.glued_flag(e.start).then(SWAP12);
            if used.insert(corner(next)) {
                let hex = small_hexagon(next);
                debug_assert!(t.same_flag_vertex(hex[0].start, e.end()));
                path.splice(i..=i, hex[1..].iter().copied());
                hexagons.push(next);
                changed_this_pass = true;
            }
        }
        i += 1;
    }
    let mut placed: BTreeMap<usize, EdgeEnd> = BTreeMap::new();
    for &end in &want {
        let pos = path
            .iter()
            .position(|e| t.flag_edge_end(e.end()) == end)
            .expect("every removed polygon is touched");
        placed.insert(pos, end);
    }
    let mut letters = Vec::with_capacity(path.len() + placed.len());
    for (k, e) in path.iter().enumerate() {
        letters.push(Letter::Edge(*e));
        if let Some(&end) = placed.get(&k) {
            letters.push(Letter::Polygon(end));
        }
    }
    Ok(GimbalLoop {
        vertex: v,
        letters,
        hexagons,
    })
}

/// Signed multiplicity of every undirected edge in a formal sum of paths.
fn chain(t: &Triangulation, edges: impl IntoIterator<Item = TEdge>) -> BTreeMap<TEdge, i64> {
    let mut out: BTreeMap<TEdge, i64> = BTreeMap::new();
    for e in edges {
        let key = t.undirected_edge_key(e);
        let sign = if t.edge_key(e) == key { 1 } else { -1 };
        *out.entry(key).or_default() += sign;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Independent check of every defining property of a gimbal loop.
pub fn validate_gimbal_loop(t: &Triangulation, lp: &GimbalLoop, removed: &[EdgeEnd]) -> Result<(), LoopError> {
    let v = lp.vertex;
    let edges: Vec<TEdge> = lp.edges().collect();
    if edges.is_empty() {
        return Err(LoopError::Empty { vertex: v });
    }
    // Link edges of this vertex only.
    for (index, l) in lp.letters.iter().enumerate() {
        if let Letter::Edge(e) = l {
            let ok = e.kind != EdgeKind::Alpha
                && e.start.tet < t.num_tets()
                && t.flag_vertex_class(e.start) == v;
            if !ok {
                return Err(LoopError::ForeignEdge { vertex: v, index });
            }
        }
    }
    // Consecutive and closed.
    let positions: Vec<usize> = lp
        .letters
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, Letter::Edge(_)))
        .map(|(k, _)| k)
        .collect();
    for (k, &pos) in positions.iter().enumerate() {
        let next = positions[(k + 1) % positions.len()];
        let (Letter::Edge(a), Letter::Edge(b)) = (lp.letters[pos], lp.letters[next]) else {
            unreachable!()
        };
        if !t.same_flag_vertex(a.end(), b.start) {
            return Err(LoopError::NotConsecutive { vertex: v, index: next });
        }
    }
    // Each removed polygon exactly once, nothing else, after an edge ending on it.
    let mut counts: BTreeMap<EdgeEnd, usize> = removed.iter().map(|e| (*e, 0)).collect();
    for (k, l) in lp.letters.iter().enumerate() {
        if let Letter::Polygon(end) = l {
            *counts.entry(*end).or_default() += 1;
            let prev = lp.letters[(k + lp.letters.len() - 1) % lp.letters.len()];
            let ok = matches!(prev, Letter::Edge(e) if t.flag_edge_end(e.end()) == *end);
            if !ok {
                return Err(LoopError::PolygonPlacement { vertex: v, end: *end });
            }
        }
    }
    let wanted: BTreeSet<EdgeEnd> = removed.iter().copied().collect();
    for (end, count) in counts {
        if count != 1 || !wanted.contains(&end) {
            return Err(LoopError::PolygonCount { vertex: v, end, count });
        }
    }
    // The edges bound the used hexagons, which are distinct corners of this vertex.
    let corners: BTreeSet<(usize, usize)> = lp.hexagons.iter().map(|&f| corner(f)).collect();
    let sound = corners.len() == lp.hexagons.len()
        && lp.hexagons.iter().all(|f| f.perm.is_odd() && t.flag_vertex_class(*f) == v);
    let boundary = chain(t, lp.hexagons.iter().flat_map(|&f| small_hexagon(f)));
    if !sound || chain(t, edges.iter().copied()) != boundary {
        return Err(LoopError::NotBoundary { vertex: v });
    }
    if edges.len() != 4 * lp.hexagons.len() + 2 {
        return Err(LoopError::Length {
            vertex: v,
            edges: edges.len(),
            hexagons: lp.hexagons.len(),
        });
    }
    if !edges.iter().any(|e| e.kind == EdgeKind::Gamma && !e.start.perm.is_odd()) {
        return Err(LoopError::Orientation { vertex: v });
    }
    Ok(())
}

/// Gimbal loops for every vertex class, with the ends of `sim` removed.
pub fn build_gimbal_loops(t: &Triangulation, sim: &[usize]) -> Result<Vec<GimbalLoop>, LoopError> {
    (0..t.num_vertices())
        .map(|v| {
            let removed = removed_ends(t, v, sim);
            let lp = build_gimbal_loop(t, v, &removed)?;
            validate_gimbal_loop(t, &lp, &removed)?;
            Ok(lp)
        })
        .collect()
}
