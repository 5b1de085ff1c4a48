//! Combinatorial triangulations of closed oriented 3-manifolds.
//!
//! A triangulation is a list of tetrahedra with vertices labelled `0..4`.
//! Face `f` of a tetrahedron is the face opposite vertex `f`. Each face is
//! glued to a face of some tetrahedron by a permutation of the vertex labels.

mod perm;
mod truncated;

pub use perm::Perm4;
pub use truncated::{
    big_hexagon, rectangle, small_hexagon, EdgeEnd, EdgeKind, Flag, LinkComplex, LinkPolygon, TEdge,
};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Local edges of a tetrahedron in canonical order.
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`LOCAL_EDGES`] of the edge joining local vertices `a != b`.
pub fn local_edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

/// Local edge opposite to `e`, e.g. `23` for `01`.
pub fn opposite_edge(e: usize) -> usize {
    5 - e
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("not closed: face {face} of tet {tet} is not glued")]
    NotClosed { tet: usize, face: usize },
    #[error("non-involutive gluing at face {face} of tet {tet}")]
    NonInvolutive { tet: usize, face: usize },
    #[error("non-orientable: gluing at face {face} of tet {tet} is an even permutation")]
    NonOrientable { tet: usize, face: usize },
    #[error("edge {edge} of tet {tet} is identified with itself in a non-manifold way")]
    NonManifoldEdge { tet: usize, edge: usize },
    #[error("link of vertex class {vertex} is not a 2-sphere (Euler characteristic {euler})")]
    LinkNotSphere { vertex: usize, euler: i64 },
    #[error("expected {expected} edge lengths, found {found}")]
    LengthCount { expected: usize, found: usize },
}

/// Target of a face gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// One occurrence of an edge class in a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRep {
    pub tet: usize,
    /// Index into [`LOCAL_EDGES`].
    pub edge: usize,
    /// Whether the class orientation runs from the smaller to the larger local vertex.
    pub forward: bool,
}

impl EdgeRep {
    /// Local vertices `(tail, head)` in class orientation.
    pub fn oriented(&self) -> (usize, usize) {
        let (a, b) = LOCAL_EDGES[self.edge];
        if self.forward {
            (a, b)
        } else {
            (b, a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    /// Occurrences in cyclic order around the edge, starting at the minimal one.
    pub reps: Vec<EdgeRep>,
    /// Vertex classes at the tail and the head.
    pub ends: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub id: usize,
    /// Sorted list of `(tet, local vertex)`.
    pub reps: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    edge_classes: Vec<EdgeClass>,
    vertex_classes: Vec<VertexClass>,
    edge_of: Vec<[usize; 6]>,
    edge_forward: Vec<[bool; 6]>,
    vertex_of: Vec<[usize; 4]>,
}

/// Parsed contents of a triangulation file.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangulationFile {
    pub triangulation: Triangulation,
    /// Edge lengths `l_e` in canonical edge order, if present.
    pub lengths: Option<Vec<f64>>,
}

impl Triangulation {
    /// Validates a gluing table and derives edge and vertex classes.
    ///
    /// `None` marks an unglued face.
    pub fn from_gluings(table: Vec<[Option<Gluing>; 4]>) -> Result<Self, TriangulationError> {
        let n = table.len();
        let mut gluings = Vec::with_capacity(n);
        for (t, faces) in table.iter().enumerate() {
            let mut row = [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY,
            }; 4];
            for (f, g) in faces.iter().enumerate() {
                match g {
                    None => return Err(TriangulationError::NotClosed { tet: t, face: f }),
                    Some(g) if g.tet >= n => {
                        return Err(TriangulationError::Syntax {
                            line: 0,
                            msg: format!("tet {t} face {f} refers to missing tet {}", g.tet),
                        })
                    }
                    Some(g) => row[f] = *g,
                }
            }
            gluings.push(row);
        }

        for t in 0..n {
            for f in 0..4 {
                let g = gluings[t][f];
                let back_face = g.perm.apply(f);
                let back = gluings[g.tet][back_face];
                let self_glued = g.tet == t && back_face == f;
                if self_glued || back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NonInvolutive { tet: t, face: f });
                }
            }
        }
        for t in 0..n {
            for f in 0..4 {
                if !gluings[t][f].perm.is_odd() {
                    return Err(TriangulationError::NonOrientable { tet: t, face: f });
                }
            }
        }

        let (vertex_of, vertex_classes) = vertex_classes(&gluings);
        let (edge_of, edge_forward, edge_classes) = edge_classes(&gluings, &vertex_of)?;
        let tri = Triangulation {
            gluings,
            edge_classes,
            vertex_classes,
            edge_of,
            edge_forward,
            vertex_of,
        };
        for v in 0..tri.num_vertices() {
            let euler = tri.link_euler_characteristic(v);
            if euler != 2 {
                return Err(TriangulationError::LinkNotSphere { vertex: v, euler });
            }
        }
        Ok(tri)
    }

    pub fn num_tets(&self) -> usize {
        self.gluings.len()
    }

    /// `m`, the number of edge classes.
    pub fn num_edges(&self) -> usize {
        self.edge_classes.len()
    }

    /// `o`, the number of vertex classes.
    pub fn num_vertices(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.vertex_classes
    }

    /// Edge class of local edge `e` (index into [`LOCAL_EDGES`]) of `tet`.
    pub fn edge_class_of(&self, tet: usize, e: usize) -> usize {
        self.edge_of[tet][e]
    }

    /// Whether the class orientation of local edge `e` of `tet` is ascending.
    pub fn edge_is_forward(&self, tet: usize, e: usize) -> bool {
        self.edge_forward[tet][e]
    }

    pub fn vertex_class_of(&self, tet: usize, v: usize) -> usize {
        self.vertex_of[tet][v]
    }

    /// All occurrences of edge class `e`, with multiplicity.
    pub fn edge_incidences(&self, e: usize) -> Vec<(usize, usize)> {
        self.edge_classes[e].reps.iter().map(|r| (r.tet, r.edge)).collect()
    }

    /// The end of an edge class seen from local vertex `a` of the local edge `{a, b}`.
    pub fn edge_end(&self, tet: usize, a: usize, b: usize) -> EdgeEnd {
        let e = local_edge_index(a, b);
        let class = self.edge_of[tet][e];
        let (lo, hi) = LOCAL_EDGES[e];
        let tail = if self.edge_forward[tet][e] { lo } else { hi };
        EdgeEnd {
            class,
            end: if a == tail { 0 } else { 1 },
        }
    }

    /// Euler characteristic of the link of vertex class `v`.
    pub fn link_euler_characteristic(&self, v: usize) -> i64 {
        let corners = &self.vertex_classes[v].reps;
        let mut link_vertices = BTreeSet::new();
        for &(t, a) in corners {
            for b in (0..4).filter(|&b| b != a) {
                link_vertices.insert(self.edge_end(t, a, b));
            }
        }
        let faces = corners.len() as i64;
        // Each corner triangle has three sides, each shared by two triangles.
        link_vertices.len() as i64 - 3 * faces / 2 + faces
    }

    /// `V − E + F − T` of the cell structure, which vanishes for closed 3-manifolds.
    pub fn euler_characteristic(&self) -> i64 {
        let t = self.num_tets() as i64;
        self.num_vertices() as i64 - self.num_edges() as i64 + 2 * t - t
    }

    /// Serializes to the text format, optionally with a lengths section.
    pub fn to_text(&self, lengths: Option<&[f64]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tets {}", self.num_tets());
        for (t, row) in self.gluings.iter().enumerate() {
            let _ = write!(s, "tet {t}:");
            for g in row {
                let _ = write!(s, " {}:{}", g.tet, g.perm);
            }
            s.push('\n');
        }
        if let Some(ls) = lengths {
            s.push_str("lengths:\n");
            for l in ls {
                let _ = writeln!(s, "{l:?}");
            }
        }
        s
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<TriangulationFile, TriangulationError> {
        parse(text)
    }
}

fn vertex_classes(gluings: &[[Gluing; 4]]) -> (Vec<[usize; 4]>, Vec<VertexClass>) {
    let n = gluings.len();
    let mut of = vec![[usize::MAX; 4]; n];
    let mut classes = Vec::new();
    for t in 0..n {
        for v in 0..4 {
            if of[t][v] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut reps = Vec::new();
            let mut stack = vec![(t, v)];
            of[t][v] = id;
            while let Some((s, a)) = stack.pop() {
                reps.push((s, a));
                for f in (0..4).filter(|&f| f != a) {
                    let g = gluings[s][f];
                    let b = g.perm.apply(a);
                    if of[g.tet][b] == usize::MAX {
                        of[g.tet][b] = id;
                        stack.push((g.tet, b));
                    }
                }
            }
            reps.sort_unstable();
            classes.push(VertexClass { id, reps });
        }
    }
    (of, classes)
}

type EdgeTables = (Vec<[usize; 6]>, Vec<[bool; 6]>, Vec<EdgeClass>);

fn edge_classes(
    gluings: &[[Gluing; 4]],
    vertex_of: &[[usize; 4]],
) -> Result<EdgeTables, TriangulationError> {
    let n = gluings.len();
    let mut of = vec![[usize::MAX; 6]; n];
    let mut forward = vec![[false; 6]; n];
    let mut classes = Vec::new();
    // Scanning in canonical order makes the first unvisited edge the minimal
    // representative of its class.
    for t in 0..n {
        for e in 0..6 {
            if of[t][e] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let (a0, b0) = LOCAL_EDGES[e];
            let mut rest = (0..4).filter(|&x| x != a0 && x != b0);
            let (c0, d0) = (rest.next().unwrap(), rest.next().unwrap());
            let start = (t, a0, b0, c0, d0);
            let mut flag = start;
            let mut reps = Vec::new();
            loop {
                let (s, a, b, c, d) = flag;
                let le = local_edge_index(a, b);
                if of[s][le] != usize::MAX {
                    return Err(TriangulationError::NonManifoldEdge { tet: s, edge: le });
                }
                of[s][le] = id;
                forward[s][le] = a < b;
                reps.push(EdgeRep {
                    tet: s,
                    edge: le,
                    forward: a < b,
                });
                let g = gluings[s][d];
                let p = g.perm;
                flag = (g.tet, p.apply(a), p.apply(b), p.apply(d), p.apply(c));
                if flag == start {
                    break;
                }
            }
            classes.push(EdgeClass {
                id,
                reps,
                ends: [vertex_of[t][a0], vertex_of[t][b0]],
            });
        }
    }
    Ok((of, forward, classes))
}

fn syntax(line: usize, msg: impl Into<String>) -> TriangulationError {
    TriangulationError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse(text: &str) -> Result<TriangulationFile, TriangulationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let n: usize = header
        .strip_prefix("tets")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| syntax(ln, "expected `tets N`"))?;

    let mut table: Vec<Option<[Option<Gluing>; 4]>> = vec![None; n];
    let mut length_tokens: Option<Vec<(usize, String)>> = None;
    for (ln, line) in lines {
        if let Some(tokens) = length_tokens.as_mut() {
            tokens.extend(line.split_whitespace().map(|t| (ln, t.to_string())));
            continue;
        }
        if let Some(rest) = line.strip_prefix("lengths:") {
            length_tokens = Some(rest.split_whitespace().map(|t| (ln, t.to_string())).collect());
            continue;
        }
        let rest = line
            .strip_prefix("tet ")
            .ok_or_else(|| syntax(ln, "expected `tet i: ...` or `lengths:`"))?;
        let (idx, faces) = rest
            .split_once(':')
            .ok_or_else(|| syntax(ln, "missing `:` after tet index"))?;
        let i: usize = idx
            .trim()
            .parse()
            .map_err(|_| syntax(ln, "bad tet index"))?;
        if i >= n {
            return Err(syntax(ln, format!("tet index {i} out of range")));
        }
        if table[i].is_some() {
            return Err(syntax(ln, format!("tet {i} listed twice")));
        }
        let tokens: Vec<&str> = faces.split_whitespace().collect();
        let mut row = [None; 4];
        if !tokens.is_empty() {
            if tokens.len() != 4 {
                return Err(syntax(ln, "expected four face gluings"));
            }
            for (f, tok) in tokens.iter().enumerate() {
                row[f] = parse_gluing(tok).map_err(|m| syntax(ln, m))?;
            }
        }
        table[i] = Some(row);
    }

    let mut rows = Vec::with_capacity(n);
    for (i, row) in table.into_iter().enumerate() {
        rows.push(row.ok_or_else(|| syntax(ln, format!("tet {i} missing")))?);
    }
    let triangulation = Triangulation::from_gluings(rows)?;

    let lengths = match length_tokens {
        None => None,
        Some(tokens) => {
            let mut ls = Vec::with_capacity(tokens.len());
            for (ln, tok) in tokens {
                let l: f64 = tok
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad length `{tok}`")))?;
                if !(l.is_finite() && l > 0.0) {
                    return Err(syntax(ln, format!("edge length must be positive, got {tok}")));
                }
                ls.push(l);
            }
            if ls.len() != triangulation.num_edges() {
                return Err(TriangulationError::LengthCount {
                    expected: triangulation.num_edges(),
                    found: ls.len(),
                });
            }
            Some(ls)
        }
    };
    Ok(TriangulationFile {
        triangulation,
        lengths,
    })
}

fn parse_gluing(tok: &str) -> Result<Option<Gluing>, String> {
    if tok == "-" {
        return Ok(None);
    }
    let (t, p) = tok
        .split_once(':')
        .ok_or_else(|| format!("bad gluing `{tok}`"))?;
    let tet = t.parse().map_err(|_| format!("bad tet in `{tok}`"))?;
    let perm = Perm4::from_digits(p).ok_or_else(|| format!("bad permutation in `{tok}`"))?;
    Ok(Some(Gluing { tet, perm }))
}
