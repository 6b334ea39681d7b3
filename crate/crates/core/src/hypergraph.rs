//! Core combinatorial types: hypergraphs with arity 1-3 edges, vertex
//! metadata, colorings, and the text serialization format.
//!
//! Vertices are dense integers `0..n_vertices`. Edges are stored sorted and
//! deduplicated; generalized controlled-phase gates commute, so edge order
//! carries no meaning.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Dense vertex identifier.
pub type VertexId = usize;

/// Role a vertex plays relative to the logical computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Input,
    Output,
    Internal,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Input => write!(f, "input"),
            Role::Output => write!(f, "output"),
            Role::Internal => write!(f, "internal"),
        }
    }
}

/// Optional per-vertex annotations (region label, role, logical wire).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexMeta {
    pub region: u32,
    pub role: Role,
    pub wire: Option<usize>,
}

impl Default for VertexMeta {
    fn default() -> Self {
        VertexMeta {
            region: 0,
            role: Role::Internal,
            wire: None,
        }
    }
}

/// An edge: 1-3 distinct vertices, kept sorted.
///
/// Arity 1 is admitted as a convenience for single-qubit phase gates produced
/// by measurement rewriting; the built resource graphs only use arity 2-3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vec<VertexId>);

impl Edge {
    /// Builds an edge, sorting the vertices. Arity and duplicate checks are
    /// performed by [`Hypergraph::add_edge`] / [`Hypergraph::validate`].
    pub fn new(mut vs: Vec<VertexId>) -> Self {
        vs.sort_unstable();
        Edge(vs)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// Vertices of the edge other than `v`.
    pub fn others(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied().filter(move |&u| u != v)
    }
}

impl From<&[VertexId]> for Edge {
    fn from(vs: &[VertexId]) -> Self {
        Edge::new(vs.to_vec())
    }
}

/// A hypergraph with 1-3-ary edges and per-vertex metadata.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: BTreeSet<Edge>,
    meta: BTreeMap<VertexId, VertexMeta>,
}

/// A single invariant violation reported by [`Hypergraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("edge {0:?} has arity {1}, expected 1..=3")]
    ArityOutOfRange(Vec<VertexId>, usize),
    #[error("edge {0:?} references vertex {1} >= n_vertices {2}")]
    VertexOutOfRange(Vec<VertexId>, VertexId, usize),
    #[error("edge {0:?} repeats vertex {1}")]
    RepeatedVertex(Vec<VertexId>, VertexId),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<VertexId>),
}

impl Hypergraph {
    pub fn new(n_vertices: usize) -> Self {
        Hypergraph {
            n_vertices,
            edges: BTreeSet::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn has_edge(&self, vs: &[VertexId]) -> bool {
        self.edges.contains(&Edge::from(vs))
    }

    /// Inserts an edge (sorted, deduplicated). Returns the violations that
    /// would make this edge invalid; the edge is only inserted when clean.
    pub fn add_edge(&mut self, vs: &[VertexId]) -> Result<(), Violation> {
        let edge = Edge::from(vs);
        if edge.arity() == 0 || edge.arity() > 3 {
            return Err(Violation::ArityOutOfRange(vs.to_vec(), edge.arity()));
        }
        for w in edge.vertices().windows(2) {
            if w[0] == w[1] {
                return Err(Violation::RepeatedVertex(vs.to_vec(), w[0]));
            }
        }
        if let Some(&v) = edge.vertices().iter().find(|&&v| v >= self.n_vertices) {
            return Err(Violation::VertexOutOfRange(vs.to_vec(), v, self.n_vertices));
        }
        if !self.edges.insert(edge) {
            return Err(Violation::DuplicateEdge(vs.to_vec()));
        }
        Ok(())
    }

    pub fn set_meta(&mut self, v: VertexId, meta: VertexMeta) {
        self.meta.insert(v, meta);
    }

    pub fn meta(&self, v: VertexId) -> VertexMeta {
        self.meta.get(&v).copied().unwrap_or_default()
    }

    pub fn metas(&self) -> impl Iterator<Item = (VertexId, &VertexMeta)> {
        self.meta.iter().map(|(&v, m)| (v, m))
    }

    /// Edges incident to `v`.
    pub fn edges_at(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.contains(v))
    }

    /// Checks every structural invariant, returning all violations found.
    ///
    /// Duplicates cannot survive the set representation, so a freshly built
    /// graph can only report arity/range/repeat problems; the variant exists
    /// for the decoder, which reports duplicates at parse time.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut errs = Vec::new();
        for e in &self.edges {
            let vs = e.vertices().to_vec();
            if e.arity() == 0 || e.arity() > 3 {
                errs.push(Violation::ArityOutOfRange(vs.clone(), e.arity()));
            }
            for w in e.vertices().windows(2) {
                if w[0] == w[1] {
                    errs.push(Violation::RepeatedVertex(vs.clone(), w[0]));
                }
            }
            for &v in e.vertices() {
                if v >= self.n_vertices {
                    errs.push(Violation::VertexOutOfRange(vs.clone(), v, self.n_vertices));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn max_arity(&self) -> usize {
        self.edges.iter().map(Edge::arity).max().unwrap_or(0)
    }
}

/// An assignment of colors `0..k` to every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub color_of: Vec<u32>,
    pub k: u32,
}

impl Coloring {
    pub fn new(color_of: Vec<u32>) -> Self {
        let k = color_of.iter().copied().max().map_or(0, |m| m + 1);
        Coloring { color_of, k }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("coloring covers {got} vertices, hypergraph has {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// True iff every edge's vertices carry pairwise-distinct colors.
pub fn is_valid_coloring(h: &Hypergraph, c: &Coloring) -> Result<bool, ColoringError> {
    if c.color_of.len() != h.n_vertices() {
        return Err(ColoringError::LengthMismatch {
            got: c.color_of.len(),
            want: h.n_vertices(),
        });
    }
    for e in h.edges() {
        let vs = e.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if c.color_of[vs[i]] == c.color_of[vs[j]] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Partition of the vertex set by color, indexed `0..k`.
pub fn color_classes(c: &Coloring) -> Vec<Vec<VertexId>> {
    let mut classes = vec![Vec::new(); c.k as usize];
    for (v, &col) in c.color_of.iter().enumerate() {
        classes[col as usize].push(v);
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

/// Serializes a hypergraph (and optionally a coloring) to the text format:
///
/// ```text
/// hypergraph n=<N>
/// e <v1> <v2> [<v3>]
/// meta <v> region=<int> role=<input|output|internal> wire=<int>
/// color <v> <c>
/// ```
pub fn encode(h: &Hypergraph, c: Option<&Coloring>) -> String {
    let mut out = String::new();
    out.push_str(&format!("hypergraph n={}\n", h.n_vertices()));
    for e in h.edges() {
        out.push('e');
        for v in e.vertices() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for (v, m) in h.metas() {
        out.push_str(&format!("meta {v} region={} role={}", m.region, m.role));
        if let Some(w) = m.wire {
            out.push_str(&format!(" wire={w}"));
        }
        out.push('\n');
    }
    if let Some(c) = c {
        for (v, col) in c.color_of.iter().enumerate() {
            out.push_str(&format!("color {v} {col}\n"));
        }
    }
    out
}

/// Parses the text format produced by [`encode`].
pub fn decode(text: &str) -> Result<(Hypergraph, Option<Coloring>), ParseError> {
    let mut h: Option<Hypergraph> = None;
    let mut colors: BTreeMap<VertexId, u32> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let kw = toks.next().unwrap();
        match kw {
            "hypergraph" => {
                if h.is_some() {
                    return perr(lineno, "repeated header");
                }
                let n = toks
                    .next()
                    .and_then(|t| t.strip_prefix("n="))
                    .and_then(|t| t.parse::<usize>().ok());
                match n {
                    Some(n) => h = Some(Hypergraph::new(n)),
                    None => return perr(lineno, "expected `hypergraph n=<N>`"),
                }
            }
            "e" => {
                let h = match h.as_mut() {
                    Some(h) => h,
                    None => return perr(lineno, "edge before header"),
                };
                let mut vs = Vec::new();
                for t in toks {
                    match t.parse::<usize>() {
                        Ok(v) => vs.push(v),
                        Err(_) => return perr(lineno, format!("bad vertex id `{t}`")),
                    }
                }
                if let Err(e) = h.add_edge(&vs) {
                    return perr(lineno, e.to_string());
                }
            }
            "meta" => {
                let h = match h.as_mut() {
                    Some(h) => h,
                    None => return perr(lineno, "meta before header"),
                };
                let v = match toks.next().and_then(|t| t.parse::<usize>().ok()) {
                    Some(v) if v < h.n_vertices() => v,
                    _ => return perr(lineno, "bad meta vertex id"),
                };
                let mut m = VertexMeta::default();
                for t in toks {
                    if let Some(r) = t.strip_prefix("region=") {
                        m.region = match r.parse() {
                            Ok(r) => r,
                            Err(_) => return perr(lineno, "bad region"),
                        };
                    } else if let Some(r) = t.strip_prefix("role=") {
                        m.role = match r {
                            "input" => Role::Input,
                            "output" => Role::Output,
                            "internal" => Role::Internal,
                            _ => return perr(lineno, format!("bad role `{r}`")),
                        };
                    } else if let Some(w) = t.strip_prefix("wire=") {
                        m.wire = match w.parse() {
                            Ok(w) => Some(w),
                            Err(_) => return perr(lineno, "bad wire"),
                        };
                    } else {
                        return perr(lineno, format!("unknown meta field `{t}`"));
                    }
                }
                h.set_meta(v, m);
            }
            "color" => {
                let n = match h.as_ref() {
                    Some(h) => h.n_vertices(),
                    None => return perr(lineno, "color before header"),
                };
                let v = toks.next().and_then(|t| t.parse::<usize>().ok());
                let c = toks.next().and_then(|t| t.parse::<u32>().ok());
                match (v, c) {
                    (Some(v), Some(c)) if v < n => {
                        colors.insert(v, c);
                    }
                    _ => return perr(lineno, "expected `color <v> <c>`"),
                }
            }
            _ => return perr(lineno, format!("unknown keyword `{kw}`")),
        }
    }

    let h = match h {
        Some(h) => h,
        None => return perr(0, "missing `hypergraph` header"),
    };
    let coloring = if colors.is_empty() {
        None
    } else {
        if colors.len() != h.n_vertices() {
            return perr(0, "partial coloring: every vertex needs a color line");
        }
        let mut v = vec![0u32; h.n_vertices()];
        for (vertex, c) in colors {
            v[vertex] = c;
        }
        Some(Coloring::new(v))
    };
    Ok((h, coloring))
}
