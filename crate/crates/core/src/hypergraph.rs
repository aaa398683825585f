//! Hypergraph data model, text format and the padding reduction to uniform rank.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense vertex identifier, assigned in order of first appearance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Errors raised while reading the text format. Line numbers are 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing `k=<int>` header")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`, expected `k=<int>`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: rank k={k} is below 3")]
    RankTooSmall { line: usize, k: usize },
    #[error("line {line}: invalid vertex token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: edge of size {size} is below the minimum size 2")]
    EdgeTooSmall { line: usize, size: usize },
    #[error("line {line}: edge of size {size} exceeds rank k={k}")]
    EdgeTooLarge { line: usize, size: usize, k: usize },
    #[error("line {line}: duplicate vertex `{token}` in edge")]
    DuplicateVertex { line: usize, token: String },
}

/// Errors raised when building a hypergraph programmatically.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("rank k={0} is below 3")]
    RankTooSmall(usize),
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("edge {edge} has size {size}, below the minimum size 2")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("edge {edge} has size {size}, exceeding rank k={k}")]
    EdgeTooLarge { edge: usize, size: usize, k: usize },
    #[error("edge {edge} repeats vertex `{token}`")]
    DuplicateVertex { edge: usize, token: String },
    #[error("invalid vertex token `{0}`")]
    InvalidToken(String),
    #[error("duplicate vertex token `{0}` in vertex list")]
    DuplicateToken(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge index {0} out of range")]
    UnknownEdge(usize),
}

pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && token
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// A hypergraph of rank `k` over opaque string tokens.
///
/// Edges are stored as sorted vertex-id lists so that pairwise intersections
/// cost `O(k)` by merging.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    rank: usize,
    tokens: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Vec<VertexId>>,
}

impl Hypergraph {
    /// Builds a hypergraph from edges given as token lists. Vertices are
    /// numbered in order of first appearance.
    pub fn from_edges<S: AsRef<str>>(
        rank: usize,
        edges: &[Vec<S>],
    ) -> Result<Self, HypergraphError> {
        Self::with_vertices(rank, &[] as &[&str], edges)
    }

    /// Like [`Hypergraph::from_edges`], but declares `vertices` first so that
    /// isolated vertices can be represented.
    pub fn with_vertices<S: AsRef<str>, T: AsRef<str>>(
        rank: usize,
        vertices: &[T],
        edges: &[Vec<S>],
    ) -> Result<Self, HypergraphError> {
        if rank < 3 {
            return Err(HypergraphError::RankTooSmall(rank));
        }
        let mut h = Hypergraph {
            rank,
            tokens: Vec::new(),
            index: HashMap::new(),
            edges: Vec::with_capacity(edges.len()),
        };
        for v in vertices {
            let v = v.as_ref();
            if !is_valid_token(v) {
                return Err(HypergraphError::InvalidToken(v.to_string()));
            }
            if h.index.contains_key(v) {
                return Err(HypergraphError::DuplicateToken(v.to_string()));
            }
            h.intern(v);
        }
        for (i, edge) in edges.iter().enumerate() {
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge(i));
            }
            if edge.len() < 2 {
                return Err(HypergraphError::EdgeTooSmall {
                    edge: i,
                    size: edge.len(),
                });
            }
            if edge.len() > rank {
                return Err(HypergraphError::EdgeTooLarge {
                    edge: i,
                    size: edge.len(),
                    k: rank,
                });
            }
            let mut ids = Vec::with_capacity(edge.len());
            for tok in edge {
                let tok = tok.as_ref();
                if !is_valid_token(tok) {
                    return Err(HypergraphError::InvalidToken(tok.to_string()));
                }
                let id = h.intern(tok);
                if ids.contains(&id) {
                    return Err(HypergraphError::DuplicateVertex {
                        edge: i,
                        token: tok.to_string(),
                    });
                }
                ids.push(id);
            }
            ids.sort_unstable();
            h.edges.push(ids);
        }
        Ok(h)
    }

    fn intern(&mut self, token: &str) -> VertexId {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = VertexId(self.tokens.len() as u32);
        self.tokens.push(token.to_string());
        self.index.insert(token.to_string(), id);
        id
    }

    /// Parses the line-oriented text format: a `k=<int>` header followed by
    /// one whitespace-separated edge per line, with `#` comments.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut rank: Option<usize> = None;
        let mut h = Hypergraph {
            rank: 0,
            tokens: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some(k) = rank else {
                let k = content
                    .strip_prefix("k=")
                    .and_then(|s| s.trim().parse::<usize>().ok())
                    .ok_or_else(|| ParseError::MalformedHeader {
                        line,
                        text: content.to_string(),
                    })?;
                if k < 3 {
                    return Err(ParseError::RankTooSmall { line, k });
                }
                rank = Some(k);
                h.rank = k;
                continue;
            };
            let toks: Vec<&str> = content.split_whitespace().collect();
            if let Some(bad) = toks.iter().find(|t| !is_valid_token(t)) {
                return Err(ParseError::InvalidToken {
                    line,
                    token: bad.to_string(),
                });
            }
            for (i, t) in toks.iter().enumerate() {
                if toks[..i].contains(t) {
                    return Err(ParseError::DuplicateVertex {
                        line,
                        token: t.to_string(),
                    });
                }
            }
            if toks.len() < 2 {
                return Err(ParseError::EdgeTooSmall {
                    line,
                    size: toks.len(),
                });
            }
            if toks.len() > k {
                return Err(ParseError::EdgeTooLarge {
                    line,
                    size: toks.len(),
                    k,
                });
            }
            let mut ids: Vec<VertexId> = toks.iter().map(|t| h.intern(t)).collect();
            ids.sort_unstable();
            h.edges.push(ids);
        }
        if rank.is_none() {
            return Err(ParseError::MissingHeader);
        }
        Ok(h)
    }

    /// Maximum allowed edge size.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.tokens.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    /// The sorted vertex ids of edge `i`. Panics on an out-of-range index.
    pub fn edge(&self, i: usize) -> &[VertexId] {
        &self.edges[i]
    }

    pub fn token(&self, v: VertexId) -> &str {
        &self.tokens[v.index()]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn vertex(&self, token: &str) -> Option<VertexId> {
        self.index.get(token).copied()
    }

    pub fn require_vertex(&self, token: &str) -> Result<VertexId, HypergraphError> {
        self.vertex(token)
            .ok_or_else(|| HypergraphError::UnknownVertex(token.to_string()))
    }

    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == self.rank)
    }

    /// Pairs `(i, j)` with `i < j` of edges with identical vertex sets.
    /// These are legal but worth a warning.
    pub fn duplicate_edges(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<&[VertexId], usize> = HashMap::new();
        let mut out = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            match seen.get(e.as_slice()) {
                Some(&i) => out.push((i, j)),
                None => {
                    seen.insert(e.as_slice(), j);
                }
            }
        }
        out
    }

    /// Edge `i` rendered as its tokens.
    pub fn edge_tokens(&self, i: usize) -> Vec<&str> {
        self.edges[i].iter().map(|&v| self.token(v)).collect()
    }

    /// Keeps the edges selected by `keep`, preserving vertex ids and order.
    pub fn retain_edges(&self, mut keep: impl FnMut(usize, &[VertexId]) -> bool) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| keep(*i, e))
            .map(|(_, e)| e.clone())
            .collect();
        Hypergraph {
            rank: self.rank,
            tokens: self.tokens.clone(),
            index: self.index.clone(),
            edges,
        }
    }

    /// Returns the same hypergraph with its edge list permuted: edge `i` of
    /// the result is edge `order[i]` of `self`.
    pub fn permute_edges(&self, order: &[usize]) -> Hypergraph {
        assert_eq!(order.len(), self.edges.len());
        Hypergraph {
            rank: self.rank,
            tokens: self.tokens.clone(),
            index: self.index.clone(),
            edges: order.iter().map(|&i| self.edges[i].clone()).collect(),
        }
    }

    /// Pads every edge of size `< k` with fresh vertices named
    /// `_pad_<edge>_<i>`, yielding a `k`-uniform hypergraph. A name that is
    /// already taken is prefixed with extra underscores until it is free.
    pub fn uniformize(&self) -> Hypergraph {
        let mut out = self.clone();
        for (i, edge) in out.edges.iter_mut().enumerate() {
            let missing = self.rank - edge.len();
            for j in 0..missing {
                let mut name = format!("_pad_{i}_{j}");
                while out.index.contains_key(&name) {
                    name.insert(0, '_');
                }
                let id = VertexId(out.tokens.len() as u32);
                out.tokens.push(name.clone());
                out.index.insert(name, id);
                edge.push(id);
            }
            edge.sort_unstable();
        }
        out
    }
}

impl fmt::Display for Hypergraph {
    /// Writes the text format; `parse` reads it back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.rank)?;
        for e in &self.edges {
            let mut first = true;
            for &v in e {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                f.write_str(self.token(v))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Serializes to the text format. Isolated vertices are not representable
/// and are dropped.
pub fn serialize(h: &Hypergraph) -> String {
    h.to_string()
}

/// Size of the intersection of two sorted vertex lists.
pub fn intersection_len(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// A sorted, deduplicated set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_sorted(v: Vec<VertexId>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(vec![v])
    }

    pub fn from_tokens(h: &Hypergraph, tokens: &[&str]) -> Result<Self, HypergraphError> {
        tokens.iter().map(|t| h.require_vertex(t)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn intersection_len(&self, other: &[VertexId]) -> usize {
        intersection_len(&self.0, other)
    }

    pub fn meets(&self, other: &[VertexId]) -> bool {
        self.intersection_len(other) > 0
    }

    pub fn is_subset(&self, other: &[VertexId]) -> bool {
        self.intersection_len(other) == self.0.len()
    }

    pub fn union(&self, other: &[VertexId]) -> VertexSet {
        self.0.iter().chain(other).copied().collect()
    }

    pub fn intersection(&self, other: &[VertexId]) -> VertexSet {
        self.0
            .iter()
            .copied()
            .filter(|v| other.binary_search(v).is_ok())
            .collect()
    }

    pub fn tokens<'a>(&self, h: &'a Hypergraph) -> Vec<&'a str> {
        self.0.iter().map(|&v| h.token(v)).collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut v: Vec<VertexId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
