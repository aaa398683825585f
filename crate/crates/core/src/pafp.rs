//! Bicolored line graphs and Paths Avoiding Forbidden Pairs.
//!
//! In the line graph of a `k`-uniform hypergraph, two edges are joined in
//! blue when they share `1..=q` vertices and in red when they share more. A
//! blue induced path (consecutive nodes blue-adjacent, all other pairs
//! non-adjacent) between two nodes is then exactly a q-linear path between
//! the two hyperedges.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::archipelago::{lcc, ArchipelagoError};
use crate::hypergraph::{intersection_len, is_valid_token, Hypergraph, HypergraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Blue,
    Red,
}

/// Undirected graph whose edges are colored blue or red.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicoloredGraph {
    labels: Vec<String>,
    blue: Vec<BTreeSet<usize>>,
    red: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected `b u v`, `r u v` or `node u`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: invalid node token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: self-loop on `{token}`")]
    SelfLoop { line: usize, token: String },
    #[error("line {line}: `{u}`–`{v}` is colored both blue and red")]
    ColorClash { line: usize, u: String, v: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PafpError {
    #[error("endpoints must be distinct")]
    SameEndpoints,
    #[error("node {0} out of range")]
    UnknownNode(usize),
    #[error("search exceeded its budget of {0} node expansions")]
    BudgetExceeded(u64),
    #[error("vertex `{0}` does not lie on the required edge")]
    NotOnEdge(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Archipelago(#[from] ArchipelagoError),
}

impl BicoloredGraph {
    /// A graph with the given nodes and no edges.
    pub fn with_nodes(labels: Vec<String>) -> Self {
        let n = labels.len();
        BicoloredGraph {
            labels,
            blue: vec![BTreeSet::new(); n],
            red: vec![BTreeSet::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Adds an edge, replacing any edge of the other color.
    pub fn add_edge(&mut self, u: usize, v: usize, color: Color) {
        assert_ne!(u, v, "self-loop");
        let (this, other) = match color {
            Color::Blue => (&mut self.blue, &mut self.red),
            Color::Red => (&mut self.red, &mut self.blue),
        };
        this[u].insert(v);
        this[v].insert(u);
        other[u].remove(&v);
        other[v].remove(&u);
    }

    pub fn color(&self, u: usize, v: usize) -> Option<Color> {
        if self.blue[u].contains(&v) {
            Some(Color::Blue)
        } else if self.red[u].contains(&v) {
            Some(Color::Red)
        } else {
            None
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.color(u, v).is_some()
    }

    pub fn blue_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.blue[u].iter().copied()
    }

    pub fn red_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.red[u].iter().copied()
    }

    /// Edges `(u, v, color)` with `u < v`, in node order.
    pub fn edges(&self) -> Vec<(usize, usize, Color)> {
        let mut out = Vec::new();
        for u in 0..self.node_count() {
            for &v in self.blue[u].range(u + 1..) {
                out.push((u, v, Color::Blue));
            }
            for &v in self.red[u].range(u + 1..) {
                out.push((u, v, Color::Red));
            }
        }
        out.sort_by_key(|&(u, v, _)| (u, v));
        out
    }

    /// Reads `b u v` / `r u v` edge lines and `node u` declarations, with `#`
    /// comments. Nodes are numbered in order of first appearance.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut pending: Vec<(usize, usize, usize, Color)> = Vec::new();
        let mut intern = |tok: &str, line: usize| -> Result<usize, GraphError> {
            if !is_valid_token(tok) {
                return Err(GraphError::InvalidToken {
                    line,
                    token: tok.to_string(),
                });
            }
            Ok(*index.entry(tok.to_string()).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            }))
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let parts: Vec<&str> = content.split_whitespace().collect();
            match parts.as_slice() {
                ["node", u] => {
                    intern(u, line)?;
                }
                [c @ ("b" | "r"), u, v] => {
                    if u == v {
                        return Err(GraphError::SelfLoop {
                            line,
                            token: u.to_string(),
                        });
                    }
                    let color = if *c == "b" { Color::Blue } else { Color::Red };
                    let (u, v) = (intern(u, line)?, intern(v, line)?);
                    pending.push((line, u, v, color));
                }
                _ => {
                    return Err(GraphError::Malformed {
                        line,
                        text: content.to_string(),
                    })
                }
            }
        }
        let mut g = BicoloredGraph::with_nodes(labels);
        for (line, u, v, color) in pending {
            if let Some(c) = g.color(u, v) {
                if c != color {
                    return Err(GraphError::ColorClash {
                        line,
                        u: g.labels[u].clone(),
                        v: g.labels[v].clone(),
                    });
                }
            }
            g.add_edge(u, v, color);
        }
        Ok(g)
    }

    pub fn require_node(&self, label: &str) -> Result<usize, GraphError> {
        self.node(label)
            .ok_or_else(|| GraphError::UnknownNode(label.to_string()))
    }
}

impl fmt::Display for BicoloredGraph {
    /// Writes the text format read by [`BicoloredGraph::parse`]: isolated
    /// nodes as `node` lines, then one line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in 0..self.node_count() {
            if self.blue[u].is_empty() && self.red[u].is_empty() {
                writeln!(f, "node {}", self.labels[u])?;
            }
        }
        for (u, v, c) in self.edges() {
            let tag = if c == Color::Blue { "b" } else { "r" };
            writeln!(f, "{tag} {} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }
}

/// Node label for hyperedge `i` in a line graph.
pub fn edge_label(i: usize) -> String {
    format!("e{i}")
}

/// The bicolored line graph: one node per hyperedge, blue when two edges
/// share `1..=q` vertices, red when they share more.
pub fn line_graph(h: &Hypergraph, q: usize) -> BicoloredGraph {
    let m = h.edge_count();
    let mut g = BicoloredGraph::with_nodes((0..m).map(edge_label).collect());
    for i in 0..m {
        for j in i + 1..m {
            match intersection_len(h.edge(i), h.edge(j)) {
                0 => {}
                s if s <= q => g.add_edge(i, j, Color::Blue),
                _ => g.add_edge(i, j, Color::Red),
            }
        }
    }
    g
}

pub const DEFAULT_PAFP_BUDGET: u64 = 10_000_000;

/// Exact PAFP by backtracking: returns a blue induced path from `u` to `v`
/// as a node sequence, or `None`. Neighbors are tried in index order, so the
/// answer is the lexicographically first such path found depth-first.
pub fn pafp_exact(
    g: &BicoloredGraph,
    u: usize,
    v: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>, PafpError> {
    let n = g.node_count();
    for x in [u, v] {
        if x >= n {
            return Err(PafpError::UnknownNode(x));
        }
    }
    if u == v {
        return Err(PafpError::SameEndpoints);
    }
    // excluded[w] > 0: w is on the path or adjacent to a path node other
    // than the last one.
    let mut excluded = vec![0u32; n];
    let mut path = vec![u];
    excluded[u] += 1;
    let mut spent = 0u64;
    let mut stack: Vec<Vec<usize>> = vec![g.blue_neighbors(u).collect()];
    while let Some(frontier) = stack.last_mut() {
        let Some(w) = frontier.first().copied() else {
            stack.pop();
            let last = path.pop().expect("path tracks stack");
            excluded[last] -= 1;
            if let Some(&prev) = path.last() {
                for x in g.blue_neighbors(prev).chain(g.red_neighbors(prev)) {
                    excluded[x] -= 1;
                }
            }
            continue;
        };
        frontier.remove(0);
        if excluded[w] > 0 {
            continue;
        }
        spent += 1;
        if spent > budget {
            return Err(PafpError::BudgetExceeded(budget));
        }
        if w == v {
            path.push(w);
            return Ok(Some(path));
        }
        let last = *path.last().expect("nonempty");
        for x in g.blue_neighbors(last).chain(g.red_neighbors(last)) {
            excluded[x] += 1;
        }
        excluded[w] += 1;
        path.push(w);
        stack.push(g.blue_neighbors(w).collect());
    }
    Ok(None)
}

/// Copy of `h` without the edges through `x` or `y`, except `e` and `f`.
/// Vertex ids are preserved; the surviving edges keep their relative order.
pub fn restrict_hypergraph(
    h: &Hypergraph,
    x: VertexId,
    y: VertexId,
    e: usize,
    f: usize,
) -> Result<Hypergraph, PafpError> {
    for i in [e, f] {
        if i >= h.edge_count() {
            return Err(HypergraphError::UnknownEdge(i).into());
        }
    }
    if !h.edge(e).contains(&x) {
        return Err(PafpError::NotOnEdge(h.token(x).to_string()));
    }
    if !h.edge(f).contains(&y) {
        return Err(PafpError::NotOnEdge(h.token(y).to_string()));
    }
    Ok(h.retain_edges(|i, edge| i == e || i == f || !(edge.contains(&x) || edge.contains(&y))))
}

/// Decides PAFP between hyperedges `e` and `f` of a `k`-uniform hypergraph
/// through `(k-2)`-linear reachability: for each `x ∈ e \ f` and
/// `y ∈ f \ e`, drop the other edges through `x` or `y` and ask whether `y`
/// lies in the component of `x`.
///
/// Endpoints are taken outside `e ∩ f`; a shared endpoint would admit the
/// single-edge path `(f)` or `(e)` and report pairs joined in red.
pub fn solve_pafp_via_hypergraph(h: &Hypergraph, e: usize, f: usize) -> Result<bool, PafpError> {
    for i in [e, f] {
        if i >= h.edge_count() {
            return Err(PafpError::UnknownNode(i));
        }
    }
    if e == f {
        return Err(PafpError::SameEndpoints);
    }
    if !h.is_uniform() {
        return Err(ArchipelagoError::NotUniform(h.rank()).into());
    }
    let (ee, ff) = (h.edge(e), h.edge(f));
    for &x in ee.iter().filter(|v| !ff.contains(v)) {
        for &y in ff.iter().filter(|v| !ee.contains(v)) {
            let restricted = restrict_hypergraph(h, x, y, e, f)?;
            if lcc(&restricted, x)?.contains(y) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Induced red paths on three nodes: `(a, b, c)` with `a < c`, `ab` and `bc`
/// red and `ac` absent. No bicolored line graph with `q = k-2` contains one,
/// since two tight intersections with a common edge force the outer edges to
/// meet.
pub fn screen_forbidden(g: &BicoloredGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 0..g.node_count() {
        let reds: Vec<usize> = g.red_neighbors(b).collect();
        for (i, &a) in reds.iter().enumerate() {
            for &c in &reds[i + 1..] {
                if !g.adjacent(a, c) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}
