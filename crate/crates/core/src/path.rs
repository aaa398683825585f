//! Predicates and constructors for q-linear paths, paths from `X` to `Y` and
//! `(X, Y)`-extendable paths.
//!
//! The composition operations check their preconditions eagerly and return a
//! [`ContractError`] naming the violated clause instead of building an
//! unchecked sequence.

use std::fmt;

use thiserror::Error;

use crate::hypergraph::{intersection_len, Hypergraph, VertexId, VertexSet};

/// An ordered sequence of edge indices. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSeq(pub Vec<usize>);

impl EdgeSeq {
    pub fn empty() -> Self {
        EdgeSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `V(P)`: the union of all edges in the sequence.
    pub fn vertex_set(&self, h: &Hypergraph) -> VertexSet {
        self.0
            .iter()
            .flat_map(|&i| h.edge(i).iter().copied())
            .collect()
    }

    /// Concatenation `self ⊕ other`.
    pub fn concat(&self, other: &EdgeSeq) -> EdgeSeq {
        EdgeSeq(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<Vec<usize>> for EdgeSeq {
    fn from(v: Vec<usize>) -> Self {
        EdgeSeq(v)
    }
}

impl fmt::Display for EdgeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Endpoints and linearity bound of a from-`X`-to-`Y` query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathQuery {
    pub from: VertexSet,
    pub to: VertexSet,
    pub q: usize,
}

impl PathQuery {
    pub fn new(from: VertexSet, to: VertexSet, q: usize) -> Self {
        PathQuery { from, to, q }
    }

    pub fn vertices(x: VertexId, y: VertexId, q: usize) -> Self {
        PathQuery::new(VertexSet::singleton(x), VertexSet::singleton(y), q)
    }

    /// Nonempty endpoints, `q ≥ 1` and `|X ∩ Y| ≤ q`.
    pub fn is_admissible(&self) -> bool {
        self.q >= 1
            && !self.from.is_empty()
            && !self.to.is_empty()
            && self.from.intersection_len(self.to.as_slice()) <= self.q
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error("edge index {0} out of range")]
    InvalidEdge(usize),
    #[error("{0} is not q-linear")]
    NotQLinear(&'static str),
    #[error("path must be nonempty")]
    EmptyPath,
    #[error("endpoint sets must be disjoint")]
    EndpointsIntersect,
    #[error("first edge does not meet X")]
    FirstEdgeMissesX,
    #[error("last edge does not meet Y")]
    LastEdgeMissesY,
    #[error("endpoint set {0} has an inadmissible size")]
    BadEndpointSize(&'static str),
    #[error("{0} is not extendable between its endpoint sets")]
    NotExtendable(&'static str),
    #[error("A ∪ V(P) ∪ B and C ∪ V(Q) ∪ D are not disjoint")]
    SidesNotDisjoint,
    #[error("bridge edge meets A ∪ V(P) ∪ B outside exactly B")]
    BridgeLeft,
    #[error("bridge edge meets C ∪ V(Q) ∪ D outside exactly C")]
    BridgeRight,
    #[error("widened set is not a superset of the original")]
    NotSuperset,
    #[error("widened set exceeds k-1 vertices")]
    WideningTooLarge,
    #[error("widened set meets A ∪ V(P) ∪ B beyond the original set")]
    WideningOverlaps,
}

fn check_indices(h: &Hypergraph, p: &[usize]) -> Result<(), ContractError> {
    match p.iter().find(|&&i| i >= h.edge_count()) {
        Some(&i) => Err(ContractError::InvalidEdge(i)),
        None => Ok(()),
    }
}

/// True iff consecutive edges meet in `1..=q` vertices and all other pairs
/// are disjoint. Out-of-range indices make the sequence invalid.
pub fn is_q_linear(h: &Hypergraph, p: &[usize], q: usize) -> bool {
    if check_indices(h, p).is_err() {
        return false;
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let s = intersection_len(h.edge(p[i]), h.edge(p[j]));
            let ok = if j == i + 1 {
                (1..=q).contains(&s)
            } else {
                s == 0
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// True iff `p` is a q-linear path from `X` to `Y`: empty when `X ∩ Y ≠ ∅`,
/// otherwise nonempty with `X` met only by the first edge and `Y` only by the
/// last.
pub fn is_path_from_to(h: &Hypergraph, p: &[usize], query: &PathQuery) -> bool {
    if !query.is_admissible() || !is_q_linear(h, p, query.q) {
        return false;
    }
    let (x, y) = (&query.from, &query.to);
    if x.meets(y.as_slice()) {
        return p.is_empty();
    }
    let Some((&last, _)) = p.split_last() else {
        return false;
    };
    if !x.meets(h.edge(p[0])) || !y.meets(h.edge(last)) {
        return false;
    }
    let n = p.len();
    p.iter()
        .enumerate()
        .all(|(i, &e)| (i == 0 || !x.meets(h.edge(e))) && (i == n - 1 || !y.meets(h.edge(e))))
}

fn endpoint_sizes_ok(k: usize, x: &VertexSet, y: &VertexSet) -> bool {
    (1..k).contains(&x.len())
        && (1..k).contains(&y.len())
        && x.intersection_len(y.as_slice()) <= k - 2
}

/// True iff `p` is a `(k-2)`-linear path from `X` to `Y` whose first edge
/// meets `X` in at most `k-2` vertices and whose last edge meets `Y` in at
/// most `k-2` vertices. Inadmissible endpoint sets yield `false`.
pub fn is_extendable(h: &Hypergraph, p: &[usize], x: &VertexSet, y: &VertexSet) -> bool {
    let k = h.rank();
    if !endpoint_sizes_ok(k, x, y) {
        return false;
    }
    let query = PathQuery::new(x.clone(), y.clone(), k - 2);
    if !is_path_from_to(h, p, &query) {
        return false;
    }
    match (p.first(), p.last()) {
        (Some(&first), Some(&last)) => {
            x.intersection_len(h.edge(first)) <= k - 2 && y.intersection_len(h.edge(last)) <= k - 2
        }
        _ => true,
    }
}

/// Extracts the q-linear path from `X` to `Y` contained in `p`: it ends at
/// the first edge meeting `Y` and starts at the last edge before it that
/// meets `X`.
pub fn extract_subpath(
    h: &Hypergraph,
    p: &[usize],
    x: &VertexSet,
    y: &VertexSet,
    q: usize,
) -> Result<EdgeSeq, ContractError> {
    check_indices(h, p)?;
    if p.is_empty() {
        return Err(ContractError::EmptyPath);
    }
    if !is_q_linear(h, p, q) {
        return Err(ContractError::NotQLinear("P"));
    }
    if x.meets(y.as_slice()) {
        return Err(ContractError::EndpointsIntersect);
    }
    if !x.meets(h.edge(p[0])) {
        return Err(ContractError::FirstEdgeMissesX);
    }
    if !y.meets(h.edge(p[p.len() - 1])) {
        return Err(ContractError::LastEdgeMissesY);
    }
    let s = p
        .iter()
        .position(|&e| y.meets(h.edge(e)))
        .expect("last edge meets Y");
    let r = (0..=s)
        .rev()
        .find(|&i| x.meets(h.edge(p[i])))
        .expect("first edge meets X");
    Ok(EdgeSeq(p[r..=s].to_vec()))
}

/// `A ∪ V(P) ∪ B`.
fn span(h: &Hypergraph, p: &[usize], a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.iter()
        .chain(b.iter())
        .chain(p.iter().flat_map(|&i| h.edge(i).iter().copied()))
        .collect()
}

/// Joins an `(A, B)`-extendable path and a `(C, D)`-extendable path through a
/// bridge edge meeting the left side exactly in `B` and the right side
/// exactly in `C`. The result is `(A, D)`-extendable.
#[allow(clippy::too_many_arguments)]
pub fn compose(
    h: &Hypergraph,
    p: &EdgeSeq,
    bridge: usize,
    q: &EdgeSeq,
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    d: &VertexSet,
) -> Result<EdgeSeq, ContractError> {
    check_indices(h, p.as_slice())?;
    check_indices(h, q.as_slice())?;
    check_indices(h, &[bridge])?;
    let k = h.rank();
    if !endpoint_sizes_ok(k, a, b) {
        return Err(ContractError::BadEndpointSize("A/B"));
    }
    if !endpoint_sizes_ok(k, c, d) {
        return Err(ContractError::BadEndpointSize("C/D"));
    }
    if !is_extendable(h, p.as_slice(), a, b) {
        return Err(ContractError::NotExtendable("P"));
    }
    if !is_extendable(h, q.as_slice(), c, d) {
        return Err(ContractError::NotExtendable("Q"));
    }
    let left = span(h, p.as_slice(), a, b);
    let right = span(h, q.as_slice(), c, d);
    if left.meets(right.as_slice()) {
        return Err(ContractError::SidesNotDisjoint);
    }
    let e = h.edge(bridge);
    if left.intersection(e) != *b {
        return Err(ContractError::BridgeLeft);
    }
    if right.intersection(e) != *c {
        return Err(ContractError::BridgeRight);
    }
    let mut out = p.0.clone();
    out.push(bridge);
    out.extend_from_slice(q.as_slice());
    Ok(EdgeSeq(out))
}

fn check_widening(
    h: &Hypergraph,
    p: &EdgeSeq,
    a: &VertexSet,
    b: &VertexSet,
    original: &VertexSet,
    widened: &VertexSet,
) -> Result<(), ContractError> {
    check_indices(h, p.as_slice())?;
    if !endpoint_sizes_ok(h.rank(), a, b) {
        return Err(ContractError::BadEndpointSize("A/B"));
    }
    if !is_extendable(h, p.as_slice(), a, b) {
        return Err(ContractError::NotExtendable("P"));
    }
    if !original.is_subset(widened.as_slice()) {
        return Err(ContractError::NotSuperset);
    }
    if widened.len() > h.rank() - 1 {
        return Err(ContractError::WideningTooLarge);
    }
    if span(h, p.as_slice(), a, b).intersection(widened.as_slice()) != *original {
        return Err(ContractError::WideningOverlaps);
    }
    Ok(())
}

/// Widens the target set `B` to `B' ⊇ B` that meets `A ∪ V(P) ∪ B` only in
/// `B`, and reports whether `P` is `(A, B')`-extendable (always, once the
/// preconditions hold).
pub fn widen_endpoint(
    h: &Hypergraph,
    p: &EdgeSeq,
    a: &VertexSet,
    b: &VertexSet,
    b_wide: &VertexSet,
) -> Result<bool, ContractError> {
    check_widening(h, p, a, b, b, b_wide)?;
    Ok(is_extendable(h, p.as_slice(), a, b_wide))
}

/// Source-side counterpart of [`widen_endpoint`].
pub fn widen_start(
    h: &Hypergraph,
    p: &EdgeSeq,
    a: &VertexSet,
    a_wide: &VertexSet,
    b: &VertexSet,
) -> Result<bool, ContractError> {
    check_widening(h, p, a, b, a, a_wide)?;
    Ok(is_extendable(h, p.as_slice(), a_wide, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3() -> Hypergraph {
        Hypergraph::parse("k=3\n1 2 3\n3 4 5\n2 3 4\n5 6 1\n").unwrap()
    }

    fn set(h: &Hypergraph, toks: &[&str]) -> VertexSet {
        VertexSet::from_tokens(h, toks).unwrap()
    }

    #[test]
    fn q_linear_examples() {
        let h = h3();
        assert!(is_q_linear(&h, &[], 1));
        assert!(is_q_linear(&h, &[0, 1], 1));
        assert!(!is_q_linear(&h, &[0, 2], 1));
        assert!(is_q_linear(&h, &[0, 2], 2));
        assert!(!is_q_linear(&h, &[0, 1, 3], 1));
        assert!(!is_q_linear(&h, &[0, 9], 1));
    }

    #[test]
    fn from_to_examples() {
        let h = h3();
        let q = |x: &[&str], y: &[&str]| PathQuery::new(set(&h, x), set(&h, y), 1);
        assert!(is_path_from_to(&h, &[], &q(&["1"], &["1"])));
        assert!(!is_path_from_to(&h, &[0], &q(&["1"], &["1"])));
        assert!(is_path_from_to(&h, &[0, 1], &q(&["1"], &["5"])));
        assert!(!is_path_from_to(&h, &[0, 1], &q(&["1"], &["3"])));
        assert!(!is_path_from_to(&h, &[], &q(&["1"], &["5"])));
        // |X ∩ Y| > q makes the query inadmissible
        assert!(!is_path_from_to(&h, &[], &q(&["1", "2"], &["1", "2"])));
    }

    #[test]
    fn extendable_rejects_last_edge_containing_target() {
        let h = Hypergraph::parse("k=4\nx a b c\nc d e f\n").unwrap();
        let x = set(&h, &["x"]);
        let y = set(&h, &["d", "e", "f"]);
        assert!(is_path_from_to(
            &h,
            &[0, 1],
            &PathQuery::new(x.clone(), y.clone(), 2)
        ));
        assert!(!is_extendable(&h, &[0, 1], &x, &y));
        // a two-vertex target inside the last edge is fine
        assert!(is_extendable(&h, &[0, 1], &x, &set(&h, &["d", "e"])));
    }

    #[test]
    fn extendable_empty_path_when_endpoints_meet() {
        let h = h3();
        assert!(is_extendable(
            &h,
            &[],
            &set(&h, &["1"]),
            &set(&h, &["1", "2"])
        ));
    }

    #[test]
    fn extract_subpath_examples() {
        let h = Hypergraph::parse("k=3\n1 2 p\n2 3 q\n3 4 r\n4 5 s\n").unwrap();
        let x = set(&h, &["1"]);
        let y = set(&h, &["4"]);
        assert_eq!(
            extract_subpath(&h, &[0, 1, 2], &x, &y, 1).unwrap(),
            EdgeSeq(vec![0, 1, 2])
        );
        assert_eq!(
            extract_subpath(&h, &[0, 1, 2, 3], &x, &y, 1).unwrap(),
            EdgeSeq(vec![0, 1, 2])
        );
        let x2 = set(&h, &["2"]);
        assert_eq!(
            extract_subpath(&h, &[0, 1, 2, 3], &x2, &set(&h, &["5"]), 1).unwrap(),
            EdgeSeq(vec![1, 2, 3])
        );
        assert_eq!(
            extract_subpath(&h, &[], &x, &y, 1),
            Err(ContractError::EmptyPath)
        );
        assert_eq!(
            extract_subpath(&h, &[1, 2], &x, &y, 1),
            Err(ContractError::FirstEdgeMissesX)
        );
    }

    #[test]
    fn compose_empty_base_case() {
        let h = Hypergraph::parse("k=3\na b c\n").unwrap();
        let (a, b) = (set(&h, &["a"]), set(&h, &["a"]));
        let (c, d) = (set(&h, &["b", "c"]), set(&h, &["b"]));
        let r = compose(&h, &EdgeSeq::empty(), 0, &EdgeSeq::empty(), &a, &b, &c, &d).unwrap();
        assert_eq!(r, EdgeSeq(vec![0]));
        assert!(is_extendable(&h, r.as_slice(), &a, &d));
    }

    #[test]
    fn compose_rejects_overlapping_sides() {
        let h = Hypergraph::parse("k=3\na b c\n").unwrap();
        let a = set(&h, &["a"]);
        let c = set(&h, &["a", "b"]);
        let d = set(&h, &["b"]);
        assert_eq!(
            compose(&h, &EdgeSeq::empty(), 0, &EdgeSeq::empty(), &a, &a, &c, &d),
            Err(ContractError::SidesNotDisjoint)
        );
    }

    #[test]
    fn widen_examples() {
        let h = Hypergraph::parse("k=4\nx a b c\nc d e f\nz w\n").unwrap();
        let p = EdgeSeq(vec![0, 1]);
        let a = set(&h, &["x"]);
        let b = set(&h, &["e"]);
        assert_eq!(widen_endpoint(&h, &p, &a, &b, &b), Ok(true));
        assert_eq!(
            widen_endpoint(&h, &p, &a, &b, &set(&h, &["e", "z"])),
            Ok(true)
        );
        assert_eq!(
            widen_endpoint(&h, &p, &a, &b, &set(&h, &["e", "d"])),
            Err(ContractError::WideningOverlaps)
        );
        assert_eq!(
            widen_endpoint(&h, &p, &a, &b, &set(&h, &["z"])),
            Err(ContractError::NotSuperset)
        );
        assert_eq!(widen_start(&h, &p, &a, &set(&h, &["x", "w"]), &b), Ok(true));
    }
}
