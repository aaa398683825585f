//! Exhaustive ground truth for q-linear reachability on small instances.
//!
//! Everything here is a plain depth-first enumeration of edge sequences,
//! pruned as soon as a pairwise intersection constraint fails. It shares no
//! code with the archipelago construction and is meant to be slow and
//! obviously correct.

use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::path::EdgeSeq;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget of {0} path extensions exceeded")]
    BudgetExceeded(u64),
    #[error("inadmissible query: {0}")]
    BadQuery(&'static str),
}

/// Exhaustive path enumerator with a global extension budget.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub budget: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            budget: DEFAULT_BUDGET,
        }
    }
}

enum Flow {
    Continue,
    Stop,
}

/// Rules for one enumeration: which edges may start a path, which vertices
/// no later edge may touch, and the linearity bound.
struct Walk<'a> {
    h: &'a Hypergraph,
    allowed: Vec<usize>,
    q: usize,
    /// vertices forbidden in every edge after the first
    start_set: Vec<bool>,
    /// per vertex, number of path edges other than the last containing it
    used: Vec<u32>,
    path: Vec<usize>,
    spent: u64,
    budget: u64,
    max_len: usize,
}

impl<'a> Walk<'a> {
    fn new(
        h: &'a Hypergraph,
        allowed: Option<&[usize]>,
        q: usize,
        start: &VertexSet,
        budget: u64,
    ) -> Self {
        let mut start_set = vec![false; h.vertex_count()];
        for v in start.iter() {
            start_set[v.index()] = true;
        }
        Walk {
            h,
            allowed: allowed.map_or_else(|| (0..h.edge_count()).collect(), <[usize]>::to_vec),
            q,
            start_set,
            used: vec![0; h.vertex_count()],
            path: Vec::new(),
            spent: 0,
            budget,
            max_len: usize::MAX,
        }
    }

    fn overlap(&self, a: usize, b: usize) -> usize {
        let eb = self.h.edge(b);
        self.h.edge(a).iter().filter(|v| eb.contains(v)).count()
    }

    fn touches_start(&self, e: usize) -> usize {
        self.h
            .edge(e)
            .iter()
            .filter(|v| self.start_set[v.index()])
            .count()
    }

    fn can_extend(&self, e: usize) -> bool {
        if self.path.contains(&e) {
            return false;
        }
        match self.path.last() {
            None => self.touches_start(e) > 0,
            Some(&last) => {
                let edge = self.h.edge(e);
                self.touches_start(e) == 0
                    && edge.iter().all(|v| self.used[v.index()] == 0)
                    && (1..=self.q).contains(&self.overlap(last, e))
            }
        }
    }

    fn push(&mut self, e: usize) -> Result<(), OracleError> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(OracleError::BudgetExceeded(self.budget));
        }
        if let Some(&last) = self.path.last() {
            for v in self.h.edge(last) {
                self.used[v.index()] += 1;
            }
        }
        self.path.push(e);
        Ok(())
    }

    fn pop(&mut self) {
        self.path.pop();
        if let Some(&last) = self.path.last() {
            for v in self.h.edge(last) {
                self.used[v.index()] -= 1;
            }
        }
    }

    /// Calls `visit` on every valid nonempty path in depth-first,
    /// index-ordered preorder. `visit` decides whether to descend further.
    fn run(
        &mut self,
        visit: &mut dyn FnMut(&Walk<'_>) -> (bool, Flow),
    ) -> Result<Flow, OracleError> {
        if self.path.len() >= self.max_len {
            return Ok(Flow::Continue);
        }
        for i in 0..self.allowed.len() {
            let e = self.allowed[i];
            if !self.can_extend(e) {
                continue;
            }
            self.push(e)?;
            let (descend, flow) = visit(self);
            if let Flow::Stop = flow {
                self.pop();
                return Ok(Flow::Stop);
            }
            if descend {
                if let Flow::Stop = self.run(visit)? {
                    self.pop();
                    return Ok(Flow::Stop);
                }
            }
            self.pop();
        }
        Ok(Flow::Continue)
    }
}

/// Vertices joined to `x` by any chain of intersecting allowed edges.
fn plain_component(h: &Hypergraph, x: VertexId, allowed: &[usize]) -> usize {
    let mut seen = vec![false; h.vertex_count()];
    seen[x.index()] = true;
    let mut count = 1;
    let mut grew = true;
    while grew {
        grew = false;
        for &e in allowed {
            let edge = h.edge(e);
            if edge.iter().any(|v| seen[v.index()]) {
                for v in edge {
                    if !seen[v.index()] {
                        seen[v.index()] = true;
                        count += 1;
                        grew = true;
                    }
                }
            }
        }
    }
    count
}

impl Oracle {
    pub fn new(budget: u64) -> Self {
        Oracle { budget }
    }

    /// All vertices `y` with a q-linear path from `x` to `y`.
    pub fn lcc(&self, h: &Hypergraph, x: VertexId, q: usize) -> Result<VertexSet, OracleError> {
        self.lcc_within(h, x, q, None)
    }

    /// [`Oracle::lcc`] using only the edges in `allowed` (all when `None`).
    pub fn lcc_within(
        &self,
        h: &Hypergraph,
        x: VertexId,
        q: usize,
        allowed: Option<&[usize]>,
    ) -> Result<VertexSet, OracleError> {
        if q == 0 {
            return Err(OracleError::BadQuery("q must be at least 1"));
        }
        let mut walk = Walk::new(h, allowed, q, &VertexSet::singleton(x), self.budget);
        let ceiling = plain_component(h, x, &walk.allowed);
        let mut reached = vec![false; h.vertex_count()];
        reached[x.index()] = true;
        let mut count = 1;
        walk.run(&mut |w| {
            let last = *w.path.last().expect("nonempty");
            for v in w.h.edge(last) {
                if !reached[v.index()] {
                    reached[v.index()] = true;
                    count += 1;
                }
            }
            let flow = if count == ceiling {
                Flow::Stop
            } else {
                Flow::Continue
            };
            (true, flow)
        })?;
        Ok((0..h.vertex_count())
            .filter(|&v| reached[v])
            .map(|v| VertexId(v as u32))
            .collect())
    }

    /// Whether some q-linear path from `x` to `y` exists.
    pub fn reachable(
        &self,
        h: &Hypergraph,
        x: VertexId,
        y: VertexId,
        q: usize,
    ) -> Result<bool, OracleError> {
        Ok(self.lcc(h, x, q)?.contains(y))
    }

    /// Whether an `(X, Y)`-extendable path exists among the allowed edges.
    /// Requires `1 ≤ |X|, |Y| ≤ k-1` and `|X ∩ Y| ≤ k-2`.
    pub fn extendable_exists(
        &self,
        h: &Hypergraph,
        x: &VertexSet,
        y: &VertexSet,
        allowed: Option<&[usize]>,
    ) -> Result<bool, OracleError> {
        let k = h.rank();
        if x.is_empty() || y.is_empty() || x.len() > k - 1 || y.len() > k - 1 {
            return Err(OracleError::BadQuery("endpoint sizes must lie in [1, k-1]"));
        }
        let common = x.iter().filter(|&v| y.contains(v)).count();
        if common > k - 2 {
            return Err(OracleError::BadQuery(
                "endpoints share more than k-2 vertices",
            ));
        }
        if common > 0 {
            return Ok(true);
        }
        let mut walk = Walk::new(h, allowed, k - 2, x, self.budget);
        let mut found = false;
        walk.run(&mut |w| {
            let path = &w.path;
            let last = *path.last().expect("nonempty");
            if path.len() == 1 && w.touches_start(last) > k - 2 {
                return (false, Flow::Continue);
            }
            let hits = w.h.edge(last).iter().filter(|&&v| y.contains(v)).count();
            match hits {
                0 => (true, Flow::Continue),
                n if n <= k - 2 => {
                    found = true;
                    (false, Flow::Stop)
                }
                _ => (false, Flow::Continue),
            }
        })?;
        Ok(found)
    }

    /// Every q-linear path from `{x}` with at most `max_len` edges, the empty
    /// path included, in lexicographic order of edge indices.
    pub fn enumerate_paths(
        &self,
        h: &Hypergraph,
        x: VertexId,
        q: usize,
        max_len: usize,
    ) -> Result<Vec<EdgeSeq>, OracleError> {
        if q == 0 {
            return Err(OracleError::BadQuery("q must be at least 1"));
        }
        let mut walk = Walk::new(h, None, q, &VertexSet::singleton(x), self.budget);
        walk.max_len = max_len;
        let mut out = vec![EdgeSeq::empty()];
        walk.run(&mut |w| {
            out.push(EdgeSeq(w.path.clone()));
            (true, Flow::Continue)
        })?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{is_path_from_to, is_q_linear, PathQuery};

    fn graph(text: &str) -> Hypergraph {
        Hypergraph::parse(text).unwrap()
    }

    fn names(h: &Hypergraph, s: &VertexSet) -> Vec<String> {
        let mut v: Vec<String> = s.tokens(h).into_iter().map(String::from).collect();
        v.sort();
        v
    }

    #[test]
    fn isolated_source() {
        let h = Hypergraph::with_vertices(3, &["s"], &[vec!["a", "b", "c"]]).unwrap();
        let l = Oracle::default().lcc(&h, VertexId(0), 1).unwrap();
        assert_eq!(l, VertexSet::singleton(VertexId(0)));
    }

    #[test]
    fn single_edge() {
        let h = graph("k=3\nx a b\n");
        let l = Oracle::default().lcc(&h, VertexId(0), 1).unwrap();
        assert_eq!(names(&h, &l), vec!["a", "b", "x"]);
    }

    #[test]
    fn tight_overlap_blocks_reachability() {
        // x–y and y–z are each linearly connected, but every route from x to
        // z passes two edges sharing {1, 2}.
        let h = graph("k=3\nx 1 2\n1 2 z\n");
        let o = Oracle::default();
        let x = h.vertex("x").unwrap();
        let z = h.vertex("z").unwrap();
        assert!(!o.reachable(&h, x, z, 1).unwrap());
        assert!(o.reachable(&h, x, z, 2).unwrap());
        assert_eq!(names(&h, &o.lcc(&h, x, 1).unwrap()), vec!["1", "2", "x"]);
    }

    #[test]
    fn extendable_basic() {
        let h = graph("k=3\nx a b\nb c d\n");
        let o = Oracle::default();
        let s = |t: &[&str]| VertexSet::from_tokens(&h, t).unwrap();
        assert!(o
            .extendable_exists(&h, &s(&["x"]), &s(&["x", "a"]), None)
            .unwrap());
        // the only path to {a, b} uses x a b, which contains it
        assert!(!o
            .extendable_exists(&h, &s(&["x"]), &s(&["a", "b"]), None)
            .unwrap());
        assert!(o
            .extendable_exists(&h, &s(&["x"]), &s(&["a"]), None)
            .unwrap());
        assert!(o
            .extendable_exists(&h, &s(&["x"]), &s(&["c", "d"]), Some(&[0, 1]))
            .is_ok());
        assert!(!o
            .extendable_exists(&h, &s(&["x"]), &s(&["c", "d"]), None)
            .unwrap());
        assert!(o
            .extendable_exists(&h, &s(&["x"]), &s(&["c"]), None)
            .unwrap());
        assert!(!o
            .extendable_exists(&h, &s(&["x"]), &s(&["c"]), Some(&[0]))
            .unwrap());
        assert!(o
            .extendable_exists(&h, &s(&["x", "a", "b"]), &s(&["c"]), None)
            .is_err());
    }

    #[test]
    fn enumerate_examples() {
        let h = graph("k=3\nx a b\n");
        let o = Oracle::default();
        assert_eq!(
            o.enumerate_paths(&h, VertexId(0), 1, 0).unwrap(),
            vec![EdgeSeq::empty()]
        );
        assert_eq!(
            o.enumerate_paths(&h, VertexId(0), 1, 1).unwrap(),
            vec![EdgeSeq::empty(), EdgeSeq(vec![0])]
        );
        let chain = graph("k=3\nx a b\nb c d\nd e f\n");
        let paths = o.enumerate_paths(&chain, VertexId(0), 1, 10).unwrap();
        assert_eq!(paths.iter().filter(|p| !p.is_empty()).count(), 3);
        assert!(paths.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_aborts() {
        let h = graph("k=3\nx a b\nb c d\nd e f\n");
        assert_eq!(
            Oracle::new(2).lcc(&h, VertexId(0), 1),
            Err(OracleError::BudgetExceeded(2))
        );
    }

    /// Unpruned reference: every sequence of distinct edges, filtered by the
    /// path predicates.
    fn brute_lcc(h: &Hypergraph, x: VertexId, q: usize) -> VertexSet {
        fn rec(h: &Hypergraph, x: VertexId, q: usize, seq: &mut Vec<usize>, out: &mut VertexSet) {
            if !seq.is_empty() {
                let starts_at_x = h.edge(seq[0]).contains(&x)
                    && seq[1..].iter().all(|&e| !h.edge(e).contains(&x));
                if starts_at_x && is_q_linear(h, seq, q) {
                    for &e in seq.iter() {
                        for &v in h.edge(e) {
                            out.insert(v);
                        }
                    }
                }
            }
            for e in 0..h.edge_count() {
                if !seq.contains(&e) {
                    seq.push(e);
                    rec(h, x, q, seq, out);
                    seq.pop();
                }
            }
        }
        let mut out = VertexSet::singleton(x);
        rec(h, x, q, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let o = Oracle::default();
        for _ in 0..150 {
            let k = rng.gen_range(3..=4);
            let n = rng.gen_range(k..=8);
            let m = rng.gen_range(0..=6);
            let pool: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<Vec<String>> = (0..m)
                .map(|_| pool.choose_multiple(&mut rng, k).cloned().collect())
                .collect();
            let h = Hypergraph::with_vertices(k, &pool, &edges).unwrap();
            for q in 1..k {
                for x in h.vertices() {
                    assert_eq!(o.lcc(&h, x, q).unwrap(), brute_lcc(&h, x, q), "{h}");
                }
            }
        }
    }

    #[test]
    fn enumerated_paths_are_valid() {
        let h = graph("k=3\nx a b\nb c d\nx c e\nd e f\na f g\n");
        let x = h.vertex("x").unwrap();
        for p in Oracle::default().enumerate_paths(&h, x, 1, 6).unwrap() {
            assert!(is_q_linear(&h, p.as_slice(), 1));
            if let Some(&last) = p.as_slice().last() {
                let y: Vec<VertexId> = h.edge(last).iter().copied().filter(|&v| v != x).collect();
                let y = y.into_iter().find(|v| {
                    !p.as_slice()[..p.len() - 1]
                        .iter()
                        .any(|&e| h.edge(e).contains(v))
                });
                if let Some(y) = y {
                    assert!(is_path_from_to(
                        &h,
                        p.as_slice(),
                        &PathQuery::vertices(x, y, 1)
                    ));
                }
            }
        }
    }
}
