//! Archipelago decomposition of the `(k-2)`-linear connected component of a
//! source vertex in a `k`-uniform hypergraph.
//!
//! The component is grown one edge at a time. Accepted vertices are split
//! into disjoint islands, each entered through an entry set (the source
//! alone for island 1, `k-1` vertices for every other island). While only
//! "new crossing" and "other" edges are accepted the islands form an
//! arborescence rooted at island 1, stored as a parent array. Once neither
//! kind remains, crossing edges between existing islands are accepted and
//! the leftover edges are exactly the cut and exterior ones.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::path::EdgeSeq;

/// Island identifier, assigned in creation order starting at 1. After a
/// merge the surviving island keeps the id of the lowest common ancestor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IslandId(pub usize);

impl IslandId {
    pub const ROOT: IslandId = IslandId(1);

    fn slot(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for IslandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Island {
    pub id: IslandId,
    /// Member vertices in insertion order.
    pub vertices: Vec<VertexId>,
    pub entry: VertexSet,
}

impl Island {
    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }
}

/// Relation of an unaccepted edge to the current archipelago.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    /// Disjoint from every island.
    Exterior,
    /// Meets the archipelago in exactly one vertex.
    NewCrossing,
    /// One vertex of some island plus the full entry of another island.
    Crossing,
    /// A `(k-1)`-entry plus one vertex outside the archipelago.
    Cut,
    Other,
}

/// The tri-partition of the edge list produced by
/// [`partition_archipelago`]. Each list is sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgePartition {
    pub archipelago: Vec<usize>,
    pub cut: Vec<usize>,
    pub exterior: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArchipelagoError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("hypergraph is not {0}-uniform; uniformize it first")]
    NotUniform(usize),
    #[error("edge {0} out of range")]
    UnknownEdge(usize),
    #[error("edge {0} is already accepted")]
    AlreadyAccepted(usize),
    #[error("edge {edge} has type {found:?}, expected {expected:?}")]
    WrongClass {
        edge: usize,
        expected: EdgeClass,
        found: EdgeClass,
    },
    #[error("vertex `{0}` is not in the linear connected component")]
    OutsideComponent(String),
    #[error("witness search exceeded its budget of {0} extensions")]
    SearchBudget(u64),
}

/// Mutable archipelago state over a fixed hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Archipelago {
    k: usize,
    source: VertexId,
    island_of: Vec<Option<IslandId>>,
    entry_mark: Vec<bool>,
    islands: Vec<Option<Island>>,
    parent: Vec<Option<IslandId>>,
    accepted: Vec<bool>,
    crossing_arcs: Vec<(IslandId, IslandId)>,
    size: usize,
}

impl Archipelago {
    /// A single empty island `{x*}` with entry `{x*}` and no accepted edge.
    pub fn new(h: &Hypergraph, source: VertexId) -> Result<Self, ArchipelagoError> {
        if source.index() >= h.vertex_count() {
            return Err(ArchipelagoError::UnknownVertex(format!("#{}", source.0)));
        }
        let n = h.vertex_count();
        let mut island_of = vec![None; n];
        let mut entry_mark = vec![false; n];
        island_of[source.index()] = Some(IslandId::ROOT);
        entry_mark[source.index()] = true;
        Ok(Archipelago {
            k: h.rank(),
            source,
            island_of,
            entry_mark,
            islands: vec![Some(Island {
                id: IslandId::ROOT,
                vertices: vec![source],
                entry: VertexSet::singleton(source),
            })],
            parent: vec![None],
            accepted: vec![false; h.edge_count()],
            crossing_arcs: Vec::new(),
            size: 1,
        })
    }

    /// Token-based variant of [`Archipelago::new`].
    pub fn init(h: &Hypergraph, source: &str) -> Result<Self, ArchipelagoError> {
        let v = h
            .vertex(source)
            .ok_or_else(|| ArchipelagoError::UnknownVertex(source.to_string()))?;
        Self::new(h, v)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn island_of(&self, v: VertexId) -> Option<IslandId> {
        self.island_of.get(v.index()).copied().flatten()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.island_of(v).is_some()
    }

    pub fn is_entry_vertex(&self, v: VertexId) -> bool {
        self.entry_mark.get(v.index()).copied().unwrap_or(false)
    }

    /// `V(A)`, sorted by vertex id.
    pub fn vertex_set(&self) -> VertexSet {
        self.island_of
            .iter()
            .enumerate()
            .filter(|(_, i)| i.is_some())
            .map(|(v, _)| VertexId(v as u32))
            .collect()
    }

    /// Number of vertices in `V(A)`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Live islands in id order.
    pub fn islands(&self) -> impl Iterator<Item = &Island> {
        self.islands.iter().flatten()
    }

    pub fn island(&self, id: IslandId) -> Option<&Island> {
        self.islands.get(id.slot()).and_then(Option::as_ref)
    }

    /// Parent of `id` in the island arborescence; `None` for the root.
    pub fn parent(&self, id: IslandId) -> Option<IslandId> {
        self.parent.get(id.slot()).copied().flatten()
    }

    pub fn is_accepted(&self, e: usize) -> bool {
        self.accepted.get(e).copied().unwrap_or(false)
    }

    /// `E(A)`, sorted.
    pub fn accepted_edges(&self) -> Vec<usize> {
        (0..self.accepted.len())
            .filter(|&e| self.accepted[e])
            .collect()
    }

    /// Island arcs contributed by crossing edges accepted in the second
    /// phase. They play no part in the algorithm and are kept for display.
    pub fn crossing_arcs(&self) -> &[(IslandId, IslandId)] {
        &self.crossing_arcs
    }

    /// Entries of size `k-1`, i.e. of every island except the root.
    pub fn proper_entries(&self) -> Vec<VertexSet> {
        self.islands()
            .filter(|i| i.id != IslandId::ROOT)
            .map(|i| i.entry.clone())
            .collect()
    }

    /// The `A`-type of an unaccepted edge, decided by the first matching
    /// clause among exterior, new crossing, crossing, cut and other.
    pub fn classify(&self, h: &Hypergraph, e: usize) -> EdgeClass {
        let edge = h.edge(e);
        let k = self.k;
        let mut inside = 0;
        for &v in edge {
            if self.contains(v) {
                inside += 1;
            }
        }
        match inside {
            0 => return EdgeClass::Exterior,
            1 => return EdgeClass::NewCrossing,
            _ => {}
        }
        if edge.len() != k {
            return EdgeClass::Other;
        }
        // An edge holds at most one full (k-1)-entry since entries are
        // disjoint and 2(k-1) > k.
        let full_entry = self.full_entry_in(edge);
        match (inside, full_entry) {
            (n, Some(j)) if n == k => {
                let rest = edge
                    .iter()
                    .copied()
                    .find(|&v| !(self.is_entry_vertex(v) && self.island_of(v) == Some(j)))
                    .expect("one vertex outside the entry");
                if self.island_of(rest) != Some(j) {
                    EdgeClass::Crossing
                } else {
                    EdgeClass::Other
                }
            }
            (n, Some(_)) if n == k - 1 => EdgeClass::Cut,
            _ => EdgeClass::Other,
        }
    }

    /// The island whose `(k-1)`-entry is contained in `edge`, if any.
    fn full_entry_in(&self, edge: &[VertexId]) -> Option<IslandId> {
        for &v in edge {
            if !self.is_entry_vertex(v) {
                continue;
            }
            let j = self.island_of(v)?;
            if j == IslandId::ROOT {
                continue;
            }
            let entry = &self.island(j)?.entry;
            if entry.is_subset(edge) {
                return Some(j);
            }
        }
        None
    }

    fn expect_class(
        &self,
        h: &Hypergraph,
        e: usize,
        expected: EdgeClass,
    ) -> Result<(), ArchipelagoError> {
        if e >= h.edge_count() {
            return Err(ArchipelagoError::UnknownEdge(e));
        }
        if self.accepted[e] {
            return Err(ArchipelagoError::AlreadyAccepted(e));
        }
        let found = self.classify(h, e);
        if found != expected {
            return Err(ArchipelagoError::WrongClass {
                edge: e,
                expected,
                found,
            });
        }
        Ok(())
    }

    /// Accepts a new-crossing edge: its `k-1` unseen vertices become a new
    /// empty island, hung below the island owning the shared vertex.
    pub fn add_new_crossing(
        &mut self,
        h: &Hypergraph,
        e: usize,
    ) -> Result<IslandId, ArchipelagoError> {
        self.expect_class(h, e, EdgeClass::NewCrossing)?;
        let edge = h.edge(e);
        let anchor = edge
            .iter()
            .find_map(|&v| self.island_of(v))
            .expect("new-crossing edge meets one island");
        let id = IslandId(self.islands.len() + 1);
        let fresh: Vec<VertexId> = edge
            .iter()
            .copied()
            .filter(|&v| !self.contains(v))
            .collect();
        for &v in &fresh {
            self.island_of[v.index()] = Some(id);
            self.entry_mark[v.index()] = true;
        }
        self.size += fresh.len();
        self.islands.push(Some(Island {
            id,
            entry: fresh.iter().copied().collect(),
            vertices: fresh,
        }));
        self.parent.push(Some(anchor));
        self.accepted[e] = true;
        Ok(id)
    }

    /// Lowest common ancestor of `ids` in the island arborescence.
    pub fn lca(&self, ids: &[IslandId]) -> IslandId {
        assert!(!ids.is_empty(), "lca of an empty set");
        let first = self.root_path(ids[0]);
        let mut depth = first.len();
        for &id in &ids[1..] {
            let other = self.root_path(id);
            let common = first.iter().zip(&other).take_while(|(a, b)| a == b).count();
            depth = depth.min(common);
        }
        first[depth - 1]
    }

    /// Islands from the root down to `id`, inclusive.
    fn root_path(&self, id: IslandId) -> Vec<IslandId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Accepts an "other" edge. The islands it meets, together with every
    /// island on the arborescence paths from their lowest common ancestor
    /// down to them, are merged into that ancestor, which keeps its entry.
    /// Unseen vertices of the edge join the merged island. Returns the
    /// surviving island.
    pub fn add_other(&mut self, h: &Hypergraph, e: usize) -> Result<IslandId, ArchipelagoError> {
        self.expect_class(h, e, EdgeClass::Other)?;
        let edge = h.edge(e);
        let met: BTreeSet<IslandId> = edge.iter().filter_map(|&v| self.island_of(v)).collect();
        let met: Vec<IslandId> = met.into_iter().collect();
        let top = self.lca(&met);

        let mut merged: BTreeSet<IslandId> = BTreeSet::new();
        for &i in &met {
            let mut cur = i;
            while cur != top {
                merged.insert(cur);
                cur = self.parent(cur).expect("lca is an ancestor");
            }
        }

        let mut absorbed = Vec::new();
        for &j in &merged {
            let island = self.islands[j.slot()]
                .take()
                .expect("merged island is live");
            for &v in &island.entry {
                self.entry_mark[v.index()] = false;
            }
            for &v in &island.vertices {
                self.island_of[v.index()] = Some(top);
            }
            absorbed.extend(island.vertices);
            self.parent[j.slot()] = None;
        }
        for slot in 0..self.parent.len() {
            if let Some(p) = self.parent[slot] {
                if merged.contains(&p) {
                    self.parent[slot] = Some(top);
                }
            }
        }
        let fresh: Vec<VertexId> = edge
            .iter()
            .copied()
            .filter(|&v| !self.contains(v))
            .collect();
        for &v in &fresh {
            self.island_of[v.index()] = Some(top);
        }
        self.size += fresh.len();
        let target = self.islands[top.slot()].as_mut().expect("lca is live");
        target.vertices.extend(absorbed);
        target.vertices.extend(fresh);
        self.accepted[e] = true;
        Ok(top)
    }

    /// Accepts a crossing edge between existing islands. Islands and entries
    /// are unchanged; the arc is recorded.
    pub fn add_crossing(&mut self, h: &Hypergraph, e: usize) -> Result<(), ArchipelagoError> {
        self.expect_class(h, e, EdgeClass::Crossing)?;
        let edge = h.edge(e);
        let to = self
            .full_entry_in(edge)
            .expect("crossing edge holds an entry");
        let from = edge
            .iter()
            .find_map(|&v| self.island_of(v).filter(|&i| i != to))
            .expect("crossing edge leaves the target island");
        self.accepted[e] = true;
        self.crossing_arcs.push((from, to));
        Ok(())
    }

    /// Checks the structural invariants: islands are disjoint and agree with
    /// the vertex map, entries have the right sizes and agree with the entry
    /// marks, and the parent array is a tree rooted at island 1.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen = 0usize;
        for island in self.islands() {
            for &v in &island.vertices {
                if self.island_of(v) != Some(island.id) {
                    return Err(format!(
                        "vertex {} listed in {} but mapped elsewhere",
                        v.0, island.id
                    ));
                }
            }
            seen += island.vertices.len();
            if island.vertex_set().len() != island.vertices.len() {
                return Err(format!("{} lists a vertex twice", island.id));
            }
            if !island.entry.is_subset(island.vertex_set().as_slice()) {
                return Err(format!("entry of {} is not inside it", island.id));
            }
            let want = if island.id == IslandId::ROOT {
                1
            } else {
                self.k - 1
            };
            if island.entry.len() != want {
                return Err(format!(
                    "entry of {} has size {}",
                    island.id,
                    island.entry.len()
                ));
            }
            for &v in &island.vertices {
                if self.is_entry_vertex(v) != island.entry.contains(v) {
                    return Err(format!("entry mark of vertex {} is stale", v.0));
                }
            }
        }
        if seen != self.size || self.island_of.iter().filter(|i| i.is_some()).count() != seen {
            return Err("islands do not cover the marked vertices exactly".into());
        }
        let root = self.island(IslandId::ROOT).ok_or("island 1 is gone")?;
        if root.entry.as_slice() != [self.source] {
            return Err("island 1 entry is not the source".into());
        }
        if self.parent(IslandId::ROOT).is_some() {
            return Err("island 1 has a parent".into());
        }
        // 0 unvisited, 1 on the current parent chain, 2 known to reach island 1
        let mut state = vec![0u8; self.islands.len() + 1];
        state[IslandId::ROOT.slot()] = 2;
        let mut chain = Vec::new();
        for island in self.islands() {
            let mut cur = island.id;
            while state[cur.slot()] == 0 {
                state[cur.slot()] = 1;
                chain.push(cur);
                let p = self
                    .parent(cur)
                    .ok_or_else(|| format!("{} has no parent", cur))?;
                if self.island(p).is_none() {
                    return Err(format!("{} points to dead island {}", cur, p));
                }
                cur = p;
            }
            if state[cur.slot()] == 1 {
                return Err(format!("parent cycle through {}", cur));
            }
            for id in chain.drain(..) {
                state[id.slot()] = 2;
            }
        }
        if self
            .crossing_arcs
            .iter()
            .any(|&(_, to)| to == IslandId::ROOT)
        {
            return Err("crossing arc into island 1".into());
        }
        Ok(())
    }

    /// Searches `E(A)` for a `(k-2)`-linear path from the source to
    /// `target` by depth-first backtracking, trying edges closer to the
    /// target first. At most `budget` extensions are attempted.
    pub fn witness_path(
        &self,
        h: &Hypergraph,
        target: VertexId,
        budget: u64,
    ) -> Result<EdgeSeq, ArchipelagoError> {
        if !self.contains(target) {
            return Err(ArchipelagoError::OutsideComponent(
                h.token(target).to_string(),
            ));
        }
        if target == self.source {
            return Ok(EdgeSeq::empty());
        }
        WitnessSearch::new(self, h, target).run(budget)
    }
}

struct WitnessSearch<'a> {
    h: &'a Hypergraph,
    source: VertexId,
    target: VertexId,
    q: usize,
    /// accepted edges ordered by distance to the target in the edge graph
    order: Vec<usize>,
    /// how many path edges before the last one cover each vertex
    blocked: Vec<u32>,
}

impl<'a> WitnessSearch<'a> {
    fn new(a: &Archipelago, h: &'a Hypergraph, target: VertexId) -> Self {
        let edges = a.accepted_edges();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.vertex_count()];
        for &e in &edges {
            for &v in h.edge(e) {
                incident[v.index()].push(e);
            }
        }
        // BFS over edges sharing a vertex, starting at the target's edges.
        let mut dist = vec![usize::MAX; h.edge_count()];
        let mut queue = std::collections::VecDeque::new();
        for &e in &incident[target.index()] {
            dist[e] = 0;
            queue.push_back(e);
        }
        while let Some(e) = queue.pop_front() {
            for &v in h.edge(e) {
                for &f in &incident[v.index()] {
                    if dist[f] == usize::MAX {
                        dist[f] = dist[e] + 1;
                        queue.push_back(f);
                    }
                }
            }
        }
        let mut order: Vec<usize> = edges
            .into_iter()
            .filter(|&e| dist[e] != usize::MAX)
            .collect();
        order.sort_by_key(|&e| (dist[e], e));
        WitnessSearch {
            h,
            source: a.source,
            target,
            q: a.k - 2,
            order,
            blocked: vec![0; h.vertex_count()],
        }
    }

    fn run(mut self, budget: u64) -> Result<EdgeSeq, ArchipelagoError> {
        let mut path: Vec<usize> = Vec::new();
        // cursor into `order` for each depth
        let mut cursor: Vec<usize> = vec![0];
        let mut spent = 0u64;
        while let Some(pos) = cursor.last_mut() {
            let Some(&cand) = self.order.get(*pos) else {
                cursor.pop();
                if path.pop().is_some() {
                    // the new last edge stops being blocked
                    if let Some(&prev) = path.last() {
                        self.unblock(prev);
                    }
                }
                continue;
            };
            *pos += 1;
            if !self.admissible(&path, cand) {
                continue;
            }
            spent += 1;
            if spent > budget {
                return Err(ArchipelagoError::SearchBudget(budget));
            }
            if self.h.edge(cand).contains(&self.target) {
                path.push(cand);
                return Ok(EdgeSeq(path));
            }
            if let Some(&prev) = path.last() {
                self.block(prev);
            }
            path.push(cand);
            cursor.push(0);
        }
        unreachable!("every vertex of an archipelago is reachable by a linear path")
    }

    fn admissible(&self, path: &[usize], cand: usize) -> bool {
        let edge = self.h.edge(cand);
        if path.contains(&cand) {
            return false;
        }
        match path.last() {
            None => edge.contains(&self.source),
            Some(&last) => {
                if edge.contains(&self.source) {
                    return false;
                }
                if edge.iter().any(|v| self.blocked[v.index()] > 0) {
                    return false;
                }
                let s = crate::hypergraph::intersection_len(edge, self.h.edge(last));
                (1..=self.q).contains(&s)
            }
        }
    }

    fn block(&mut self, e: usize) {
        for &v in self.h.edge(e) {
            self.blocked[v.index()] += 1;
        }
    }

    fn unblock(&mut self, e: usize) {
        for &v in self.h.edge(e) {
            self.blocked[v.index()] -= 1;
        }
    }
}

/// Default extension budget for witness searches.
pub const WITNESS_BUDGET: u64 = 10_000_000;

/// Runs the two-phase archipelago construction from `source` on a
/// `k`-uniform hypergraph and labels every edge archipelago, cut or exterior.
///
/// Phase 1 rescans the unaccepted edges in list order after every
/// acceptance and takes the first new-crossing or other edge. Phase 2
/// accepts the crossing edges, which cannot change any type.
pub fn partition_archipelago(
    h: &Hypergraph,
    source: VertexId,
) -> Result<(Archipelago, EdgePartition), ArchipelagoError> {
    if !h.is_uniform() {
        return Err(ArchipelagoError::NotUniform(h.rank()));
    }
    let mut a = Archipelago::new(h, source)?;
    let mut remaining: Vec<usize> = (0..h.edge_count()).collect();

    loop {
        let found = remaining
            .iter()
            .enumerate()
            .find_map(|(pos, &e)| match a.classify(h, e) {
                c @ (EdgeClass::NewCrossing | EdgeClass::Other) => Some((pos, e, c)),
                _ => None,
            });
        let Some((pos, e, class)) = found else { break };
        remaining.remove(pos);
        match class {
            EdgeClass::NewCrossing => {
                a.add_new_crossing(h, e)?;
            }
            _ => {
                a.add_other(h, e)?;
            }
        }
        // per-step self-check on small inputs only; it costs O(n) each time
        if cfg!(debug_assertions) && h.edge_count() <= 64 {
            debug_assert_eq!(a.check_invariants(), Ok(()));
        }
    }

    let mut partition = EdgePartition::default();
    let mut leftover = Vec::new();
    for e in remaining {
        if a.classify(h, e) == EdgeClass::Crossing {
            a.add_crossing(h, e)?;
        } else {
            leftover.push(e);
        }
    }
    for e in leftover {
        match a.classify(h, e) {
            EdgeClass::Cut => partition.cut.push(e),
            EdgeClass::Exterior => partition.exterior.push(e),
            c => unreachable!("edge {e} left with type {c:?} after both phases"),
        }
    }
    partition.archipelago = a.accepted_edges();
    partition.cut.sort_unstable();
    partition.exterior.sort_unstable();
    Ok((a, partition))
}

/// The `(k-2)`-linear connected component of `source`.
pub fn lcc(h: &Hypergraph, source: VertexId) -> Result<VertexSet, ArchipelagoError> {
    Ok(partition_archipelago(h, source)?.0.vertex_set())
}

/// [`lcc`] for hypergraphs of any rank: non-uniform input is padded first
/// and the padding vertices are dropped from the answer.
pub fn lcc_any_rank(h: &Hypergraph, source: VertexId) -> Result<VertexSet, ArchipelagoError> {
    if h.is_uniform() {
        return lcc(h, source);
    }
    let n = h.vertex_count() as u32;
    let padded = h.uniformize();
    Ok(lcc(&padded, source)?.iter().filter(|v| v.0 < n).collect())
}
