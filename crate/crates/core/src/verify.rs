//! Self-checks of a finished partition: structural invariants always,
//! oracle cross-checks on small instances.

use crate::archipelago::{Archipelago, EdgePartition};
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::oracle::Oracle;
use crate::path::{is_path_from_to, PathQuery};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Oracle checks run only when the hypergraph has at most this many edges.
    pub oracle_threshold: usize,
    /// Entry characterization runs only when `|V(A)|` is at most this.
    pub subset_threshold: usize,
    pub oracle_budget: u64,
    pub witness_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle_threshold: 12,
            subset_threshold: 9,
            oracle_budget: crate::oracle::DEFAULT_BUDGET,
            witness_budget: crate::archipelago::WITNESS_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub oracle_checked: bool,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural checks: arborescence and island invariants, the edge
/// tri-partition, the shape of cut edges and disjointness of exterior edges.
pub fn structural_violations(h: &Hypergraph, a: &Archipelago, p: &EdgePartition) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = a.check_invariants() {
        out.push(format!("invariant: {e}"));
    }
    let mut label = vec![0u8; h.edge_count()];
    for (tag, list) in [(1u8, &p.archipelago), (2, &p.cut), (3, &p.exterior)] {
        for &e in list {
            if e >= h.edge_count() {
                out.push(format!("edge {e} out of range"));
            } else if label[e] != 0 {
                out.push(format!("edge {e} labelled twice"));
            } else {
                label[e] = tag;
            }
        }
    }
    if let Some(e) = label.iter().position(|&t| t == 0) {
        out.push(format!("edge {e} unlabelled"));
    }
    let inside = a.vertex_set();
    let entries = a.proper_entries();
    for &e in &p.archipelago {
        if !inside.is_subset(h.edge(e)) && h.edge(e).iter().any(|&v| !inside.contains(v)) {
            out.push(format!("accepted edge {e} leaves V(A)"));
        }
    }
    for &e in &p.cut {
        let met = inside.intersection(h.edge(e));
        let outside = h.edge(e).len() - met.len();
        if outside != 1 || !entries.contains(&met) {
            out.push(format!(
                "cut edge {e} is not an entry plus one outside vertex"
            ));
        }
    }
    for &e in &p.exterior {
        if inside.meets(h.edge(e)) {
            out.push(format!("exterior edge {e} meets V(A)"));
        }
    }
    out
}

/// All `X ⊆ V(A)` with `1 ≤ |X| ≤ max`.
pub fn small_subsets(set: &VertexSet, max: usize) -> Vec<VertexSet> {
    let items: Vec<VertexId> = set.iter().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        items: &[VertexId],
        start: usize,
        max: usize,
        cur: &mut Vec<VertexId>,
        out: &mut Vec<VertexSet>,
    ) {
        if !cur.is_empty() {
            out.push(cur.iter().copied().collect());
        }
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(&items, 0, max, &mut cur, &mut out);
    out
}

/// Runs the structural checks, then, on small instances, compares the
/// component with the oracle, validates a witness for every vertex and
/// checks that exactly the proper entries lack an extendable path from the
/// source inside `E(A)`.
pub fn verify_partition(
    h: &Hypergraph,
    a: &Archipelago,
    p: &EdgePartition,
    opts: &VerifyOptions,
) -> VerifyReport {
    let mut report = VerifyReport {
        oracle_checked: false,
        violations: structural_violations(h, a, p),
    };
    if h.edge_count() > opts.oracle_threshold {
        return report;
    }
    report.oracle_checked = true;
    let oracle = Oracle::new(opts.oracle_budget);
    let q = h.rank() - 2;
    let inside = a.vertex_set();
    match oracle.lcc(h, a.source(), q) {
        Ok(truth) if truth == inside => {}
        Ok(truth) => report.violations.push(format!(
            "component mismatch: algorithm {:?}, oracle {:?}",
            inside.tokens(h),
            truth.tokens(h)
        )),
        Err(e) => report.violations.push(format!("oracle: {e}")),
    }
    for v in inside.iter() {
        match a.witness_path(h, v, opts.witness_budget) {
            Ok(w) => {
                let valid =
                    is_path_from_to(h, w.as_slice(), &PathQuery::vertices(a.source(), v, q))
                        && w.as_slice().iter().all(|&e| a.is_accepted(e));
                if !valid {
                    report
                        .violations
                        .push(format!("witness {w} for `{}` is invalid", h.token(v)));
                }
            }
            Err(e) => report
                .violations
                .push(format!("witness for `{}`: {e}", h.token(v))),
        }
    }
    if inside.len() <= opts.subset_threshold {
        let accepted = a.accepted_edges();
        let entries = a.proper_entries();
        let source = VertexSet::singleton(a.source());
        for x in small_subsets(&inside, h.rank() - 1) {
            match oracle.extendable_exists(h, &source, &x, Some(&accepted)) {
                Ok(found) => {
                    let is_entry = entries.contains(&x);
                    if found == is_entry {
                        report.violations.push(format!(
                            "extendable path to {:?}: found={found}, entry={is_entry}",
                            x.tokens(h)
                        ));
                    }
                }
                Err(e) => report.violations.push(format!("oracle: {e}")),
            }
        }
    }
    report
}
