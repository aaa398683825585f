//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use linconn::gen::{gen_chain, gen_random};
use linconn::pafp::{line_graph, pafp_exact, screen_forbidden, solve_pafp_via_hypergraph};
use linconn::path::{compose, is_extendable, widen_endpoint, widen_start};
use linconn::verify::{small_subsets, structural_violations};
use linconn::{
    is_path_from_to, lcc, lcc_any_rank, partition_archipelago, Archipelago, EdgePartition, EdgeSeq,
    Hypergraph, Oracle, PathQuery, VertexId, VertexSet,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;

// Pinned thresholds.
const C1_INSTANCES: usize = 1200;
const C1_TIME_LIMIT: Duration = Duration::from_secs(60);
const C3_INSTANCES: usize = 200;
const C3_SHUFFLES: usize = 10;
const C4_MAX_COMPONENT: usize = 9;
const C6_TRIPLES: usize = 500;
const C7_INSTANCES: usize = 300;
const C8_LENGTHS: [usize; 3] = [500, 1000, 2000];
const C8_MAX_RATIO: f64 = 5.0;
const C8_L1000_LIMIT: Duration = Duration::from_secs(1);
const C9_INSTANCES: usize = 200;

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(violations: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if let Some(first) = violations.first() {
        detail = format!("{detail}; {} violations, first: {first}", violations.len());
    }
    Outcome {
        ok: violations.is_empty(),
        detail,
    }
}

/// The random instances shared by criteria 1, 2, 4 and 5.
fn base_instances() -> Vec<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..C1_INSTANCES)
        .map(|i| {
            let k = 3 + i % 3;
            let n = rng.gen_range(k..=12);
            let m = rng.gen_range(0..=10);
            gen_random(n, m, k, rng.gen()).unwrap()
        })
        .collect()
}

fn all_sources(h: &Hypergraph) -> Vec<VertexId> {
    h.vertices().collect()
}

fn criterion_1(instances: &[Hypergraph]) -> Outcome {
    let oracle = Oracle::default();
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut queries = 0;
    for (i, h) in instances.iter().enumerate() {
        for x in all_sources(h) {
            queries += 1;
            let fast = lcc(h, x).unwrap();
            let truth = oracle.lcc(h, x, h.rank() - 2).unwrap();
            if fast != truth {
                violations.push(format!("instance {i}, source {}", h.token(x)));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > C1_TIME_LIMIT {
        violations.push(format!("took {elapsed:?}, limit {C1_TIME_LIMIT:?}"));
    }
    outcome(
        &violations,
        format!(
            "{} instances, {queries} sources, {:.2} s",
            instances.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(instances: &[Hypergraph]) -> Outcome {
    let mut violations = Vec::new();
    let mut partitions = 0;
    for (i, h) in instances.iter().enumerate() {
        for x in all_sources(h) {
            partitions += 1;
            let (a, p) = partition_archipelago(h, x).unwrap();
            for v in structural_violations(h, &a, &p) {
                violations.push(format!("instance {i}, source {}: {v}", h.token(x)));
            }
        }
    }
    outcome(&violations, format!("{partitions} partitions"))
}

/// Order-independent summary of a partition, with edges named by their
/// index in the unshuffled list.
#[derive(PartialEq, Eq, Debug)]
struct Canonical {
    islands: BTreeSet<VertexSet>,
    entries: BTreeSet<VertexSet>,
    accepted: BTreeSet<usize>,
    cut: BTreeSet<usize>,
    exterior: BTreeSet<usize>,
}

fn canonical(a: &Archipelago, p: &EdgePartition, original: &[usize]) -> Canonical {
    let map = |list: &[usize]| list.iter().map(|&e| original[e]).collect();
    Canonical {
        islands: a.islands().map(|i| i.vertex_set()).collect(),
        entries: a.islands().map(|i| i.entry.clone()).collect(),
        accepted: map(&p.archipelago),
        cut: map(&p.cut),
        exterior: map(&p.exterior),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut violations = Vec::new();
    for i in 0..C3_INSTANCES {
        let k = 3 + i % 3;
        let n = rng.gen_range(k..=12);
        let m = rng.gen_range(1..=10);
        let h = gen_random(n, m, k, rng.gen()).unwrap();
        let x = VertexId(rng.gen_range(0..n) as u32);
        let identity: Vec<usize> = (0..m).collect();
        let (a, p) = partition_archipelago(&h, x).unwrap();
        let reference = canonical(&a, &p, &identity);
        for s in 0..C3_SHUFFLES {
            let mut order = identity.clone();
            order.shuffle(&mut rng);
            let shuffled = h.permute_edges(&order);
            let (a, p) = partition_archipelago(&shuffled, x).unwrap();
            if canonical(&a, &p, &order) != reference {
                violations.push(format!("instance {i}, shuffle {s}, order {order:?}"));
            }
        }
    }
    outcome(
        &violations,
        format!("{C3_INSTANCES} instances x {C3_SHUFFLES} shuffles"),
    )
}

fn criterion_4(instances: &[Hypergraph]) -> Outcome {
    let oracle = Oracle::default();
    let mut violations = Vec::new();
    let (mut components, mut subsets) = (0, 0);
    for (i, h) in instances.iter().enumerate().filter(|(_, h)| h.rank() == 3) {
        for x in all_sources(h) {
            let (a, _) = partition_archipelago(h, x).unwrap();
            let inside = a.vertex_set();
            if inside.len() > C4_MAX_COMPONENT {
                continue;
            }
            components += 1;
            let accepted = a.accepted_edges();
            let entries = a.proper_entries();
            let source = VertexSet::singleton(x);
            for set in small_subsets(&inside, 2) {
                subsets += 1;
                let found = oracle
                    .extendable_exists(h, &source, &set, Some(&accepted))
                    .unwrap();
                if found == entries.contains(&set) {
                    violations.push(format!(
                        "instance {i}, source {}, X={:?}, found={found}",
                        h.token(x),
                        set.tokens(h)
                    ));
                }
            }
        }
    }
    outcome(
        &violations,
        format!("{components} components, {subsets} subsets"),
    )
}

fn criterion_5(instances: &[Hypergraph]) -> Outcome {
    let mut violations = Vec::new();
    let mut witnesses = 0;
    for (i, h) in instances.iter().enumerate() {
        let q = h.rank() - 2;
        for x in all_sources(h) {
            let (a, _) = partition_archipelago(h, x).unwrap();
            for y in a.vertex_set().iter() {
                witnesses += 1;
                let ok = match a.witness_path(h, y, linconn::archipelago::WITNESS_BUDGET) {
                    Ok(w) => {
                        is_path_from_to(h, w.as_slice(), &PathQuery::vertices(x, y, q))
                            && w.as_slice().iter().all(|&e| a.is_accepted(e))
                    }
                    Err(_) => false,
                };
                if !ok {
                    violations.push(format!("instance {i}, {} -> {}", h.token(x), h.token(y)));
                }
            }
        }
    }
    outcome(&violations, format!("{witnesses} witnesses"))
}

/// Builds random extendable paths on fresh vertices.
struct Builder {
    k: usize,
    next: u32,
    edges: Vec<Vec<String>>,
}

impl Builder {
    fn new(k: usize) -> Self {
        Builder {
            k,
            next: 0,
            edges: Vec::new(),
        }
    }

    fn fresh(&mut self, count: usize) -> Vec<u32> {
        let out = (self.next..self.next + count as u32).collect();
        self.next += count as u32;
        out
    }

    fn push_edge(&mut self, vs: &[u32]) -> usize {
        self.edges
            .push(vs.iter().map(|v| format!("u{v}")).collect());
        self.edges.len() - 1
    }

    /// A `(A, B)`-extendable path on fresh vertices, returned as
    /// `(edges, A, B)` in raw vertex numbers.
    fn extendable(&mut self, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<u32>, Vec<u32>) {
        let k = self.k;
        let len = rng.gen_range(0..=4);
        if len == 0 {
            let shared = rng.gen_range(1..=k - 2);
            let common = self.fresh(shared);
            let mut a = common.clone();
            a.extend(self.fresh(rng.gen_range(0..=k - 1 - shared)));
            let mut b = common;
            b.extend(self.fresh(rng.gen_range(0..=k - 1 - shared)));
            return (Vec::new(), a, b);
        }
        let mut raw: Vec<Vec<u32>> = vec![self.fresh(k)];
        for i in 1..len {
            let prev = &raw[i - 1];
            let older: &[u32] = if i >= 2 { &raw[i - 2] } else { &[] };
            let mut avail: Vec<u32> = prev
                .iter()
                .copied()
                .filter(|v| !older.contains(v))
                .collect();
            avail.shuffle(rng);
            // keep at least one vertex of the first edge private for A
            let cap = if i == 1 { avail.len() - 1 } else { avail.len() };
            let s = rng.gen_range(1..=(k - 2).min(cap));
            let mut e: Vec<u32> = avail[..s].to_vec();
            e.extend(self.fresh(k - s));
            raw.push(e);
        }
        let second: &[u32] = if len >= 2 { &raw[1] } else { &[] };
        let mut first_only: Vec<u32> = raw[0]
            .iter()
            .copied()
            .filter(|v| !second.contains(v))
            .collect();
        first_only.shuffle(rng);
        let before_last: &[u32] = if len >= 2 { &raw[len - 2] } else { &[] };
        let mut last_only: Vec<u32> = raw[len - 1]
            .iter()
            .copied()
            .filter(|v| !before_last.contains(v))
            .collect();
        last_only.shuffle(rng);
        let a_in = rng.gen_range(1..=(k - 2).min(first_only.len() - 1));
        let mut a: Vec<u32> = first_only[..a_in].to_vec();
        let rest: Vec<u32> = last_only.into_iter().filter(|v| !a.contains(v)).collect();
        let b_in = rng.gen_range(1..=(k - 2).min(rest.len()));
        let mut b: Vec<u32> = rest[..b_in].to_vec();
        a.extend(self.fresh(rng.gen_range(0..=k - 1 - a_in)));
        b.extend(self.fresh(rng.gen_range(0..=k - 1 - b_in)));
        let ids = raw.iter().map(|e| self.push_edge(e)).collect();
        (ids, a, b)
    }

    fn finish(self) -> Hypergraph {
        let names: Vec<String> = (0..self.next).map(|v| format!("u{v}")).collect();
        Hypergraph::with_vertices(self.k, &names, &self.edges).unwrap()
    }
}

fn set(h: &Hypergraph, raw: &[u32]) -> VertexSet {
    raw.iter()
        .map(|v| h.vertex(&format!("u{v}")).unwrap())
        .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut violations = Vec::new();
    let (mut composed, mut widened) = (0, 0);
    while composed < C6_TRIPLES {
        let k = rng.gen_range(3..=6);
        let mut b = Builder::new(k);
        let (p, ra, rb) = b.extendable(&mut rng);
        let (q, rc, rd) = b.extendable(&mut rng);
        if rb.len() + rc.len() > k {
            continue;
        }
        let mut bridge_raw = rb.clone();
        bridge_raw.extend(&rc);
        let pad = b.fresh(k - bridge_raw.len());
        bridge_raw.extend(pad);
        let bridge = b.push_edge(&bridge_raw);
        let h = b.finish();
        let (sa, sb, sc, sd) = (set(&h, &ra), set(&h, &rb), set(&h, &rc), set(&h, &rd));
        composed += 1;
        match compose(&h, &EdgeSeq(p), bridge, &EdgeSeq(q), &sa, &sb, &sc, &sd) {
            Ok(r) if is_extendable(&h, r.as_slice(), &sa, &sd) => {}
            other => violations.push(format!("compose k={k}: {other:?}")),
        }
    }
    while widened < C6_TRIPLES {
        let k = rng.gen_range(3..=6);
        let mut b = Builder::new(k);
        let (p, ra, rb) = b.extendable(&mut rng);
        let target_side = rng.gen_bool(0.5);
        let base = if target_side { &rb } else { &ra };
        if base.len() == k - 1 {
            continue;
        }
        let extra = rng.gen_range(1..=k - 1 - base.len());
        let mut wide_raw = base.clone();
        wide_raw.extend(b.fresh(extra));
        let h = b.finish();
        let (sa, sb, wide) = (set(&h, &ra), set(&h, &rb), set(&h, &wide_raw));
        let p = EdgeSeq(p);
        widened += 1;
        let result = if target_side {
            widen_endpoint(&h, &p, &sa, &sb, &wide)
                .map(|ok| ok && is_extendable(&h, p.as_slice(), &sa, &wide))
        } else {
            widen_start(&h, &p, &sa, &wide, &sb)
                .map(|ok| ok && is_extendable(&h, p.as_slice(), &wide, &sb))
        };
        if result != Ok(true) {
            violations.push(format!("widen k={k}: {result:?}"));
        }
    }
    outcome(
        &violations,
        format!("{composed} compositions, {widened} widenings"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut violations = Vec::new();
    let (mut pairs, mut yes) = (0, 0);
    for i in 0..C7_INSTANCES {
        let k = 3 + i % 2;
        let n = rng.gen_range(k..=10);
        let m = rng.gen_range(2..=8);
        let h = gen_random(n, m, k, rng.gen()).unwrap();
        let g = line_graph(&h, k - 2);
        if !screen_forbidden(&g).is_empty() {
            violations.push(format!("instance {i}: forbidden pattern in image"));
        }
        for u in 0..m {
            for v in 0..m {
                if u == v {
                    continue;
                }
                pairs += 1;
                let exact = pafp_exact(&g, u, v, linconn::pafp::DEFAULT_PAFP_BUDGET)
                    .unwrap()
                    .is_some();
                let reduced = solve_pafp_via_hypergraph(&h, u, v).unwrap();
                yes += usize::from(exact);
                if exact != reduced {
                    violations.push(format!("instance {i}, pair ({u}, {v}): exact={exact}"));
                }
            }
        }
    }
    outcome(
        &violations,
        format!("{C7_INSTANCES} instances, {pairs} pairs, {yes} YES"),
    )
}

/// Best of several trials, each repeating until at least 50 ms have passed.
fn time_chain(h: &Hypergraph) -> Duration {
    let x = h.vertex("0").unwrap();
    let expected = h.vertex_count();
    let mut best = Duration::MAX;
    for _ in 0..5 {
        let start = Instant::now();
        let mut runs = 0u32;
        while runs == 0 || start.elapsed() < Duration::from_millis(50) {
            assert_eq!(lcc(h, x).unwrap().len(), expected);
            runs += 1;
        }
        best = best.min(start.elapsed() / runs);
    }
    best
}

fn criterion_8() -> Outcome {
    let mut violations = Vec::new();
    let times: Vec<Duration> = C8_LENGTHS
        .iter()
        .map(|&l| time_chain(&gen_chain(l, 3).unwrap()))
        .collect();
    for w in times.windows(2).zip(C8_LENGTHS.windows(2)) {
        let ratio = w.0[1].as_secs_f64() / w.0[0].as_secs_f64().max(1e-9);
        if ratio > C8_MAX_RATIO {
            violations.push(format!("L {} -> {}: ratio {ratio:.2}", w.1[0], w.1[1]));
        }
    }
    if times[1] > C8_L1000_LIMIT {
        violations.push(format!("L=1000 took {:?}", times[1]));
    }
    let shown: Vec<String> = C8_LENGTHS
        .iter()
        .zip(&times)
        .map(|(l, t)| format!("L={l}: {:.3} ms", t.as_secs_f64() * 1e3))
        .collect();
    outcome(&violations, shown.join(", "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let oracle = Oracle::default();
    let mut violations = Vec::new();
    let mut generated = 0;
    while generated < C9_INSTANCES {
        let n = rng.gen_range(3..=10);
        let m = rng.gen_range(1..=8);
        let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
        let edges: Vec<Vec<String>> = (0..m)
            .map(|_| {
                let size = rng.gen_range(2..=3);
                rand::seq::index::sample(&mut rng, n, size)
                    .iter()
                    .map(|v| names[v].clone())
                    .collect()
            })
            .collect();
        let h = Hypergraph::with_vertices(3, &names, &edges).unwrap();
        if h.is_uniform() {
            continue;
        }
        generated += 1;
        let padded = h.uniformize();
        let original = h.vertex_count() as u32;
        for x in h.vertices() {
            let here = oracle.lcc(&h, x, 1).unwrap();
            let there: VertexSet = oracle
                .lcc(&padded, x, 1)
                .unwrap()
                .iter()
                .filter(|v| v.0 < original)
                .collect();
            let fast = lcc_any_rank(&h, x).unwrap();
            if here != there || here != fast {
                violations.push(format!("instance {generated}, source {}", h.token(x)));
            }
        }
    }
    outcome(&violations, format!("{generated} non-uniform instances"))
}

fn main() -> ExitCode {
    let instances = base_instances();
    let criteria: [(&str, Criterion); 9] = [
        ("oracle equivalence", Box::new(|| criterion_1(&instances))),
        ("partition contract", Box::new(|| criterion_2(&instances))),
        ("order invariance", Box::new(criterion_3)),
        (
            "entry characterization",
            Box::new(|| criterion_4(&instances)),
        ),
        ("witness validity", Box::new(|| criterion_5(&instances))),
        ("path extension", Box::new(criterion_6)),
        ("pafp round trip", Box::new(criterion_7)),
        ("chain timing", Box::new(criterion_8)),
        ("uniformization", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {tag} ({})", i + 1, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
