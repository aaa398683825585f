use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use linconn::archipelago::WITNESS_BUDGET;
use linconn::dot::{archipelago_dot, bicolored_dot};
use linconn::gen::{gen_chain, gen_random, DEFAULT_SEED};
use linconn::oracle::DEFAULT_BUDGET;
use linconn::pafp::DEFAULT_PAFP_BUDGET;
use linconn::report::PartitionReport;
use linconn::verify::{verify_partition, VerifyOptions};
use linconn::{
    is_extendable, is_path_from_to, is_q_linear, lcc_any_rank, line_graph, pafp_exact,
    partition_archipelago, screen_forbidden, solve_pafp_via_hypergraph, BicoloredGraph, Hypergraph,
    Oracle, PathQuery, VertexSet,
};

macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        writeln!($out, $($arg)*).expect("writing to a String")
    }};
}

/// Linear connectivity in uniform hypergraphs.
#[derive(Parser)]
#[command(name = "linconn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Hypergraph file in the `k=<int>` text format; `-` reads stdin.
    #[arg(short, long, default_value = "-")]
    input: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the (k-2)-linear component of a vertex.
    Lcc {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        source: String,
    },
    /// Run the archipelago construction and label every edge.
    Partition {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        source: String,
        #[arg(short, long, value_enum, default_value = "json")]
        format: Format,
        /// Check invariants, and compare with the oracle on small inputs.
        #[arg(long)]
        verify: bool,
        /// Largest edge count for which `--verify` runs oracle checks.
        #[arg(long, default_value_t = 12)]
        oracle_threshold: usize,
    },
    /// Print a (k-2)-linear path from the source to a target vertex.
    Witness {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        source: String,
        #[arg(short, long)]
        target: String,
        #[arg(long, default_value_t = WITNESS_BUDGET)]
        budget: u64,
    },
    /// Check an edge sequence against the path definitions.
    CheckPath {
        #[command(flatten)]
        input: Input,
        /// Edge indices in path order.
        #[arg(short, long, num_args = 0..)]
        edges: Vec<usize>,
        /// Start set X, as vertex tokens.
        #[arg(long, num_args = 1.., required = true)]
        from: Vec<String>,
        /// Target set Y, as vertex tokens.
        #[arg(long, num_args = 1.., required = true)]
        to: Vec<String>,
        /// Linearity bound; defaults to k-2.
        #[arg(short, long)]
        q: Option<usize>,
    },
    /// Exhaustive q-linear component, or reachability with `--target`.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        source: String,
        #[arg(short, long)]
        target: Option<String>,
        /// Linearity bound in [1, k-1]; defaults to k-2.
        #[arg(short, long)]
        q: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print the bicolored line graph.
    Linegraph {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        q: Option<usize>,
        #[arg(short, long, value_enum, default_value = "text")]
        format: GraphFormat,
    },
    /// Decide whether a blue induced path joins two nodes.
    Pafp {
        /// Hypergraph input; the question is asked about its line graph.
        #[arg(short, long, conflicts_with = "graph")]
        input: Option<String>,
        /// Two hyperedge indices.
        #[arg(long, num_args = 2, requires = "input")]
        edges: Vec<usize>,
        /// Bicolored graph input (`b u v` / `r u v` / `node u` lines).
        #[arg(short, long)]
        graph: Option<String>,
        /// Two node labels.
        #[arg(long, num_args = 2, requires = "graph")]
        nodes: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_PAFP_BUDGET)]
        budget: u64,
    },
    /// Report induced red paths on three nodes.
    Screen {
        /// Bicolored graph file; `-` reads stdin.
        #[arg(short, long, default_value = "-")]
        graph: String,
    },
    /// Generate instances, or fuzz the construction with `--verify`.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// `m` uniformly random `k`-subsets of `n` vertices.
    Random {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Instead of printing, verify the partition of every vertex.
        #[arg(long)]
        verify: bool,
        /// Number of seeds tried by `--verify`, starting at `--seed`.
        #[arg(long, default_value_t = 1, requires = "verify")]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        oracle_threshold: usize,
    },
    /// A linear chain of `len` edges starting at vertex `0`.
    Chain {
        #[arg(short, long)]
        len: usize,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        verify: bool,
    },
}

fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn load(path: &str) -> Result<Hypergraph> {
    let h = Hypergraph::parse(&read_text(path)?)?;
    for (i, j) in h.duplicate_edges() {
        eprintln!("warning: edges {i} and {j} are identical");
    }
    Ok(h)
}

fn load_graph(path: &str) -> Result<BicoloredGraph> {
    Ok(BicoloredGraph::parse(&read_text(path)?)?)
}

/// Pads non-uniform input, saying so on stderr.
fn uniform(h: Hypergraph) -> Hypergraph {
    if h.is_uniform() {
        h
    } else {
        eprintln!(
            "warning: input is not {}-uniform; padding edges with fresh vertices",
            h.rank()
        );
        h.uniformize()
    }
}

fn tokens(h: &Hypergraph, s: &VertexSet) -> String {
    s.tokens(h).join(" ")
}

fn vertex_set(h: &Hypergraph, toks: &[String]) -> Result<VertexSet> {
    let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
    Ok(VertexSet::from_tokens(h, &toks)?)
}

fn answer(out: &mut String, yes: bool) -> u8 {
    emit!(out, "{}", if yes { "YES" } else { "NO" });
    u8::from(!yes)
}

fn q_or_default(h: &Hypergraph, q: Option<usize>) -> Result<usize> {
    let k = h.rank();
    let q = q.unwrap_or(k - 2);
    if !(1..k).contains(&q) {
        bail!("q must lie in [1, {}]", k - 1);
    }
    Ok(q)
}

fn partition_text(h: &Hypergraph, r: &PartitionReport) -> String {
    let mut out = format!("k={} source={}\nlcc: {}\n", r.k, r.source, r.lcc.join(" "));
    for i in &r.islands {
        let parent = i.parent.map_or("-".to_string(), |p| format!("I{p}"));
        out += &format!(
            "I{} parent={parent} entry={{{}}} vertices={{{}}}\n",
            i.id,
            i.entry.join(" "),
            i.vertices.join(" ")
        );
    }
    for (name, list) in [
        ("archipelago", &r.edges.archipelago),
        ("cut", &r.edges.cut),
        ("exterior", &r.edges.exterior),
    ] {
        out += &format!("{name}:");
        for &e in list.iter() {
            out += &format!(" {e}[{}]", h.edge_tokens(e).join(" "));
        }
        out += "\n";
    }
    out
}

/// Partitions from every vertex and returns the violations found.
fn verify_all(h: &Hypergraph, opts: &VerifyOptions) -> Vec<String> {
    let mut out = Vec::new();
    for x in h.vertices() {
        match partition_archipelago(h, x) {
            Ok((a, p)) => {
                let report = verify_partition(h, &a, &p, opts);
                out.extend(
                    report
                        .violations
                        .into_iter()
                        .map(|v| format!("source {}: {v}", h.token(x))),
                );
            }
            Err(e) => out.push(format!("source {}: {e}", h.token(x))),
        }
    }
    out
}

fn fuzz(
    out: &mut String,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
    trials: usize,
    opts: VerifyOptions,
) -> Result<u8> {
    gen_random(n, m, k, seed)?;
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism()
        .map_or(1, |c| c.get())
        .min(trials.max(1));
    let failures: Vec<(u64, Vec<String>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut found = Vec::new();
                    loop {
                        let t = next.fetch_add(1, Ordering::Relaxed);
                        if t >= trials {
                            return found;
                        }
                        let seed = seed.wrapping_add(t as u64);
                        let h = gen_random(n, m, k, seed).expect("parameters checked");
                        let v = verify_all(&h, &opts);
                        if !v.is_empty() {
                            found.push((seed, v));
                        }
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut failures = failures;
    failures.sort_by_key(|f| f.0);
    for (seed, v) in &failures {
        for line in v {
            emit!(out, "seed {seed}: {line}");
        }
    }
    emit!(out, "{trials} trials, {} failing", failures.len());
    Ok(u8::from(!failures.is_empty()))
}

fn run(cli: Cli, out: &mut String) -> Result<u8> {
    match cli.command {
        Command::Lcc { input, source } => {
            let h = load(&input.input)?;
            let x = h.require_vertex(&source)?;
            emit!(out, "{}", tokens(&h, &lcc_any_rank(&h, x)?));
            Ok(0)
        }
        Command::Partition {
            input,
            source,
            format,
            verify,
            oracle_threshold,
        } => {
            let h = uniform(load(&input.input)?);
            let x = h.require_vertex(&source)?;
            let (a, p) = partition_archipelago(&h, x)?;
            let report = PartitionReport::new(&h, &a, &p);
            match format {
                Format::Json => emit!(out, "{}", report.to_json()),
                Format::Dot => out.push_str(&archipelago_dot(&h, &a, &p)),
                Format::Text => out.push_str(&partition_text(&h, &report)),
            }
            if verify {
                let opts = VerifyOptions {
                    oracle_threshold,
                    ..VerifyOptions::default()
                };
                let check = verify_partition(&h, &a, &p, &opts);
                for v in &check.violations {
                    eprintln!("verify: {v}");
                }
                let scope = if check.oracle_checked {
                    "structure and oracle"
                } else {
                    "structure"
                };
                eprintln!(
                    "verify: {scope}: {}",
                    if check.is_ok() { "ok" } else { "FAILED" }
                );
                if !check.is_ok() {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Witness {
            input,
            source,
            target,
            budget,
        } => {
            let h = uniform(load(&input.input)?);
            let x = h.require_vertex(&source)?;
            let y = h.require_vertex(&target)?;
            let (a, _) = partition_archipelago(&h, x)?;
            if !a.contains(y) {
                emit!(out, "NO");
                return Ok(1);
            }
            let w = a.witness_path(&h, y, budget)?;
            for &e in w.as_slice() {
                emit!(out, "{e}: {}", h.edge_tokens(e).join(" "));
            }
            if w.is_empty() {
                emit!(out, "(empty path)");
            }
            Ok(0)
        }
        Command::CheckPath {
            input,
            edges,
            from,
            to,
            q,
        } => {
            let h = load(&input.input)?;
            if let Some(&e) = edges.iter().find(|&&e| e >= h.edge_count()) {
                bail!("edge {e} out of range");
            }
            let q = q_or_default(&h, q)?;
            let (x, y) = (vertex_set(&h, &from)?, vertex_set(&h, &to)?);
            let linear = is_q_linear(&h, &edges, q);
            let from_to = is_path_from_to(&h, &edges, &PathQuery::new(x.clone(), y.clone(), q));
            let yn = |b: bool| if b { "yes" } else { "no" };
            emit!(out, "q-linear (q={q}): {}", yn(linear));
            emit!(out, "path from X to Y: {}", yn(from_to));
            if q == h.rank() - 2 {
                emit!(out, "extendable: {}", yn(is_extendable(&h, &edges, &x, &y)));
            }
            Ok(u8::from(!from_to))
        }
        Command::Oracle {
            input,
            source,
            target,
            q,
            budget,
        } => {
            let h = load(&input.input)?;
            let x = h.require_vertex(&source)?;
            let q = q_or_default(&h, q)?;
            let reached = Oracle::new(budget).lcc(&h, x, q)?;
            match target {
                Some(t) => Ok(answer(out, reached.contains(h.require_vertex(&t)?))),
                None => {
                    emit!(out, "{}", tokens(&h, &reached));
                    Ok(0)
                }
            }
        }
        Command::Linegraph { input, q, format } => {
            let h = load(&input.input)?;
            let q = q_or_default(&h, q)?;
            let g = line_graph(&h, q);
            match format {
                GraphFormat::Text => out.push_str(&g.to_string()),
                GraphFormat::Dot => out.push_str(&bicolored_dot(&g)),
            }
            Ok(0)
        }
        Command::Pafp {
            input,
            edges,
            graph,
            nodes,
            budget,
        } => {
            if let Some(path) = input {
                let [e, f] = edges[..] else {
                    bail!("--edges takes two edge indices")
                };
                let h = load(&path)?;
                if !h.is_uniform() {
                    bail!("pafp needs a {}-uniform hypergraph", h.rank());
                }
                return Ok(answer(out, solve_pafp_via_hypergraph(&h, e, f)?));
            }
            let path = graph
                .ok_or_else(|| anyhow!("give --input with --edges or --graph with --nodes"))?;
            let [u, v] = &nodes[..] else {
                bail!("--nodes takes two node labels")
            };
            let g = load_graph(&path)?;
            let (u, v) = (g.require_node(u)?, g.require_node(v)?);
            match pafp_exact(&g, u, v, budget)? {
                Some(p) => {
                    emit!(out, "YES");
                    let labels: Vec<&str> = p.iter().map(|&i| g.label(i)).collect();
                    emit!(out, "{}", labels.join(" "));
                    Ok(0)
                }
                None => Ok(answer(out, false)),
            }
        }
        Command::Screen { graph } => {
            let g = load_graph(&graph)?;
            let found = screen_forbidden(&g);
            for (a, b, c) in &found {
                emit!(
                    out,
                    "red path {} {} {}",
                    g.label(*a),
                    g.label(*b),
                    g.label(*c)
                );
            }
            if found.is_empty() {
                emit!(out, "no forbidden pattern");
            }
            Ok(u8::from(!found.is_empty()))
        }
        Command::Gen { kind } => match kind {
            GenKind::Random {
                n,
                m,
                k,
                seed,
                verify,
                trials,
                oracle_threshold,
            } => {
                if verify {
                    let opts = VerifyOptions {
                        oracle_threshold,
                        ..VerifyOptions::default()
                    };
                    return fuzz(out, n, m, k, seed, trials, opts);
                }
                out.push_str(&gen_random(n, m, k, seed)?.to_string());
                Ok(0)
            }
            GenKind::Chain { len, k, verify } => {
                let h = gen_chain(len, k)?;
                if verify {
                    let v = verify_all(&h, &VerifyOptions::default());
                    for line in &v {
                        emit!(out, "{line}");
                    }
                    emit!(out, "chain of {len}: {} violations", v.len());
                    return Ok(u8::from(!v.is_empty()));
                }
                out.push_str(&h.to_string());
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    match io::stdout().write_all(out.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        _ => ExitCode::from(code),
    }
}
