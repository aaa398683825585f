//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns strings: hypergraphs in the `k=<int>` text
//! format and results as JSON. The plain `*_json` functions are the same
//! operations with `String` errors, usable from native code and tests.

use linconn::gen::{gen_chain, gen_random};
use linconn::pafp::{edge_label, Color};
use linconn::report::PartitionReport;
use linconn::{
    line_graph, pafp_exact, partition_archipelago, solve_pafp_via_hypergraph, Hypergraph,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const PAFP_BUDGET: u64 = 1_000_000;

#[derive(Serialize)]
struct EdgeView {
    index: usize,
    vertices: Vec<String>,
    /// `archipelago`, `cut` or `exterior`
    class: &'static str,
    /// accepted and meeting more than one island
    crossing: bool,
}

#[derive(Serialize)]
struct PartitionView {
    #[serde(flatten)]
    report: PartitionReport,
    padded: bool,
    outside: Vec<String>,
    edge_list: Vec<EdgeView>,
}

#[derive(Serialize)]
struct ColoredEdge {
    u: String,
    v: String,
    color: &'static str,
}

#[derive(Serialize)]
struct PafpView {
    answer: bool,
    /// blue induced path found by exhaustive search, as node labels
    path: Option<Vec<String>>,
    nodes: Vec<String>,
    edges: Vec<ColoredEdge>,
}

fn parse(text: &str) -> Result<Hypergraph, String> {
    Hypergraph::parse(text).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("views serialize")
}

/// Partition from `source`; non-uniform input is padded first.
pub fn partition_json(text: &str, source: &str) -> Result<String, String> {
    let h = parse(text)?;
    let padded = !h.is_uniform();
    let h = if padded { h.uniformize() } else { h };
    let x = h.require_vertex(source).map_err(|e| e.to_string())?;
    let (a, p) = partition_archipelago(&h, x).map_err(|e| e.to_string())?;
    let mut edge_list = Vec::with_capacity(h.edge_count());
    for (class, list) in [
        ("archipelago", &p.archipelago),
        ("cut", &p.cut),
        ("exterior", &p.exterior),
    ] {
        for &e in list {
            let first = h.edge(e).iter().find_map(|&v| a.island_of(v));
            edge_list.push(EdgeView {
                index: e,
                vertices: h.edge_tokens(e).into_iter().map(String::from).collect(),
                class,
                crossing: class == "archipelago"
                    && h.edge(e).iter().any(|&v| a.island_of(v) != first),
            });
        }
    }
    edge_list.sort_by_key(|e| e.index);
    let outside = h
        .vertices()
        .filter(|&v| !a.contains(v))
        .map(|v| h.token(v).to_string())
        .collect();
    Ok(to_json(&PartitionView {
        report: PartitionReport::new(&h, &a, &p),
        padded,
        outside,
        edge_list,
    }))
}

/// Asks PAFP between hyperedges `e` and `f` both through the hypergraph
/// reduction and by searching the line graph directly.
pub fn pafp_json(text: &str, e: usize, f: usize) -> Result<String, String> {
    let h = parse(text)?;
    if !h.is_uniform() {
        return Err(format!("hypergraph is not {}-uniform", h.rank()));
    }
    let answer = solve_pafp_via_hypergraph(&h, e, f).map_err(|err| err.to_string())?;
    let g = line_graph(&h, h.rank() - 2);
    let path = pafp_exact(&g, e, f, PAFP_BUDGET)
        .map_err(|err| err.to_string())?
        .map(|p| p.into_iter().map(edge_label).collect());
    let edges = g
        .edges()
        .into_iter()
        .map(|(u, v, c)| ColoredEdge {
            u: g.label(u).to_string(),
            v: g.label(v).to_string(),
            color: if c == Color::Blue { "blue" } else { "red" },
        })
        .collect();
    Ok(to_json(&PafpView {
        answer,
        path,
        nodes: (0..g.node_count())
            .map(|i| g.label(i).to_string())
            .collect(),
        edges,
    }))
}

pub fn random_text(n: usize, m: usize, k: usize, seed: u64) -> Result<String, String> {
    gen_random(n, m, k, seed)
        .map(|h| h.to_string())
        .map_err(|e| e.to_string())
}

pub fn chain_text(len: usize, k: usize) -> Result<String, String> {
    gen_chain(len, k)
        .map(|h| h.to_string())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn partition(text: &str, source: &str) -> Result<String, JsValue> {
    partition_json(text, source).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn pafp(text: &str, e: usize, f: usize) -> Result<String, JsValue> {
    pafp_json(text, e, f).map_err(|err| JsValue::from_str(&err))
}

#[wasm_bindgen]
pub fn random_instance(n: usize, m: usize, k: usize, seed: u32) -> Result<String, JsValue> {
    random_text(n, m, k, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn chain_instance(len: usize, k: usize) -> Result<String, JsValue> {
    chain_text(len, k).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_view_has_edge_classes() {
        let v: serde_json::Value =
            serde_json::from_str(&partition_json("k=3\nx a b\na b y\nz w u\n", "x").unwrap())
                .unwrap();
        assert_eq!(v["lcc"], serde_json::json!(["x", "a", "b"]));
        assert_eq!(v["edge_list"][0]["crossing"], true);
        assert_eq!(v["edge_list"][1]["class"], "cut");
        assert_eq!(v["edge_list"][2]["class"], "exterior");
        assert_eq!(v["outside"], serde_json::json!(["y", "z", "w", "u"]));
        assert_eq!(v["padded"], false);
    }

    #[test]
    fn partition_pads_and_reports_errors() {
        let v: serde_json::Value =
            serde_json::from_str(&partition_json("k=3\nx a\n", "x").unwrap()).unwrap();
        assert_eq!(v["padded"], true);
        assert!(partition_json("k=3\nx a b\n", "q").is_err());
        assert!(partition_json("x a b\n", "x").is_err());
    }

    #[test]
    fn pafp_view_on_three_edges() {
        let text = "k=3\n1 2 3\n3 4 5\n4 5 6\n";
        let v: serde_json::Value = serde_json::from_str(&pafp_json(text, 0, 2).unwrap()).unwrap();
        assert_eq!(v["answer"], false);
        assert_eq!(v["path"], serde_json::Value::Null);
        assert_eq!(v["edges"].as_array().unwrap().len(), 2);
        let v: serde_json::Value = serde_json::from_str(&pafp_json(text, 0, 1).unwrap()).unwrap();
        assert_eq!(v["path"], serde_json::json!(["e0", "e1"]));
    }

    #[test]
    fn generators() {
        assert_eq!(chain_text(2, 3).unwrap(), "k=3\n0 1 2\n2 3 4\n");
        assert_eq!(
            random_text(6, 3, 3, 1).unwrap(),
            random_text(6, 3, 3, 1).unwrap()
        );
        assert!(random_text(2, 3, 3, 1).is_err());
    }
}
