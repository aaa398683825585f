//! Graphviz rendering of archipelagos and bicolored graphs.

use std::fmt::Write;

use crate::archipelago::{Archipelago, EdgePartition};
use crate::hypergraph::Hypergraph;
use crate::pafp::{BicoloredGraph, Color};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// One cluster per island with entry vertices double-circled. Hyperedges
/// are drawn as a point joined to each of their vertices: black inside an
/// island, red for crossing edges, blue for cut edges and grey for exterior
/// ones. Dashed arcs follow the island arborescence.
pub fn archipelago_dot(h: &Hypergraph, a: &Archipelago, p: &EdgePartition) -> String {
    let mut out = String::new();
    out.push_str("digraph archipelago {\n  compound=true;\n  node [shape=circle];\n");
    for island in a.islands() {
        writeln!(out, "  subgraph cluster_{} {{", island.id.0).unwrap();
        writeln!(out, "    label=\"{}\";", island.id).unwrap();
        let mut members = island.vertices.clone();
        members.sort_unstable();
        for v in members {
            let shape = if island.entry.contains(v) {
                " [shape=doublecircle]"
            } else {
                ""
            };
            writeln!(out, "    {}{};", quote(h.token(v)), shape).unwrap();
        }
        out.push_str("  }\n");
    }
    let mut outside: Vec<_> = h
        .vertices()
        .filter(|&v| !a.contains(v))
        .filter(|&v| h.edges().iter().any(|e| e.contains(&v)))
        .collect();
    outside.sort_unstable();
    for v in outside {
        writeln!(out, "  {};", quote(h.token(v))).unwrap();
    }
    let mut styled: Vec<(usize, &str)> = Vec::new();
    for &e in &p.archipelago {
        let first = h.edge(e).iter().find_map(|&v| a.island_of(v));
        let spans = h.edge(e).iter().any(|&v| a.island_of(v) != first);
        styled.push((e, if spans { "red" } else { "black" }));
    }
    styled.extend(p.cut.iter().map(|&e| (e, "blue")));
    styled.extend(p.exterior.iter().map(|&e| (e, "grey")));
    styled.sort_unstable();
    for (e, color) in styled {
        let hub = quote(&format!("e{e}"));
        writeln!(
            out,
            "  {hub} [shape=point, color={color}, xlabel={}];",
            quote(&format!("e{e}"))
        )
        .unwrap();
        for &v in h.edge(e) {
            writeln!(
                out,
                "  {hub} -> {} [dir=none, color={color}];",
                quote(h.token(v))
            )
            .unwrap();
        }
    }
    for island in a.islands() {
        if let Some(parent) = a.parent(island.id) {
            let (Some(from), Some(to)) = (
                a.island(parent).and_then(|i| i.vertices.first()),
                island.vertices.first(),
            ) else {
                continue;
            };
            writeln!(
                out,
                "  {} -> {} [style=dashed, ltail=cluster_{}, lhead=cluster_{}];",
                quote(h.token(*from)),
                quote(h.token(*to)),
                parent.0,
                island.id.0
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Undirected rendering with blue and red edge colors.
pub fn bicolored_dot(g: &BicoloredGraph) -> String {
    let mut out = String::from("graph bicolored {\n");
    for u in 0..g.node_count() {
        writeln!(out, "  {};", quote(g.label(u))).unwrap();
    }
    for (u, v, c) in g.edges() {
        let color = match c {
            Color::Blue => "blue",
            Color::Red => "red",
        };
        writeln!(
            out,
            "  {} -- {} [color={color}];",
            quote(g.label(u)),
            quote(g.label(v))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
