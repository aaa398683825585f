use std::fs;
use std::path::PathBuf;

use linconn::dot::{archipelago_dot, bicolored_dot};
use linconn::{partition_archipelago, BicoloredGraph, Hypergraph};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Compares with the stored rendering; `UPDATE_GOLDEN=1` rewrites it.
fn check(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name} differs");
}

#[test]
fn archipelago_rendering() {
    let h = Hypergraph::parse(&fs::read_to_string(fixture("islands.hg")).unwrap()).unwrap();
    let (a, p) = partition_archipelago(&h, h.vertex("x").unwrap()).unwrap();
    assert_eq!(a.islands().count(), 2);
    check("islands.dot", &archipelago_dot(&h, &a, &p));
}

#[test]
fn bicolored_rendering() {
    let g = BicoloredGraph::parse(&fs::read_to_string(fixture("three.bg")).unwrap()).unwrap();
    check("three.dot", &bicolored_dot(&g));
}
