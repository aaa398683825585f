//! Seeded instance generators.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::Hypergraph;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("rank k={0} is below 3")]
    RankTooSmall(usize),
    #[error("cannot draw {k}-subsets from {n} vertices")]
    TooFewVertices { n: usize, k: usize },
    #[error("chain length must be at least 1")]
    EmptyChain,
}

/// `m` edges, each a uniformly random `k`-subset of the vertices
/// `v0..v{n-1}`. All `n` vertices are declared, isolated ones included.
pub fn gen_random(n: usize, m: usize, k: usize, seed: u64) -> Result<Hypergraph, GenError> {
    if k < 3 {
        return Err(GenError::RankTooSmall(k));
    }
    if n < k {
        return Err(GenError::TooFewVertices { n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<Vec<&str>> = (0..m)
        .map(|_| {
            let mut idx = sample(&mut rng, n, k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| names[i].as_str()).collect()
        })
        .collect();
    Ok(Hypergraph::with_vertices(k, &names, &edges).expect("generated edges are valid"))
}

/// A linear chain of `len` edges of size `k`: consecutive edges share
/// exactly one vertex and all other pairs are disjoint. Vertices are named
/// `0, 1, …, len·(k-1)`; vertex `0` sits in the first edge only.
pub fn gen_chain(len: usize, k: usize) -> Result<Hypergraph, GenError> {
    if k < 3 {
        return Err(GenError::RankTooSmall(k));
    }
    if len == 0 {
        return Err(GenError::EmptyChain);
    }
    let edges: Vec<Vec<String>> = (0..len)
        .map(|i| {
            (i * (k - 1)..=i * (k - 1) + k - 1)
                .map(|v| v.to_string())
                .collect()
        })
        .collect();
    Ok(Hypergraph::from_edges(k, &edges).expect("chain edges are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::is_q_linear;

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            gen_random(10, 6, 3, 42).unwrap(),
            gen_random(10, 6, 3, 42).unwrap()
        );
        assert_ne!(
            gen_random(10, 6, 3, 42).unwrap(),
            gen_random(10, 6, 3, 43).unwrap()
        );
    }

    #[test]
    fn random_edgeless() {
        let h = gen_random(5, 0, 3, 1).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (5, 0));
    }

    #[test]
    fn random_infeasible() {
        assert_eq!(
            gen_random(2, 1, 3, 0),
            Err(GenError::TooFewVertices { n: 2, k: 3 })
        );
        assert_eq!(gen_random(9, 1, 2, 0), Err(GenError::RankTooSmall(2)));
    }

    #[test]
    fn chain_shapes() {
        let one = gen_chain(1, 3).unwrap();
        assert_eq!((one.vertex_count(), one.edge_count()), (3, 1));
        let three = gen_chain(3, 3).unwrap();
        assert_eq!(three.vertex_count(), 7);
        assert!(is_q_linear(&three, &[0, 1, 2], 1));
        let four = gen_chain(5, 4).unwrap();
        assert!(is_q_linear(&four, &[0, 1, 2, 3, 4], 1));
        assert_eq!(four.vertex("0"), Some(crate::VertexId(0)));
        assert_eq!(gen_chain(0, 3), Err(GenError::EmptyChain));
    }
}
