//! Deterministic input builders for the engine benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rendermatch_core::{ConceptGraph, NodeId};

/// Random rooted tree with `nodes` concepts, identical for a given seed.
pub fn random_tree_text(nodes: usize, seed: u64) -> String {
    assert!(nodes >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("concept n0 -\n");
    for i in 1..nodes {
        let parent = rng.gen_range(0..i);
        text.push_str(&format!("concept n{i} n{parent}\n"));
    }
    text
}

/// Single path of `depth` nodes: the worst case for ancestor walks.
pub fn chain_text(depth: usize) -> String {
    assert!(depth >= 1);
    let mut text = String::from("concept n0 -\n");
    for i in 1..depth {
        text.push_str(&format!("concept n{i} n{}\n", i - 1));
    }
    text
}

/// Pre-drawn node pairs so the benchmark loop measures similarity alone.
pub fn sample_pairs(graph: &ConceptGraph, count: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    let nodes: Vec<NodeId> = graph.iter().map(|(id, _)| id).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                nodes[rng.gen_range(0..nodes.len())],
                nodes[rng.gen_range(0..nodes.len())],
            )
        })
        .collect()
}
