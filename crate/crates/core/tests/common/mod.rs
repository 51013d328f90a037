//! Helpers shared by the integration tests: independent recomputations of
//! partition quality and a few random instance builders.
#![allow(dead_code)]

use std::collections::HashMap;

use jetpart::generate;
use jetpart::{Graph, PartitionState, Weight};
use rand::Rng;

/// Cut weight by a plain double loop over all adjacency entries.
pub fn naive_cut(g: &Graph, parts: &[usize]) -> Weight {
    let mut twice = 0;
    for v in 0..g.n() {
        for (u, w) in g.neighbors(v) {
            if parts[u] != parts[v] {
                twice += w;
            }
        }
    }
    twice / 2
}

pub fn naive_part_weights(g: &Graph, parts: &[usize], k: usize) -> Vec<Weight> {
    let mut w = vec![0; k];
    for v in 0..g.n() {
        w[parts[v]] += g.vertex_weight(v);
    }
    w
}

/// `⌊(1 + λ) W / k⌋`, computed in exact rational arithmetic where λ has at
/// most six decimals.
pub fn naive_limit(total: Weight, k: usize, imbalance: f64) -> Weight {
    let scale = 1_000_000i128;
    let lam = (imbalance * scale as f64).round() as i128;
    ((scale + lam) * total as i128 / (scale * k as i128)) as Weight
}

pub fn naive_balanced(g: &Graph, parts: &[usize], k: usize, imbalance: f64) -> bool {
    let limit = naive_limit(g.total_vertex_weight(), k, imbalance);
    naive_part_weights(g, parts, k).iter().all(|&w| w <= limit)
}

/// Connectivity of `v` to every part, from scratch.
pub fn naive_conn(g: &Graph, parts: &[usize], v: usize) -> HashMap<usize, Weight> {
    let mut c = HashMap::new();
    for (u, w) in g.neighbors(v) {
        *c.entry(parts[u]).or_insert(0) += w;
    }
    c
}

/// Connected random graph with `n` vertices; edge weights up to
/// `max_edge_weight`, average degree around `2 + 2 * density`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64, max_edge_weight: Weight) -> Graph {
    let extra = (density * n as f64) as usize;
    generate::random_connected(rng, n, extra, max_edge_weight)
}

/// Same graph with random vertex weights in `1..=max_weight`.
pub fn with_vertex_weights<R: Rng>(rng: &mut R, g: &Graph, max_weight: Weight) -> Graph {
    let vw: Vec<Weight> = (0..g.n()).map(|_| rng.gen_range(1..=max_weight)).collect();
    Graph::from_csr(
        g.row_offsets().to_vec(),
        g.adjacency().to_vec(),
        g.edge_weights().to_vec(),
        vw,
    )
    .unwrap()
}

pub fn random_parts<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// Round robin over a random permutation: part sizes differ by at most one.
pub fn round_robin_parts<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut parts = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        parts[v] = i % k;
    }
    parts
}

pub fn state(g: &Graph, parts: Vec<usize>, k: usize) -> PartitionState {
    PartitionState::new(g, parts, k).unwrap()
}

/// Minimum cut over all balanced bisections, by enumeration (vertex 0 is
/// pinned to part 0). `None` when no bisection is balanced.
pub fn exhaustive_bisection(g: &Graph, imbalance: f64) -> Option<Weight> {
    let n = g.n();
    assert!(n <= 20);
    let limit = naive_limit(g.total_vertex_weight(), 2, imbalance);
    let mut best = None;
    let mut parts = vec![0; n];
    for mask in 0u32..(1 << (n - 1)) {
        for (v, p) in parts.iter_mut().enumerate().skip(1) {
            *p = ((mask >> (v - 1)) & 1) as usize;
        }
        let w = naive_part_weights(g, &parts, 2);
        if w[0] > limit || w[1] > limit {
            continue;
        }
        let cut = naive_cut(g, &parts);
        if best.is_none_or(|b| cut < b) {
            best = Some(cut);
        }
    }
    best
}
