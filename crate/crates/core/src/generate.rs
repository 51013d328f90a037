//! Synthetic graph generators. All outputs go through [`preprocess`], so
//! they are connected and satisfy every [`Graph`] invariant.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Weight};
use crate::preprocess::preprocess;

fn build(n: usize, edges: &[(usize, usize, Weight)]) -> Graph {
    preprocess(edges, n, None).expect("generator produced no edges").graph
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v, 1)).collect();
    build(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v, 1)).collect();
    edges.push((n - 1, 0, 1));
    build(n, &edges)
}

/// `w x h` 4-neighbor mesh, row-major.
pub fn grid2d(w: usize, h: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * w * h);
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1, 1));
            }
            if y + 1 < h {
                edges.push((v, v + w, 1));
            }
        }
    }
    build(w * h, &edges)
}

/// `s x s x s` 6-neighbor mesh.
pub fn grid3d(s: usize) -> Graph {
    let idx = |x: usize, y: usize, z: usize| (z * s + y) * s + x;
    let mut edges = Vec::with_capacity(3 * s * s * s);
    for z in 0..s {
        for y in 0..s {
            for x in 0..s {
                let v = idx(x, y, z);
                if x + 1 < s {
                    edges.push((v, idx(x + 1, y, z), 1));
                }
                if y + 1 < s {
                    edges.push((v, idx(x, y + 1, z), 1));
                }
                if z + 1 < s {
                    edges.push((v, idx(x, y, z + 1), 1));
                }
            }
        }
    }
    build(s * s * s, &edges)
}

/// Recursive-matrix (R-MAT) graph with `2^scale` vertex slots and
/// `edge_factor * 2^scale` sampled edges, using the usual (0.57, 0.19, 0.19)
/// quadrant probabilities. Only the largest component is kept.
pub fn rmat(scale: u32, edge_factor: usize, seed: u64) -> Graph {
    let n = 1usize << scale;
    let (a, b, c) = (0.57, 0.19, 0.19);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Scramble ids so hubs are not clustered at low ids.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::with_capacity(edge_factor * n);
    for _ in 0..edge_factor * n {
        let (mut u, mut v) = (0usize, 0usize);
        for bit in (0..scale).rev() {
            let r: f64 = rng.gen();
            let (du, dv) = if r < a {
                (0, 0)
            } else if r < a + b {
                (0, 1)
            } else if r < a + b + c {
                (1, 0)
            } else {
                (1, 1)
            };
            u |= du << bit;
            v |= dv << bit;
        }
        edges.push((perm[u], perm[v], 1));
    }
    build(n, &edges)
}

/// Random geometric graph on the unit square: `n` uniform points joined when
/// closer than `radius`.
pub fn random_geometric(n: usize, radius: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let cells = ((1.0 / radius).floor() as usize).max(1);
    let cell_of = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
    for (i, &(x, y)) in pts.iter().enumerate() {
        grid[cell_of(y) * cells + cell_of(x)].push(i);
    }
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = (cell_of(x), cell_of(y));
        for gy in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for gx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &grid[gy * cells + gx] {
                    if j > i {
                        let (dx, dy) = (pts[j].0 - x, pts[j].1 - y);
                        if dx * dx + dy * dy < r2 {
                            edges.push((i, j, 1));
                        }
                    }
                }
            }
        }
    }
    build(n, &edges)
}

/// Connected random graph: a random spanning tree plus `extra` random edges,
/// with edge weights drawn from `1..=max_edge_weight`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, extra: usize, max_edge_weight: Weight) -> Graph {
    assert!(n >= 2);
    let mut edges = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(1..=max_edge_weight)));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        edges.push((u, v, rng.gen_range(1..=max_edge_weight)));
    }
    build(n, &edges)
}
