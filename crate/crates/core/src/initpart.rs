//! Greedy graph growing for the coarsest graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::PartitionError;
use crate::graph::{Graph, Weight};
use crate::partition::{balance_limit, PartitionState};

/// Partitions `g` into `k` parts by growing regions from `k` spread-out seed
/// vertices, keeping the best of `restarts` attempts.
///
/// Each attempt draws its first seed at random and picks every further seed
/// farthest (in BFS hops) from those already chosen. The lightest part whose
/// best-connected unassigned neighbor still fits under the balance limit
/// then absorbs that neighbor. Once no part can grow this way, the lightest
/// part takes the unassigned vertex it is most connected to, until every
/// vertex is assigned. Attempts are ranked
/// by balance first, then cutsize; attempt `i` depends only on `seed` and
/// `i`, so more restarts never give a worse result.
pub fn initial_partition(
    g: &Graph,
    k: usize,
    imbalance: f64,
    seed: u64,
    restarts: usize,
) -> Result<PartitionState, PartitionError> {
    if k == 0 {
        return Err(PartitionError::ZeroParts);
    }
    if k > g.n() {
        return Err(PartitionError::TooManyParts { k, n: g.n() });
    }
    if k == 1 {
        return Ok(PartitionState::single_part(g));
    }
    let limit = balance_limit(g.total_vertex_weight(), k, imbalance);
    let best = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|attempt| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(attempt);
            let parts = grow(g, k, limit, &mut rng);
            let p = PartitionState::new(g, parts, k).expect("grown parts are in range");
            let score = (!p.is_balanced(imbalance), p.cutsize(), attempt);
            (score, p)
        })
        .min_by_key(|(score, _)| *score)
        .map(|(_, p)| p)
        .unwrap();
    Ok(best)
}

fn farthest_seeds<R: Rng>(g: &Graph, k: usize, rng: &mut R) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut seeds = Vec::with_capacity(k);
    let mut next = rng.gen_range(0..n);
    let mut queue = VecDeque::new();
    loop {
        seeds.push(next);
        if seeds.len() == k {
            return seeds;
        }
        // Multi-source BFS distances shrink monotonically as seeds are added,
        // so a BFS from the new seed only needs to relax.
        dist[next] = 0;
        queue.push_back(next);
        while let Some(v) = queue.pop_front() {
            for (u, _) in g.neighbors(v) {
                if dist[v] + 1 < dist[u] {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        // Seeds have distance 0, so they are only picked once every vertex is
        // a seed, which cannot happen while seeds.len() < k <= n.
        next = (0..n).max_by_key(|&v| (dist[v], Reverse(v))).unwrap();
    }
}

struct Grower<'g> {
    g: &'g Graph,
    k: usize,
    limit: Weight,
    parts: Vec<usize>,
    weights: Vec<Weight>,
    /// `conn[p * n + v]`: weight from unassigned `v` into part `p`. Dense is
    /// fine for the coarsest graph, which is small by construction.
    conn: Vec<Weight>,
    frontier: Vec<BinaryHeap<(Weight, Reverse<usize>)>>,
}

const UNASSIGNED: usize = usize::MAX;

impl Grower<'_> {
    fn assign(&mut self, v: usize, p: usize) {
        let n = self.g.n();
        self.parts[v] = p;
        self.weights[p] += self.g.vertex_weight(v);
        for (u, w) in self.g.neighbors(v) {
            if self.parts[u] == UNASSIGNED {
                self.conn[p * n + u] += w;
                self.frontier[p].push((self.conn[p * n + u], Reverse(u)));
            }
        }
    }

    /// Lightest part (ties to lowest id) whose best frontier vertex fits
    /// under the limit.
    fn lightest_open_part(&mut self) -> Option<usize> {
        let n = self.g.n();
        let mut choice: Option<usize> = None;
        for p in 0..self.k {
            while let Some(&(c, Reverse(v))) = self.frontier[p].peek() {
                if self.parts[v] != UNASSIGNED || self.conn[p * n + v] != c {
                    self.frontier[p].pop();
                } else {
                    break;
                }
            }
            let fits = self.frontier[p]
                .peek()
                .is_some_and(|&(_, Reverse(v))| self.weights[p] + self.g.vertex_weight(v) <= self.limit);
            if fits && choice.is_none_or(|q| self.weights[p] < self.weights[q]) {
                choice = Some(p);
            }
        }
        choice
    }
}

fn grow<R: Rng>(g: &Graph, k: usize, limit: Weight, rng: &mut R) -> Vec<usize> {
    let n = g.n();
    let mut s = Grower {
        g,
        k,
        limit,
        parts: vec![UNASSIGNED; n],
        weights: vec![0; k],
        conn: vec![0; k * n],
        frontier: vec![BinaryHeap::new(); k],
    };
    for (p, v) in farthest_seeds(g, k, rng).into_iter().enumerate() {
        s.assign(v, p);
    }
    for _ in k..n {
        let (v, p) = match s.lightest_open_part() {
            Some(p) => {
                let (_, Reverse(v)) = s.frontier[p].pop().unwrap();
                (v, p)
            }
            None => {
                // Every part is full or cut off from the unassigned vertices.
                let p = (0..k).min_by_key(|&p| (s.weights[p], p)).unwrap();
                let v = (0..n)
                    .filter(|&v| s.parts[v] == UNASSIGNED)
                    .max_by_key(|&v| (s.conn[p * n + v], Reverse(v)))
                    .unwrap();
                (v, p)
            }
        };
        s.assign(v, p);
    }
    s.parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    /// Best balanced cutsize over every assignment, for tiny graphs.
    fn exhaustive_best(g: &Graph, k: usize, imbalance: f64) -> Weight {
        let n = g.n();
        let mut best = Weight::MAX;
        let mut parts = vec![0usize; n];
        loop {
            let p = PartitionState::new(g, parts.clone(), k).unwrap();
            if p.is_balanced(imbalance) {
                best = best.min(p.cutsize());
            }
            let mut i = 0;
            while i < n {
                parts[i] += 1;
                if parts[i] < k {
                    break;
                }
                parts[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
        }
    }

    #[test]
    fn single_part() {
        let g = generate::grid2d(3, 3);
        let p = initial_partition(&g, 1, 0.03, 0, 8).unwrap();
        assert!(p.parts().iter().all(|&x| x == 0));
        assert_eq!(p.cutsize(), 0);
    }

    #[test]
    fn one_vertex_per_part() {
        let g = generate::grid2d(3, 2);
        let p = initial_partition(&g, 6, 0.03, 5, 4).unwrap();
        let mut sorted = p.parts().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        assert_eq!(p.cutsize(), g.total_edge_weight());
    }

    #[test]
    fn four_cycle_bisection_is_optimal() {
        let g = generate::cycle(4);
        assert_eq!(exhaustive_best(&g, 2, 0.0), 2);
        for seed in 0..10 {
            let p = initial_partition(&g, 2, 0.0, seed, 8).unwrap();
            assert_eq!(p.cutsize(), 2);
            assert_eq!(p.part_weights(), &[2, 2]);
        }
    }

    #[test]
    fn too_many_parts() {
        let g = generate::path(3);
        assert_eq!(
            initial_partition(&g, 4, 0.03, 0, 1).unwrap_err(),
            PartitionError::TooManyParts { k: 4, n: 3 }
        );
    }

    #[test]
    fn all_parts_nonempty_and_restarts_monotone() {
        let g = generate::random_geometric(200, 0.15, 9);
        for k in [2, 5, 16] {
            let mut last = (true, Weight::MAX);
            for restarts in [1, 2, 4, 8] {
                let p = initial_partition(&g, k, 0.03, 11, restarts).unwrap();
                assert!(p.part_weights().iter().all(|&w| w > 0));
                let score = (!p.is_balanced(0.03), p.cutsize());
                assert!(score <= last);
                last = score;
            }
        }
    }
}
