//! Partition state and quality metrics.

use crate::error::PartitionError;
use crate::graph::{Graph, Weight};

/// Absorbs floating point noise in `(1 + λ) W / k` when the exact value is an
/// integer.
const LIMIT_EPS: f64 = 1e-9;

/// Largest allowed part weight, `⌊(1 + λ) W / k⌋`.
pub fn balance_limit(total_weight: Weight, k: usize, imbalance: f64) -> Weight {
    ((1.0 + imbalance) * total_weight as f64 / k as f64 + LIMIT_EPS).floor() as Weight
}

/// A k-way assignment of vertices to parts with cached part weights and
/// cutsize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionState {
    pub(crate) parts: Vec<usize>,
    pub(crate) k: usize,
    pub(crate) part_weights: Vec<Weight>,
    pub(crate) cutsize: Weight,
}

impl PartitionState {
    pub fn new(g: &Graph, parts: Vec<usize>, k: usize) -> Result<Self, PartitionError> {
        let cutsize = cutsize(g, &parts, k)?;
        let mut part_weights = vec![0; k];
        for (v, &p) in parts.iter().enumerate() {
            part_weights[p] += g.vertex_weight(v);
        }
        Ok(PartitionState {
            parts,
            k,
            part_weights,
            cutsize,
        })
    }

    /// Every vertex in part 0.
    pub fn single_part(g: &Graph) -> Self {
        PartitionState {
            parts: vec![0; g.n()],
            k: 1,
            part_weights: vec![g.total_vertex_weight()],
            cutsize: 0,
        }
    }

    #[inline]
    pub fn part(&self, v: usize) -> usize {
        self.parts[v]
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.parts
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn part_weights(&self) -> &[Weight] {
        &self.part_weights
    }

    #[inline]
    pub fn cutsize(&self) -> Weight {
        self.cutsize
    }

    pub fn total_weight(&self) -> Weight {
        self.part_weights.iter().sum()
    }

    pub fn max_part_weight(&self) -> Weight {
        self.part_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn is_balanced(&self, imbalance: f64) -> bool {
        is_balanced(self, imbalance)
    }

    pub fn imbalance(&self) -> f64 {
        imbalance(self)
    }

    /// Recomputes weights and cutsize from scratch and compares with the
    /// cached values.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let fresh = PartitionState::new(g, self.parts.clone(), self.k).map_err(|e| e.to_string())?;
        if fresh.part_weights != self.part_weights {
            return Err(format!(
                "cached part weights {:?} != recomputed {:?}",
                self.part_weights, fresh.part_weights
            ));
        }
        if fresh.cutsize != self.cutsize {
            return Err(format!(
                "cached cutsize {} != recomputed {}",
                self.cutsize, fresh.cutsize
            ));
        }
        Ok(())
    }
}

/// Total weight of edges whose endpoints lie in different parts, each
/// undirected edge counted once.
pub fn cutsize(g: &Graph, parts: &[usize], k: usize) -> Result<Weight, PartitionError> {
    if k == 0 {
        return Err(PartitionError::ZeroParts);
    }
    if parts.len() != g.n() {
        return Err(PartitionError::LengthMismatch {
            got: parts.len(),
            expected: g.n(),
        });
    }
    if let Some((vertex, &part)) = parts.iter().enumerate().find(|(_, &p)| p >= k) {
        return Err(PartitionError::PartOutOfRange { vertex, part, k });
    }
    let mut cut = 0;
    for v in 0..g.n() {
        for (u, w) in g.neighbors(v) {
            if u > v && parts[u] != parts[v] {
                cut += w;
            }
        }
    }
    Ok(cut)
}

/// True iff every part weight is at most [`balance_limit`].
pub fn is_balanced(p: &PartitionState, imbalance: f64) -> bool {
    let limit = balance_limit(p.total_weight(), p.k, imbalance);
    p.part_weights.iter().all(|&w| w <= limit)
}

/// Heaviest part weight relative to the average `W / k`.
pub fn imbalance(p: &PartitionState) -> f64 {
    let total = p.total_weight();
    if total == 0 {
        return 1.0;
    }
    p.max_part_weight() as f64 / (total as f64 / p.k as f64)
}
