//! Compressed sparse row graph with integral vertex and edge weights.

use std::ops::Range;

use crate::error::GraphError;

/// Vertex and edge weights, as well as every quantity derived from them
/// (part weights, cutsize, connectivity).
pub type Weight = i64;

/// Undirected weighted graph in CSR form.
///
/// Every undirected edge `{u, v}` is stored twice, once in each row, with the
/// same weight. Rows are kept sorted by neighbor id so that two graphs with
/// the same edge set compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<usize>,
    adjacency: Vec<usize>,
    edge_weights: Vec<Weight>,
    vertex_weights: Vec<Weight>,
    total_vertex_weight: Weight,
}

impl Graph {
    /// Builds a graph from raw CSR arrays, sorting each row and validating
    /// all structural invariants.
    pub fn from_csr(
        row_offsets: Vec<usize>,
        adjacency: Vec<usize>,
        edge_weights: Vec<Weight>,
        vertex_weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::assemble(row_offsets, adjacency, edge_weights, vertex_weights)?;
        g.sort_rows();
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph whose rows are already sorted and symmetric. Invariants
    /// are only checked in debug builds.
    pub(crate) fn from_sorted_csr_unchecked(
        row_offsets: Vec<usize>,
        adjacency: Vec<usize>,
        edge_weights: Vec<Weight>,
        vertex_weights: Vec<Weight>,
    ) -> Self {
        let total_vertex_weight = vertex_weights.iter().sum();
        let g = Graph {
            row_offsets,
            adjacency,
            edge_weights,
            vertex_weights,
            total_vertex_weight,
        };
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }

    fn assemble(
        row_offsets: Vec<usize>,
        adjacency: Vec<usize>,
        edge_weights: Vec<Weight>,
        vertex_weights: Vec<Weight>,
    ) -> Result<Self, GraphError> {
        let n = vertex_weights.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if row_offsets.len() != n + 1 {
            return Err(GraphError::Invalid(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n + 1
            )));
        }
        if row_offsets[0] != 0 || row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::Invalid(
                "row_offsets must start at 0 and be non-decreasing".into(),
            ));
        }
        if row_offsets[n] != adjacency.len() || adjacency.len() != edge_weights.len() {
            return Err(GraphError::Invalid(
                "row_offsets[n], adjacency and edge_weights lengths disagree".into(),
            ));
        }
        let total_vertex_weight = vertex_weights
            .iter()
            .try_fold(0 as Weight, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| GraphError::Invalid("total vertex weight overflows".into()))?;
        Ok(Graph {
            row_offsets,
            adjacency,
            edge_weights,
            vertex_weights,
            total_vertex_weight,
        })
    }

    fn sort_rows(&mut self) {
        for v in 0..self.n() {
            let r = self.row(v);
            let mut row: Vec<(usize, Weight)> = self.adjacency[r.clone()]
                .iter()
                .copied()
                .zip(self.edge_weights[r.clone()].iter().copied())
                .collect();
            row.sort_unstable();
            for (i, (u, w)) in row.into_iter().enumerate() {
                self.adjacency[r.start + i] = u;
                self.edge_weights[r.start + i] = w;
            }
        }
    }

    /// Checks every structural invariant: weights positive, no self-loops, no
    /// duplicate neighbors, sorted rows and symmetric edges with equal weight.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        if let Some(v) = self.vertex_weights.iter().position(|&w| w < 1) {
            return Err(GraphError::Invalid(format!("vertex {v} has non-positive weight")));
        }
        for v in 0..n {
            let r = self.row(v);
            let nbrs = &self.adjacency[r.clone()];
            for (i, (&u, &w)) in nbrs.iter().zip(&self.edge_weights[r]).enumerate() {
                if u >= n {
                    return Err(GraphError::Invalid(format!("vertex {v} has neighbor {u} out of range")));
                }
                if u == v {
                    return Err(GraphError::Invalid(format!("self-loop on vertex {v}")));
                }
                if w < 1 {
                    return Err(GraphError::Invalid(format!("edge ({v},{u}) has non-positive weight")));
                }
                if i > 0 && nbrs[i - 1] >= u {
                    return Err(GraphError::Invalid(format!(
                        "row {v} is unsorted or has a duplicate neighbor {u}"
                    )));
                }
                match self.edge_weight(u, v) {
                    Some(back) if back == w => {}
                    _ => {
                        return Err(GraphError::Invalid(format!(
                            "edge ({v},{u}) has no symmetric counterpart of equal weight"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.vertex_weights.len()
    }

    /// Number of undirected edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    #[inline]
    pub fn row(&self, v: usize) -> Range<usize> {
        self.row_offsets[v]..self.row_offsets[v + 1]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row_offsets[v + 1] - self.row_offsets[v]
    }

    /// Neighbors of `v` with the weight of the connecting edge.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, Weight)> + '_ {
        let r = self.row(v);
        self.adjacency[r.clone()]
            .iter()
            .copied()
            .zip(self.edge_weights[r].iter().copied())
    }

    /// Weight of edge `{u, v}`, if present. Binary search over the sorted row.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<Weight> {
        let r = self.row(u);
        self.adjacency[r.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.edge_weights[r.start + i])
    }

    #[inline]
    pub fn vertex_weight(&self, v: usize) -> Weight {
        self.vertex_weights[v]
    }

    pub fn vertex_weights(&self) -> &[Weight] {
        &self.vertex_weights
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn adjacency(&self) -> &[usize] {
        &self.adjacency
    }

    pub fn edge_weights(&self) -> &[Weight] {
        &self.edge_weights
    }

    #[inline]
    pub fn total_vertex_weight(&self) -> Weight {
        self.total_vertex_weight
    }

    /// Sum of all undirected edge weights.
    pub fn total_edge_weight(&self) -> Weight {
        self.edge_weights.iter().sum::<Weight>() / 2
    }

    pub fn weighted_degree(&self, v: usize) -> Weight {
        self.edge_weights[self.row(v)].iter().sum()
    }

    pub fn max_vertex_weight(&self) -> Weight {
        self.vertex_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn has_unit_vertex_weights(&self) -> bool {
        self.vertex_weights.iter().all(|&w| w == 1)
    }

    pub fn has_unit_edge_weights(&self) -> bool {
        self.edge_weights.iter().all(|&w| w == 1)
    }
}
