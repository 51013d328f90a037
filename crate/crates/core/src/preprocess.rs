//! Edge-list cleanup: self-loop removal, symmetrization, duplicate merging
//! and largest connected component extraction.

use crate::error::GraphError;
use crate::graph::{Graph, Weight};

/// Result of [`preprocess`]: the cleaned graph and, for each input vertex id,
/// its id in the cleaned graph (or `None` if it was dropped).
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub graph: Graph,
    pub mapping: Vec<Option<usize>>,
}

/// Minimal union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Turns an arbitrary weighted edge multiset over `n` vertices into a valid
/// [`Graph`].
///
/// Edges are treated as undirected; `(u, v)` and `(v, u)` are the same edge.
/// Duplicates keep the maximum weight. Only the largest connected component
/// (by vertex count, ties to the component holding the smallest vertex id)
/// survives, renumbered in ascending order of original id.
pub fn preprocess(
    edges: &[(usize, usize, Weight)],
    n: usize,
    vertex_weights: Option<&[Weight]>,
) -> Result<Preprocessed, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if let Some(vw) = vertex_weights {
        if vw.len() != n {
            return Err(GraphError::Invalid(format!(
                "{} vertex weights for {n} vertices",
                vw.len()
            )));
        }
        if let Some(&w) = vw.iter().find(|&&w| w < 1) {
            return Err(GraphError::NonPositiveWeight { weight: w });
        }
    }

    let mut cleaned: Vec<(usize, usize, Weight)> = Vec::with_capacity(edges.len());
    for &(u, v, w) in edges {
        for id in [u, v] {
            if id >= n {
                return Err(GraphError::VertexOutOfRange { id, n });
            }
        }
        if w < 1 {
            return Err(GraphError::NonPositiveWeight { weight: w });
        }
        if u != v {
            cleaned.push((u.min(v), u.max(v), w));
        }
    }
    if cleaned.is_empty() {
        return Err(GraphError::NoEdges);
    }
    // Sorting by (a, b, weight desc) puts the heaviest duplicate first.
    cleaned.sort_unstable_by(|x, y| (x.0, x.1, y.2).cmp(&(y.0, y.1, x.2)));
    cleaned.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);

    let mut sets = DisjointSets::new(n);
    for &(a, b, _) in &cleaned {
        sets.union(a, b);
    }
    let mut best_root = sets.find(0);
    for v in 1..n {
        let r = sets.find(v);
        if sets.size[r] > sets.size[best_root] {
            best_root = r;
        }
    }

    let mut mapping = vec![None; n];
    let mut kept = 0usize;
    for (v, slot) in mapping.iter_mut().enumerate() {
        if sets.find(v) == best_root {
            *slot = Some(kept);
            kept += 1;
        }
    }

    let mut degree = vec![0usize; kept];
    let component_edges: Vec<(usize, usize, Weight)> = cleaned
        .into_iter()
        .filter_map(|(a, b, w)| Some((mapping[a]?, mapping[b]?, w)))
        .collect();
    for &(a, b, _) in &component_edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut row_offsets = Vec::with_capacity(kept + 1);
    row_offsets.push(0);
    for d in &degree {
        row_offsets.push(row_offsets.last().unwrap() + d);
    }
    let m2 = *row_offsets.last().unwrap();
    let mut adjacency = vec![0; m2];
    let mut edge_weights = vec![0; m2];
    let mut cursor = row_offsets[..kept].to_vec();
    // Edges are sorted by (a, b) with a < b, so each row is filled in
    // ascending neighbor order: first the smaller ids, then the larger ones.
    for &(a, b, w) in &component_edges {
        adjacency[cursor[a]] = b;
        edge_weights[cursor[a]] = w;
        cursor[a] += 1;
        adjacency[cursor[b]] = a;
        edge_weights[cursor[b]] = w;
        cursor[b] += 1;
    }
    let vwgt = match vertex_weights {
        Some(vw) => (0..n).filter(|&v| mapping[v].is_some()).map(|v| vw[v]).collect(),
        None => vec![1; kept],
    };
    let graph = Graph::from_sorted_csr_unchecked(row_offsets, adjacency, edge_weights, vwgt);
    Ok(Preprocessed { graph, mapping })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dedupe_and_drop_self_loops() {
        let p = preprocess(&[(0, 1, 1), (1, 0, 1), (1, 1, 1)], 2, None).unwrap();
        assert_eq!(p.graph.n(), 2);
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.graph.edge_weight(0, 1), Some(1));
    }

    #[test]
    fn keeps_largest_component() {
        let p = preprocess(&[(0, 1, 1), (2, 3, 1), (3, 4, 1)], 5, None).unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.mapping, vec![None, None, Some(0), Some(1), Some(2)]);
        // path 0-1-2 after renumbering
        assert_eq!(p.graph.degree(1), 2);
    }

    #[test]
    fn duplicate_weights_merge_to_max() {
        let p = preprocess(&[(0, 1, 2), (0, 1, 5)], 2, None).unwrap();
        assert_eq!(p.graph.edge_weight(0, 1), Some(5));
        let p = preprocess(&[(1, 0, 5), (0, 1, 2)], 2, None).unwrap();
        assert_eq!(p.graph.edge_weight(1, 0), Some(5));
    }

    #[test]
    fn component_tie_goes_to_smallest_vertex() {
        let p = preprocess(&[(3, 4, 1), (1, 2, 1)], 5, None).unwrap();
        assert_eq!(p.mapping, vec![None, Some(0), Some(1), None, None]);
    }

    #[test]
    fn vertex_weights_follow_renumbering() {
        let p = preprocess(&[(1, 2, 1)], 3, Some(&[7, 8, 9])).unwrap();
        assert_eq!(p.graph.vertex_weights(), &[8, 9]);
    }

    #[test]
    fn errors() {
        assert_eq!(preprocess(&[(0, 0, 1)], 1, None).unwrap_err(), GraphError::NoEdges);
        assert_eq!(preprocess(&[], 0, None).unwrap_err(), GraphError::Empty);
        assert_eq!(
            preprocess(&[(0, 3, 1)], 2, None).unwrap_err(),
            GraphError::VertexOutOfRange { id: 3, n: 2 }
        );
        assert_eq!(
            preprocess(&[(0, 1, 0)], 2, None).unwrap_err(),
            GraphError::NonPositiveWeight { weight: 0 }
        );
    }

    proptest! {
        #[test]
        fn output_always_valid(
            n in 1usize..40,
            raw in prop::collection::vec((0usize..40, 0usize..40, 1i64..6), 0..120),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(u, v, w)| (u % n, v % n, w)).collect();
            match preprocess(&edges, n, None) {
                Ok(p) => {
                    prop_assert_eq!(p.graph.validate(), Ok(()));
                    prop_assert!(p.graph.n() >= 2);
                    let kept = p.mapping.iter().filter(|m| m.is_some()).count();
                    prop_assert_eq!(kept, p.graph.n());
                }
                Err(e) => prop_assert_eq!(e, GraphError::NoEdges),
            }
        }
    }
}
