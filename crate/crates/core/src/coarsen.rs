//! Multilevel coarsening: heavy-edge matching with two-hop augmentation,
//! followed by contraction of matched pairs.

use rayon::prelude::*;

use crate::graph::{Graph, Weight};

/// Coarsening knobs. Defaults stop at 200 vertices.
#[derive(Clone, Copy, Debug)]
pub struct CoarsenConfig {
    /// Stop once the coarsest graph has at most this many vertices.
    pub target: usize,
    /// Upper bound on the weight of a coarse vertex; pairs heavier than this
    /// are never matched.
    pub max_vertex_weight: Weight,
    /// A level whose size ratio exceeds this counts as stagnant.
    pub stagnation_ratio: f64,
    pub max_levels: usize,
}

impl Default for CoarsenConfig {
    fn default() -> Self {
        CoarsenConfig {
            target: 200,
            max_vertex_weight: Weight::MAX,
            stagnation_ratio: 0.95,
            max_levels: 64,
        }
    }
}

/// `partner[v] == v` for unmatched vertices.
pub type Matching = Vec<usize>;

/// Computes a matching in two phases.
///
/// Heavy-edge phase: vertices are visited in ascending id order; each
/// unmatched vertex takes its heaviest unmatched neighbor (ties to the lowest
/// id). Two-hop phase: each still-unmatched vertex, again in ascending order,
/// is paired with the lowest-id unmatched vertex sharing a neighbor with it.
/// Pairs whose combined weight exceeds `max_vertex_weight` are skipped.
pub fn match_vertices(g: &Graph, max_vertex_weight: Weight) -> Matching {
    let n = g.n();
    let mut partner: Vec<usize> = (0..n).collect();
    let mut matched = vec![false; n];
    let fits = |a: usize, b: usize| g.vertex_weight(a) + g.vertex_weight(b) <= max_vertex_weight;

    for v in 0..n {
        if matched[v] {
            continue;
        }
        let mut best: Option<(usize, Weight)> = None;
        for (u, w) in g.neighbors(v) {
            if !matched[u] && fits(v, u) && best.is_none_or(|(_, bw)| w > bw) {
                best = Some((u, w));
            }
        }
        if let Some((u, _)) = best {
            partner[v] = u;
            partner[u] = v;
            matched[v] = true;
            matched[u] = true;
        }
    }

    // `cursor[u]` indexes the first entry of u's row that may still be
    // available. Availability only ever goes from true to false.
    let mut available: Vec<bool> = matched.iter().map(|&m| !m).collect();
    let mut cursor: Vec<usize> = (0..n).map(|u| g.row(u).start).collect();
    let adj = g.adjacency();
    const SCAN_LIMIT: usize = 64;
    for v in 0..n {
        if !available[v] {
            continue;
        }
        available[v] = false;
        let mut best: Option<usize> = None;
        for (u, _) in g.neighbors(v) {
            let end = g.row(u).end;
            while cursor[u] < end && !available[adj[cursor[u]]] {
                cursor[u] += 1;
            }
            for &x in adj[cursor[u]..end].iter().take(SCAN_LIMIT) {
                if available[x] && fits(v, x) {
                    if best.is_none_or(|b| x < b) {
                        best = Some(x);
                    }
                    break;
                }
            }
        }
        if let Some(x) = best {
            available[x] = false;
            partner[v] = x;
            partner[x] = v;
        }
    }
    partner
}

/// Contracts matched pairs into coarse vertices. Coarse ids follow the
/// ascending order of each pair's smaller member. Returns the coarse graph
/// and the fine-to-coarse map.
pub fn contract(g: &Graph, matching: &[usize]) -> (Graph, Vec<usize>) {
    let n = g.n();
    debug_assert_eq!(matching.len(), n);
    let mut map = vec![usize::MAX; n];
    let mut members: Vec<(usize, usize)> = Vec::with_capacity(n);
    for v in 0..n {
        let u = matching[v];
        debug_assert_eq!(matching[u], v, "matching is not symmetric at {v}");
        if v <= u {
            map[v] = members.len();
            map[u] = members.len();
            members.push((v, u));
        }
    }
    let nc = members.len();

    let rows: Vec<Vec<(usize, Weight)>> = members
        .par_iter()
        .enumerate()
        .map_init(
            || (vec![0 as Weight; nc], Vec::new()),
            |(acc, touched), (c, &(a, b))| {
                let mut absorb = |v: usize| {
                    for (u, w) in g.neighbors(v) {
                        let cu = map[u];
                        if cu == c {
                            continue;
                        }
                        if acc[cu] == 0 {
                            touched.push(cu);
                        }
                        acc[cu] += w;
                    }
                };
                absorb(a);
                if b != a {
                    absorb(b);
                }
                touched.sort_unstable();
                let row = touched.iter().map(|&cu| (cu, acc[cu])).collect();
                for &cu in touched.iter() {
                    acc[cu] = 0;
                }
                touched.clear();
                row
            },
        )
        .collect();

    let mut row_offsets = Vec::with_capacity(nc + 1);
    row_offsets.push(0);
    for r in &rows {
        row_offsets.push(row_offsets.last().unwrap() + r.len());
    }
    let mut adjacency = Vec::with_capacity(*row_offsets.last().unwrap());
    let mut edge_weights = Vec::with_capacity(adjacency.capacity());
    for r in rows {
        for (u, w) in r {
            adjacency.push(u);
            edge_weights.push(w);
        }
    }
    let vertex_weights = members
        .iter()
        .map(|&(a, b)| {
            if a == b {
                g.vertex_weight(a)
            } else {
                g.vertex_weight(a) + g.vertex_weight(b)
            }
        })
        .collect();
    let coarse = Graph::from_sorted_csr_unchecked(row_offsets, adjacency, edge_weights, vertex_weights);
    (coarse, map)
}

/// Graphs `G_0` (finest) through `G_l` (coarsest) with the maps between them.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    levels: Vec<Graph>,
    /// `maps[i]` sends vertices of `levels[i]` to vertices of `levels[i + 1]`.
    maps: Vec<Vec<usize>>,
}

impl Hierarchy {
    pub fn levels(&self) -> &[Graph] {
        &self.levels
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &Graph {
        &self.levels[0]
    }

    pub fn coarsest(&self) -> &Graph {
        self.levels.last().unwrap()
    }
}

/// Repeatedly matches and contracts until the graph has at most
/// `cfg.target` vertices, two consecutive levels shrink by less than
/// `1 - cfg.stagnation_ratio`, a matching finds no pairs, or
/// `cfg.max_levels` levels exist.
pub fn build_hierarchy(g: Graph, cfg: &CoarsenConfig) -> Hierarchy {
    let mut levels = vec![g];
    let mut maps = Vec::new();
    let mut stagnant = 0;
    while levels.len() < cfg.max_levels {
        let fine = levels.last().unwrap();
        if fine.n() <= cfg.target.max(1) {
            break;
        }
        let matching = match_vertices(fine, cfg.max_vertex_weight);
        if matching.iter().enumerate().all(|(v, &u)| u == v) {
            break;
        }
        let (coarse, map) = contract(fine, &matching);
        let ratio = coarse.n() as f64 / fine.n() as f64;
        levels.push(coarse);
        maps.push(map);
        if ratio > cfg.stagnation_ratio {
            stagnant += 1;
            if stagnant >= 2 {
                break;
            }
        } else {
            stagnant = 0;
        }
    }
    Hierarchy { levels, maps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::partition::PartitionState;
    use crate::preprocess::preprocess;
    use proptest::prelude::*;

    fn graph(n: usize, edges: &[(usize, usize, Weight)]) -> Graph {
        preprocess(edges, n, None).unwrap().graph
    }

    fn pairs(m: &Matching) -> Vec<(usize, usize)> {
        m.iter()
            .enumerate()
            .filter(|&(v, &u)| v < u)
            .map(|(v, &u)| (v, u))
            .collect()
    }

    #[test]
    fn matching_examples() {
        let e = graph(2, &[(0, 1, 1)]);
        assert_eq!(pairs(&match_vertices(&e, Weight::MAX)), vec![(0, 1)]);

        let p = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        let m = match_vertices(&p, Weight::MAX);
        assert_eq!(pairs(&m), vec![(0, 1)]);
        assert_eq!(m[2], 2);

        let star = graph(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]);
        let m = match_vertices(&star, Weight::MAX);
        assert_eq!(pairs(&m), vec![(0, 1), (2, 3)]);
        assert_eq!(m[4], 4);
    }

    #[test]
    fn heavy_edge_preferred() {
        let g = graph(3, &[(0, 1, 1), (0, 2, 5)]);
        assert_eq!(pairs(&match_vertices(&g, Weight::MAX)), vec![(0, 2)]);
    }

    #[test]
    fn weight_cap_blocks_pairs() {
        let g = graph(2, &[(0, 1, 1)]);
        assert_eq!(pairs(&match_vertices(&g, 1)), vec![]);
    }

    #[test]
    fn contract_examples() {
        let e = graph(2, &[(0, 1, 3)]);
        let (c, map) = contract(&e, &[1, 0]);
        assert_eq!((c.n(), c.edge_count()), (1, 0));
        assert_eq!(c.vertex_weight(0), 2);
        assert_eq!(map, vec![0, 0]);

        let sq = graph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        let (c, map) = contract(&sq, &[1, 0, 3, 2]);
        assert_eq!(c.n(), 2);
        assert_eq!(c.edge_weight(0, 1), Some(2));
        assert_eq!(map, vec![0, 0, 1, 1]);

        let tri = graph(3, &[(0, 1, 4), (1, 2, 2), (0, 2, 3)]);
        let (c, _) = contract(&tri, &[1, 0, 2]);
        assert_eq!(c.n(), 2);
        assert_eq!(c.edge_weight(0, 1), Some(5));
        assert_eq!(c.vertex_weights(), &[2, 1]);
    }

    #[test]
    fn small_graph_single_level() {
        let h = build_hierarchy(generate::path(10), &CoarsenConfig::default());
        assert_eq!(h.num_levels(), 1);
        assert!(h.maps().is_empty());
    }

    #[test]
    fn long_path_coarsens() {
        let h = build_hierarchy(generate::path(1 << 12), &CoarsenConfig::default());
        assert!(h.num_levels() >= 5, "{} levels", h.num_levels());
        assert!(h.coarsest().n() <= 200);
        for w in h.levels().windows(2) {
            assert!(w[1].n() < w[0].n());
            assert_eq!(w[1].total_vertex_weight(), 1 << 12);
        }
    }

    #[test]
    fn matching_only_exit() {
        // Disjoint edges: one contraction leaves isolated vertices with
        // nothing left to match.
        let g = Graph::from_csr(vec![0, 1, 2, 3, 4], vec![1, 0, 3, 2], vec![1; 4], vec![1; 4]).unwrap();
        let cfg = CoarsenConfig {
            target: 1,
            ..Default::default()
        };
        let h = build_hierarchy(g, &cfg);
        assert_eq!(h.num_levels(), 2);
        assert_eq!(h.coarsest().n(), 2);
        assert_eq!(h.coarsest().edge_count(), 0);
    }

    #[test]
    fn stagnation_exit_after_two_slow_levels() {
        let cfg = CoarsenConfig {
            target: 1,
            stagnation_ratio: 0.4,
            ..Default::default()
        };
        let h = build_hierarchy(generate::path(64), &cfg);
        assert_eq!(h.num_levels(), 3);
    }

    #[test]
    fn level_cap() {
        let cfg = CoarsenConfig {
            target: 1,
            max_levels: 3,
            ..Default::default()
        };
        let h = build_hierarchy(generate::path(64), &cfg);
        assert_eq!(h.num_levels(), 3);
    }

    proptest! {
        #[test]
        fn hierarchy_invariants(
            n in 2usize..80,
            raw in prop::collection::vec((0usize..80, 0usize..80, 1i64..4), 1..200),
            assign in prop::collection::vec(0usize..3, 80),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(u, v, w)| (u % n, v % n, w)).collect();
            let Ok(pre) = preprocess(&edges, n, None) else { return Ok(()) };
            let cfg = CoarsenConfig { target: 2, ..Default::default() };
            let h = build_hierarchy(pre.graph, &cfg);
            for (i, map) in h.maps().iter().enumerate() {
                let (fine, coarse) = (&h.levels()[i], &h.levels()[i + 1]);
                prop_assert_eq!(coarse.validate(), Ok(()));
                prop_assert!(coarse.n() < fine.n());
                prop_assert_eq!(coarse.total_vertex_weight(), fine.total_vertex_weight());
                let mut hit = vec![false; coarse.n()];
                for &c in map { hit[c] = true; }
                prop_assert!(hit.iter().all(|&h| h));
                // cut preservation under projection
                let cparts: Vec<usize> = (0..coarse.n()).map(|c| assign[c]).collect();
                let fparts: Vec<usize> = map.iter().map(|&c| cparts[c]).collect();
                let pc = PartitionState::new(coarse, cparts, 3).unwrap();
                let pf = PartitionState::new(fine, fparts, 3).unwrap();
                prop_assert_eq!(pc.cutsize(), pf.cutsize());
            }
            let m = match_vertices(h.finest(), Weight::MAX);
            for v in 0..m.len() {
                prop_assert_eq!(m[m[v]], v);
            }
        }
    }
}
