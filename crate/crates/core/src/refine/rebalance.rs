//! Rebalancing passes that evict low-loss vertices from oversized parts.
//!
//! Both passes share eviction: vertices of each oversized part are binned by
//! loss on a log scale, and the shortest prefix of the binned order whose
//! weight best matches the part's excess is evicted. The weak pass sends each
//! evicted vertex to its best connected light part. The strong pass lays the
//! light parts end to end over the evicted list, each taking a contiguous run
//! that fits its spare capacity.

use rayon::prelude::*;

use super::config::Limits;
use super::conn::{ConnectivityTable, Move};
use crate::error::NoValidDestination;
use crate::graph::{Graph, Weight};
use crate::partition::PartitionState;

/// Slots 0 (negative), 1 (zero) and `2 + ⌊log2 loss⌋` for positive losses up
/// to `2^31`; larger losses share the last slot.
pub const NUM_SLOTS: usize = 34;

pub fn loss_slot(loss: f64) -> usize {
    if loss < 0.0 {
        0
    } else if loss == 0.0 {
        1
    } else {
        // Fractional losses in (0, 1) stay above the zero slot.
        let log = loss.log2().floor().max(0.0) as usize;
        (2 + log).min(NUM_SLOTS - 1)
    }
}

/// Orders `vertices` by loss slot, then by `v mod rho` sub-bucket, then by
/// input order. `losses` is aligned with `vertices`.
pub fn bucket_losses(vertices: &[usize], losses: &[f64], rho: usize) -> Vec<usize> {
    debug_assert_eq!(vertices.len(), losses.len());
    let rho = rho.max(1);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); NUM_SLOTS * rho];
    for (&v, &loss) in vertices.iter().zip(losses) {
        buckets[loss_slot(loss) * rho + v % rho].push(v);
    }
    buckets.into_iter().flatten().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSelection {
    pub vertices: Vec<usize>,
    pub weight: Weight,
    /// Weight still missing when the list ran out before the deficit.
    pub shortfall: Weight,
}

/// Shortest non-empty prefix of `order` whose weight is closest to
/// `deficit`. Vertices heavier than `max_vertex_weight` are skipped.
pub fn select_prefix(g: &Graph, order: &[usize], deficit: f64, max_vertex_weight: f64) -> PrefixSelection {
    let mut taken = Vec::new();
    let mut sum: Weight = 0;
    let mut best: Option<(f64, usize, Weight)> = None;
    for &v in order {
        let w = g.vertex_weight(v);
        if w as f64 > max_vertex_weight {
            continue;
        }
        taken.push(v);
        sum += w;
        let dist = (sum as f64 - deficit).abs();
        if best.is_none_or(|(d, _, _)| dist < d) {
            best = Some((dist, taken.len(), sum));
        }
        if sum as f64 >= deficit {
            break;
        }
    }
    let (len, weight) = best.map_or((0, 0), |(_, len, w)| (len, w));
    taken.truncate(len);
    let shortfall = (deficit.ceil() as Weight - sum).max(0);
    PrefixSelection {
        vertices: taken,
        weight,
        shortfall,
    }
}

/// Moves produced by a rebalancing pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RebalanceOutcome {
    pub moves: Vec<Move>,
    /// Evicted weight the pass could not place (prefix ran out, or the
    /// strong pass exceeded aggregate spare capacity).
    pub shortfall: Weight,
}

#[derive(Clone, Copy)]
enum LossKind {
    /// Own-part connection minus the best valid-destination connection.
    Max,
    /// Own-part connection minus the mean valid-destination connection.
    Mean,
}

struct Eviction {
    /// Evicted vertices grouped by oversized part (ascending part id), each
    /// group in selection order.
    groups: Vec<Vec<usize>>,
    valid: Vec<bool>,
    valid_parts: Vec<usize>,
    shortfall: Weight,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn evict(
    g: &Graph,
    p: &PartitionState,
    t: &ConnectivityTable,
    limits: &Limits,
    rho: usize,
    kind: LossKind,
) -> Result<Option<Eviction>, NoValidDestination> {
    let k = p.k();
    let weights = p.part_weights();
    let oversized: Vec<bool> = weights.iter().map(|&w| w > limits.max_part).collect();
    if !oversized.contains(&true) {
        return Ok(None);
    }
    let valid: Vec<bool> = weights.iter().map(|&w| w < limits.sigma).collect();
    let valid_parts: Vec<usize> = (0..k).filter(|&q| valid[q]).collect();
    if valid_parts.is_empty() {
        return Err(NoValidDestination {
            threshold: limits.sigma,
        });
    }

    // Vertices heavier than 1.5x a part's excess over the average may not
    // leave it, unless that would leave nothing to evict.
    let threshold: Vec<f64> = weights.iter().map(|&w| 1.5 * (w as f64 - limits.average)).collect();
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in 0..g.n() {
        let q = p.part(v);
        if oversized[q] {
            candidates[q].push(v);
        }
    }
    let mut groups = Vec::new();
    let mut shortfall = 0;
    for q in (0..k).filter(|&q| oversized[q]) {
        let mut limit = threshold[q];
        if candidates[q].iter().all(|&v| g.vertex_weight(v) as f64 > limit) {
            limit = f64::INFINITY;
        }
        let cands: Vec<usize> = candidates[q]
            .iter()
            .copied()
            .filter(|&v| g.vertex_weight(v) as f64 <= limit)
            .collect();
        let losses: Vec<f64> = cands
            .par_iter()
            .map(|&v| {
                let mut own = 0;
                let (mut best, mut sum) = (0, 0);
                for (r, w) in t.row(v) {
                    if r == q {
                        own = w;
                    } else if valid[r] {
                        best = best.max(w);
                        sum += w;
                    }
                }
                match kind {
                    LossKind::Max => (own - best) as f64,
                    LossKind::Mean => own as f64 - sum as f64 / valid_parts.len() as f64,
                }
            })
            .collect();
        let order = bucket_losses(&cands, &losses, rho);
        let deficit = (weights[q] - limits.max_part) as f64;
        let sel = select_prefix(g, &order, deficit, f64::INFINITY);
        shortfall += sel.shortfall;
        groups.push(sel.vertices);
    }
    Ok(Some(Eviction {
        groups,
        valid,
        valid_parts,
        shortfall,
    }))
}

/// Weak rebalancing: each evicted vertex goes to its best connected valid
/// part (ties to the lowest id), or to a pseudo-random valid part derived
/// from `pass_seed` when it touches none.
pub fn jetr_weak_pass(
    g: &Graph,
    p: &PartitionState,
    t: &ConnectivityTable,
    limits: &Limits,
    rho: usize,
    pass_seed: u64,
) -> Result<RebalanceOutcome, NoValidDestination> {
    let Some(ev) = evict(g, p, t, limits, rho, LossKind::Max)? else {
        return Ok(RebalanceOutcome::default());
    };
    let evicted: Vec<usize> = ev.groups.into_iter().flatten().collect();
    let moves = evicted
        .par_iter()
        .map(|&v| {
            let mut best: Option<(usize, Weight)> = None;
            for (r, w) in t.row(v) {
                if ev.valid[r] && best.is_none_or(|(br, bw)| w > bw || (w == bw && r < br)) {
                    best = Some((r, w));
                }
            }
            let to = match best {
                Some((r, _)) => r,
                None => {
                    let h = splitmix64(pass_seed ^ splitmix64(v as u64));
                    ev.valid_parts[(h % ev.valid_parts.len() as u64) as usize]
                }
            };
            Move { vertex: v, to }
        })
        .collect();
    Ok(RebalanceOutcome {
        moves,
        shortfall: ev.shortfall,
    })
}

/// Strong rebalancing: valid parts claim consecutive runs of the evicted
/// list in ascending id order, each up to `sigma - weight`. If the evicted
/// weight exceeds the total spare capacity, capacities are scaled up
/// proportionally and the excess is reported as shortfall.
pub fn jetr_strong_pass(
    g: &Graph,
    p: &PartitionState,
    t: &ConnectivityTable,
    limits: &Limits,
    rho: usize,
) -> Result<RebalanceOutcome, NoValidDestination> {
    let Some(ev) = evict(g, p, t, limits, rho, LossKind::Mean)? else {
        return Ok(RebalanceOutcome::default());
    };
    let evicted: Vec<usize> = ev.groups.into_iter().flatten().collect();
    let need: Weight = evicted.iter().map(|&v| g.vertex_weight(v)).sum();
    let spare: Vec<Weight> = ev
        .valid_parts
        .iter()
        .map(|&q| limits.sigma - p.part_weights()[q])
        .collect();
    let total_spare: Weight = spare.iter().sum();
    let mut shortfall = ev.shortfall;
    let capacity: Vec<Weight> = if need > total_spare {
        shortfall += need - total_spare;
        spare
            .iter()
            .map(|&s| ((s as i128 * need as i128 + total_spare as i128 - 1) / total_spare as i128) as Weight)
            .collect()
    } else {
        spare
    };

    let mut moves = Vec::with_capacity(evicted.len());
    let mut remaining = capacity.clone();
    let mut d = 0;
    let mut leftovers = Vec::new();
    for &v in &evicted {
        let w = g.vertex_weight(v);
        while d < remaining.len() && remaining[d] < w {
            d += 1;
        }
        if d == remaining.len() {
            leftovers.push(v);
            continue;
        }
        remaining[d] -= w;
        moves.push(Move {
            vertex: v,
            to: ev.valid_parts[d],
        });
    }
    // Vertices too heavy for any remaining run go where the most room is.
    for v in leftovers {
        let i = (0..remaining.len())
            .max_by_key(|&i| (remaining[i], std::cmp::Reverse(i)))
            .unwrap();
        remaining[i] -= g.vertex_weight(v);
        moves.push(Move {
            vertex: v,
            to: ev.valid_parts[i],
        });
    }
    Ok(RebalanceOutcome { moves, shortfall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn slots() {
        assert_eq!(loss_slot(-3.0), 0);
        assert_eq!(loss_slot(0.0), 1);
        assert_eq!(loss_slot(5.0), 4);
        assert_eq!(loss_slot(1.0), 2);
        assert_eq!(loss_slot(2.0), 3);
        assert_eq!(loss_slot(4.0), 4);
        assert_eq!(loss_slot(0.5), 2);
        assert_eq!(loss_slot(1e12), NUM_SLOTS - 1);
    }

    #[test]
    fn bucket_order() {
        let order = bucket_losses(&[0, 1, 2, 3], &[4.0, 1.0, 2.0, -1.0], 32);
        assert_eq!(order, vec![3, 1, 2, 0]);
        // equal losses: single slot, ordered by sub-bucket (v mod rho)
        let order = bucket_losses(&[5, 2, 7, 4], &[1.0; 4], 4);
        assert_eq!(order, vec![4, 5, 2, 7]);
    }

    #[test]
    fn prefix_examples() {
        let g = generate::path(10);
        let order: Vec<usize> = (0..10).collect();
        let s = select_prefix(&g, &order, 4.0, f64::INFINITY);
        assert_eq!(s.vertices, vec![0, 1, 2, 3]);
        assert_eq!(s.shortfall, 0);

        let s = select_prefix(&g, &order, 0.5, f64::INFINITY);
        assert_eq!(s.vertices.len(), 1);

        let s = select_prefix(&g, &[], 3.0, f64::INFINITY);
        assert!(s.vertices.is_empty());
        assert_eq!(s.shortfall, 3);

        let s = select_prefix(&g, &order[..2], 5.0, f64::INFINITY);
        assert_eq!((s.vertices.len(), s.shortfall), (2, 3));
    }

    #[test]
    fn prefix_skips_heavy_vertices() {
        let g = Graph::from_csr(vec![0, 1, 3, 4], vec![1, 0, 2, 1], vec![1; 4], vec![9, 1, 1]).unwrap();
        let s = select_prefix(&g, &[0, 1, 2], 2.0, 3.0);
        assert_eq!(s.vertices, vec![1, 2]);
    }

    fn setup(g: &Graph, parts: Vec<usize>, k: usize, imb: f64) -> (PartitionState, ConnectivityTable, Limits) {
        let p = PartitionState::new(g, parts, k).unwrap();
        let t = ConnectivityTable::build(g, &p);
        let l = Limits::new(g.total_vertex_weight(), k, imb, 0.1);
        (p, t, l)
    }

    #[test]
    fn two_part_weak_pass() {
        let g = generate::path(8);
        let (mut p, mut t, l) = setup(&g, vec![0, 0, 0, 0, 0, 0, 0, 1], 2, 0.03);
        let out = jetr_weak_pass(&g, &p, &t, &l, 32, 0).unwrap();
        // lowest losses: 6 (loss 0), 0 (loss 1), then 1 from the loss-2 slot
        assert_eq!(out.moves.len(), 3);
        assert!(out.moves.iter().all(|m| m.to == 1));
        t.apply_moves(&g, &mut p, &out.moves);
        assert_eq!(p.part_weights(), &[4, 4]);
    }

    #[test]
    fn weak_pass_random_destination_is_reproducible() {
        // Part 0 = vertices 0..6 on a path, parts 1..3 elsewhere and not
        // adjacent to the interior of part 0.
        let g = generate::path(12);
        let parts = vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3];
        let (p, t, l) = setup(&g, parts, 4, 0.03);
        let a = jetr_weak_pass(&g, &p, &t, &l, 32, 77).unwrap();
        let b = jetr_weak_pass(&g, &p, &t, &l, 32, 77).unwrap();
        assert_eq!(a, b);
        assert!(a.moves.iter().all(|m| (1..4).contains(&m.to)));
    }

    #[test]
    fn balanced_input_means_no_moves() {
        let g = generate::path(8);
        let (p, t, l) = setup(&g, vec![0, 0, 0, 0, 1, 1, 1, 1], 2, 0.03);
        assert!(jetr_weak_pass(&g, &p, &t, &l, 32, 0).unwrap().moves.is_empty());
        assert!(jetr_strong_pass(&g, &p, &t, &l, 32).unwrap().moves.is_empty());
    }

    #[test]
    fn no_valid_destination_errors() {
        // W = 10, k = 3, λ = 0: limit 3, sigma 2; parts 4/3/3 leave nothing
        // below sigma.
        let g = generate::path(10);
        let (p, t, l) = setup(&g, vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2], 3, 0.0);
        assert!(jetr_weak_pass(&g, &p, &t, &l, 32, 0).is_err());
        assert!(jetr_strong_pass(&g, &p, &t, &l, 32).is_err());
    }

    #[test]
    fn strong_pass_balances_unit_weights() {
        let g = generate::grid2d(12, 10);
        // three heavy parts, three light ones
        let parts: Vec<usize> = (0..120).map(|v| if v < 105 { v % 3 } else { 3 + v % 3 }).collect();
        let (mut p, mut t, l) = setup(&g, parts, 6, 0.10);
        let out = jetr_strong_pass(&g, &p, &t, &l, 32).unwrap();
        assert_eq!(out.shortfall, 0);
        t.apply_moves(&g, &mut p, &out.moves);
        assert!(
            p.part_weights().iter().all(|&w| w <= l.max_part),
            "{:?}",
            p.part_weights()
        );
    }

    #[test]
    fn strong_pass_k2_single_destination() {
        let g = generate::path(8);
        let (p, t, l) = setup(&g, vec![0, 0, 0, 0, 0, 0, 0, 1], 2, 0.03);
        let weak = jetr_weak_pass(&g, &p, &t, &l, 32, 0).unwrap();
        let strong = jetr_strong_pass(&g, &p, &t, &l, 32).unwrap();
        let mut a: Vec<usize> = weak.moves.iter().map(|m| m.vertex).collect();
        let mut b: Vec<usize> = strong.moves.iter().map(|m| m.vertex).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        assert!(strong.moves.iter().all(|m| m.to == 1));
    }

    #[test]
    fn part_at_sigma_is_not_a_destination() {
        // Part 1 sits exactly at sigma, so it has no spare capacity; parts 2
        // and 3 are light but too small to absorb the whole excess.
        let g = generate::path(40);
        let mut parts = vec![0; 40];
        // 9 vertices in part 1; sigma = 9 for W/k = 10, λ = 0.03
        parts[20..29].fill(1);
        parts[29..34].fill(2);
        parts[34..40].fill(3);
        let (p, t, l) = setup(&g, parts, 4, 0.03);
        assert_eq!(l.sigma, 9);
        let out = jetr_strong_pass(&g, &p, &t, &l, 32).unwrap();
        assert!(out.moves.iter().all(|m| m.to != 1));
        assert_eq!(out.moves.len(), 10);
        assert_eq!(out.shortfall, 3);
    }
}
