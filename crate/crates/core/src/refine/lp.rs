//! Unconstrained synchronous label propagation with the afterburner filter.
//!
//! One pass reads only the pre-pass partition: it picks a destination for
//! every boundary vertex, filters the candidates by gain relative to their
//! internal connectivity, re-scores each survivor against a priority-merged
//! guess of its neighbors' next parts, and keeps the moves that still do not
//! increase the cut.

use rayon::prelude::*;

use super::config::LpVariant;
use super::conn::{ConnectivityTable, Move};
use crate::graph::{Graph, Weight};
use crate::partition::PartitionState;

/// Priority of vertices with no neighbor outside their own part.
pub const NOT_BOUNDARY: Weight = Weight::MIN;

/// Best destination and standalone gain for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destinations {
    /// Destination part; equals the current part for non-boundary vertices.
    pub dest: Vec<usize>,
    /// `conn(v, dest) - conn(v, current)`, or [`NOT_BOUNDARY`].
    pub gain: Vec<Weight>,
}

/// Most connected foreign part for each vertex (ties to the lowest part id).
pub fn select_destinations(g: &Graph, p: &PartitionState, t: &ConnectivityTable) -> Destinations {
    let (dest, gain) = (0..g.n())
        .into_par_iter()
        .map(|v| {
            let ps = p.part(v);
            let mut own = 0;
            let mut best: Option<(usize, Weight)> = None;
            for (q, w) in t.row(v) {
                if q == ps {
                    own = w;
                } else if best.is_none_or(|(bq, bw)| w > bw || (w == bw && q < bq)) {
                    best = Some((q, w));
                }
            }
            match best {
                Some((q, w)) => (q, w - own),
                None => (ps, NOT_BOUNDARY),
            }
        })
        .unzip();
    Destinations { dest, gain }
}

/// Boundary, unlocked vertices with `-F(v) < ⌊c * conn(v, P_s(v))⌋`, in
/// ascending order.
pub fn gain_filter(d: &Destinations, t: &ConnectivityTable, p: &PartitionState, c: f64) -> Vec<usize> {
    (0..d.gain.len())
        .into_par_iter()
        .filter(|&v| {
            let f = d.gain[v];
            if f == NOT_BOUNDARY || t.is_locked(v) {
                return false;
            }
            let bound = (c * t.get(v, p.part(v)) as f64).floor() as Weight;
            -f < bound
        })
        .collect()
}

/// `u` precedes `v` in the merge order: higher gain first, then lower id.
/// Callers guarantee `u` is a candidate; non-candidates never precede.
#[inline]
fn precedes(gain: &[Weight], u: usize, v: usize) -> bool {
    gain[u] > gain[v] || (gain[u] == gain[v] && u < v)
}

/// Recomputes the gain of every candidate in `x`, assuming each neighbor
/// that precedes it in the merge order has already moved to its own
/// destination. Returns gains aligned with `x`.
pub fn afterburner(g: &Graph, x: &[usize], parts: &[usize], d: &Destinations) -> Vec<Weight> {
    let mut in_x = vec![false; g.n()];
    for &v in x {
        in_x[v] = true;
    }
    x.par_iter()
        .map(|&v| {
            let (ps, pd) = (parts[v], d.dest[v]);
            let mut f = 0;
            for (u, w) in g.neighbors(v) {
                let pu = if in_x[u] && precedes(&d.gain, u, v) {
                    d.dest[u]
                } else {
                    parts[u]
                };
                if pu == pd {
                    f += w;
                } else if pu == ps {
                    f -= w;
                }
            }
            f
        })
        .collect()
}

/// One label-propagation pass. Returns the moves to apply; the lock bits in
/// `t` are updated for the variants that use them.
pub fn jetlp_pass(g: &Graph, p: &PartitionState, t: &mut ConnectivityTable, c: f64, variant: LpVariant) -> Vec<Move> {
    let d = select_destinations(g, p, t);
    let x: Vec<usize> = match variant {
        LpVariant::Baseline | LpVariant::BaselineLocks => (0..g.n())
            .filter(|&v| d.gain[v] != NOT_BOUNDARY && d.gain[v] > 0 && !t.is_locked(v))
            .collect(),
        LpVariant::WeakAfterburner => (0..g.n())
            .filter(|&v| d.gain[v] != NOT_BOUNDARY && d.gain[v] >= 0 && !t.is_locked(v))
            .collect(),
        LpVariant::FullAfterburner | LpVariant::Jet => gain_filter(&d, t, p, c),
    };
    let moves: Vec<Move> = if variant.uses_afterburner() {
        let f2 = afterburner(g, &x, p.parts(), &d);
        x.iter()
            .zip(f2)
            .filter(|&(_, f)| f >= 0)
            .map(|(&v, _)| Move {
                vertex: v,
                to: d.dest[v],
            })
            .collect()
    } else {
        x.iter()
            .map(|&v| Move {
                vertex: v,
                to: d.dest[v],
            })
            .collect()
    };
    if variant.uses_locks() {
        t.lock_moved(&moves);
    }
    moves
}
