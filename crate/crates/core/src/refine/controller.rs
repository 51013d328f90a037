use serde::Serialize;

use super::config::{Limits, RefinerConfig};
use super::conn::{ConnectivityTable, Move};
use super::lp::jetlp_pass;
use super::rebalance::{jetr_strong_pass, jetr_weak_pass};
use crate::graph::{Graph, Weight};
use crate::partition::PartitionState;

/// Which gain-ratio constant applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Finest,
    Coarse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PassKind {
    LabelPropagation,
    WeakRebalance,
    StrongRebalance,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub kind: PassKind,
    pub moves: usize,
    pub cutsize: Weight,
    pub max_part_weight: Weight,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RefineStats {
    pub iterations: usize,
    pub input_cutsize: Weight,
    pub output_cutsize: Weight,
    pub balanced: bool,
    /// Rebalancing gave up: no valid destination, or the pass budget ran out.
    pub rebalance_stalled: bool,
    pub history: Vec<IterationRecord>,
}

/// Runs label propagation while the partition is balanced and the
/// rebalancing schedule (two weak passes, then strong passes) while it is
/// not, until `cfg.no_improve_limit` consecutive iterations fail to produce
/// a balanced cut below `cfg.phi` times the best so far.
///
/// Returns the best balanced partition seen, or the least imbalanced one if
/// no iterate was ever balanced.
pub fn jet_refine(
    g: &Graph,
    input: PartitionState,
    cfg: &RefinerConfig,
    level: Level,
) -> (PartitionState, RefineStats) {
    let k = input.k();
    let limits = Limits::new(g.total_vertex_weight(), k, cfg.imbalance, cfg.deadzone_fraction);
    let c = match level {
        Level::Finest => cfg.c_finest,
        Level::Coarse => cfg.c_other,
    };
    let balanced = |s: &PartitionState| s.max_part_weight() <= limits.max_part;

    let mut stats = RefineStats {
        input_cutsize: input.cutsize(),
        ..Default::default()
    };
    let mut state = input;
    let mut table = ConnectivityTable::build(g, &state);

    let mut best: Option<PartitionState> = balanced(&state).then(|| state.clone());
    let mut fallback = state.clone();
    let mut stall = 0;
    let mut rebalance_run = 0;
    let mut idle_lp = 0;
    let rebalance_budget = 2 + k;

    while stall < cfg.no_improve_limit {
        let kind;
        let moves: Vec<Move> = if balanced(&state) {
            rebalance_run = 0;
            kind = PassKind::LabelPropagation;
            jetlp_pass(g, &state, &mut table, c, cfg.lp_variant)
        } else {
            if rebalance_run >= rebalance_budget {
                stats.rebalance_stalled = true;
                break;
            }
            table.clear_locks();
            let pass_seed = cfg.seed ^ (stats.iterations as u64).wrapping_mul(0xA24B_AED4_963E_E407);
            let outcome = if rebalance_run < 2 {
                kind = PassKind::WeakRebalance;
                jetr_weak_pass(g, &state, &table, &limits, cfg.rho, pass_seed)
            } else {
                kind = PassKind::StrongRebalance;
                jetr_strong_pass(g, &state, &table, &limits, cfg.rho)
            };
            rebalance_run += 1;
            match outcome {
                Ok(o) => o.moves,
                Err(_) => {
                    stats.rebalance_stalled = true;
                    break;
                }
            }
        };

        if kind == PassKind::LabelPropagation && moves.is_empty() {
            // Two empty passes in a row means the locks are clear and the
            // state can no longer change.
            idle_lp += 1;
            if idle_lp >= 2 {
                break;
            }
        } else {
            idle_lp = 0;
        }

        table.apply_moves(g, &mut state, &moves);
        stats.iterations += 1;
        stats.history.push(IterationRecord {
            kind,
            moves: moves.len(),
            cutsize: state.cutsize(),
            max_part_weight: state.max_part_weight(),
        });

        if balanced(&state) {
            match &best {
                Some(b) if state.cutsize() >= b.cutsize() => stall += 1,
                Some(b) => {
                    if (state.cutsize() as f64) < cfg.phi * b.cutsize() as f64 {
                        stall = 0;
                    } else {
                        stall += 1;
                    }
                    best = Some(state.clone());
                }
                None => {
                    stall = 0;
                    best = Some(state.clone());
                }
            }
        } else {
            let key = |s: &PartitionState| (s.max_part_weight(), s.cutsize());
            if best.is_none() && key(&state) < key(&fallback) {
                fallback = state.clone();
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }

    let out = best.unwrap_or(fallback);
    stats.balanced = balanced(&out);
    stats.output_cutsize = out.cutsize();
    (out, stats)
}
