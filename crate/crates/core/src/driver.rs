//! End-to-end multilevel pipeline: coarsen, partition the coarsest graph,
//! then project and refine level by level back to the input graph.

use std::time::Instant;

use serde::Serialize;

use crate::coarsen::{build_hierarchy, CoarsenConfig};
use crate::error::PartitionError;
use crate::graph::{Graph, Weight};
use crate::initpart::initial_partition;
use crate::partition::{balance_limit, PartitionState};
use crate::refine::{jet_refine, Level, PassKind, RefineStats, RefinerConfig};

/// Per-level summary of one uncoarsening step. Level 0 is the input graph.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Cut of the partition handed to the refiner: the initial partition on
    /// the coarsest level, the projection of the coarser result elsewhere.
    pub input_cutsize: Weight,
    /// Cut of the coarser level's result on the coarser graph; equal to
    /// `input_cutsize` whenever projection is exact.
    pub coarse_cutsize: Option<Weight>,
    pub output_cutsize: Weight,
    pub iterations: usize,
    pub lp_iterations: usize,
    pub weak_rebalance_iterations: usize,
    pub strong_rebalance_iterations: usize,
    pub balanced: bool,
    pub refine_seconds: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PhaseTimes {
    pub coarsen: f64,
    pub initial_partition: f64,
    pub refine: f64,
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    pub partition: PartitionState,
    pub balanced: bool,
    /// Ordered from the coarsest level down to level 0.
    pub levels: Vec<LevelReport>,
    pub times: PhaseTimes,
}

impl PartitionResult {
    pub fn cutsize(&self) -> Weight {
        self.partition.cutsize()
    }

    /// Refinement iterations summed over all levels.
    pub fn total_iterations(&self) -> usize {
        self.levels.iter().map(|l| l.iterations).sum()
    }
}

/// Maps a coarse partition onto the finer graph: every fine vertex inherits
/// the part of the coarse vertex it was contracted into.
pub fn project(coarse: &PartitionState, map: &[usize], fine: &Graph) -> PartitionState {
    assert_eq!(map.len(), fine.n(), "map length must match the fine graph");
    let parts = map.iter().map(|&c| coarse.part(c)).collect();
    PartitionState::new(fine, parts, coarse.k()).expect("projected parts are in range")
}

/// Rejects configurations for which no balanced partition can exist.
pub fn check_feasible(g: &Graph, k: usize, imbalance: f64) -> Result<(), PartitionError> {
    if k == 0 {
        return Err(PartitionError::ZeroParts);
    }
    if k > g.n() {
        return Err(PartitionError::TooManyParts { k, n: g.n() });
    }
    let limit = balance_limit(g.total_vertex_weight(), k, imbalance);
    if g.max_vertex_weight() > limit {
        return Err(PartitionError::Infeasible(format!(
            "a vertex of weight {} exceeds the part limit {limit}",
            g.max_vertex_weight()
        )));
    }
    if (limit as i128) * (k as i128) < g.total_vertex_weight() as i128 {
        return Err(PartitionError::Infeasible(format!(
            "{k} parts of weight at most {limit} cannot hold total weight {}",
            g.total_vertex_weight()
        )));
    }
    Ok(())
}

fn level_report(level: usize, g: &Graph, stats: &RefineStats, seconds: f64) -> LevelReport {
    let count = |kind| stats.history.iter().filter(|r| r.kind == kind).count();
    LevelReport {
        level,
        vertices: g.n(),
        edges: g.edge_count(),
        input_cutsize: stats.input_cutsize,
        coarse_cutsize: None,
        output_cutsize: stats.output_cutsize,
        iterations: stats.iterations,
        lp_iterations: count(PassKind::LabelPropagation),
        weak_rebalance_iterations: count(PassKind::WeakRebalance),
        strong_rebalance_iterations: count(PassKind::StrongRebalance),
        balanced: stats.balanced,
        refine_seconds: seconds,
    }
}

/// Coarsening settings the pipeline derives from a refiner configuration.
///
/// The coarsest graph keeps at least two vertices per part, and no coarse
/// vertex may grow beyond 1.5 times the average weight a coarsest-level
/// vertex would have, so the initial partitioner is never handed a few
/// giant vertices it cannot balance.
pub fn coarsen_config(g: &Graph, cfg: &RefinerConfig) -> CoarsenConfig {
    let target = cfg.coarse_target.max(2 * cfg.k);
    let per_vertex = (1.5 * g.total_vertex_weight() as f64 / target as f64).ceil() as Weight;
    CoarsenConfig {
        target,
        max_vertex_weight: per_vertex.max(g.max_vertex_weight()),
        ..Default::default()
    }
}

/// Partitions `g` into `cfg.k` parts.
///
/// Fails only on invalid configuration, `k > |V|`, or a balance constraint
/// that no partition can meet. A result that is feasible in principle but was
/// not balanced by the refiner is returned with `balanced == false`.
pub fn partition(g: Graph, cfg: &RefinerConfig) -> Result<PartitionResult, PartitionError> {
    cfg.validate()?;
    check_feasible(&g, cfg.k, cfg.imbalance)?;
    let start = Instant::now();
    let mut times = PhaseTimes::default();

    if cfg.k == 1 {
        let partition = PartitionState::single_part(&g);
        times.total = start.elapsed().as_secs_f64();
        return Ok(PartitionResult {
            partition,
            balanced: true,
            levels: Vec::new(),
            times,
        });
    }

    let coarsen_cfg = coarsen_config(&g, cfg);
    let t = Instant::now();
    let hierarchy = build_hierarchy(g, &coarsen_cfg);
    times.coarsen = t.elapsed().as_secs_f64();

    let levels = hierarchy.levels();
    let coarsest = levels.len() - 1;
    let level_kind = |i: usize| if i == 0 { Level::Finest } else { Level::Coarse };

    let t = Instant::now();
    let initial = initial_partition(&levels[coarsest], cfg.k, cfg.imbalance, cfg.seed, cfg.initial_restarts)?;
    times.initial_partition = t.elapsed().as_secs_f64();

    let mut reports = Vec::with_capacity(levels.len());
    let t = Instant::now();
    let (mut state, stats) = jet_refine(&levels[coarsest], initial, cfg, level_kind(coarsest));
    reports.push(level_report(
        coarsest,
        &levels[coarsest],
        &stats,
        t.elapsed().as_secs_f64(),
    ));
    times.refine += t.elapsed().as_secs_f64();

    for i in (0..coarsest).rev() {
        let t = Instant::now();
        let coarse_cut = state.cutsize();
        let projected = project(&state, &hierarchy.maps()[i], &levels[i]);
        let (refined, stats) = jet_refine(&levels[i], projected, cfg, level_kind(i));
        state = refined;
        let mut report = level_report(i, &levels[i], &stats, t.elapsed().as_secs_f64());
        report.coarse_cutsize = Some(coarse_cut);
        reports.push(report);
        times.refine += t.elapsed().as_secs_f64();
    }

    times.total = start.elapsed().as_secs_f64();
    let balanced = state.max_part_weight() <= balance_limit(state.total_weight(), cfg.k, cfg.imbalance);
    Ok(PartitionResult {
        partition: state,
        balanced,
        levels: reports,
        times,
    })
}

/// Machine-readable run summary.
#[derive(Clone, Debug, Serialize)]
pub struct Metrics<'a> {
    pub cutsize: Weight,
    pub imbalance: f64,
    pub balanced: bool,
    pub vertices: usize,
    pub edges: usize,
    pub seed: u64,
    pub part_weights: &'a [Weight],
    pub iterations_per_level: Vec<usize>,
    pub levels: &'a [LevelReport],
    pub phase_seconds: &'a PhaseTimes,
    pub config: &'a RefinerConfig,
}

impl<'a> Metrics<'a> {
    pub fn new(g: &Graph, result: &'a PartitionResult, cfg: &'a RefinerConfig) -> Self {
        Metrics {
            cutsize: result.cutsize(),
            imbalance: result.partition.imbalance(),
            balanced: result.balanced,
            vertices: g.n(),
            edges: g.edge_count(),
            seed: cfg.seed,
            part_weights: result.partition.part_weights(),
            iterations_per_level: result.levels.iter().map(|l| l.iterations).collect(),
            levels: &result.levels,
            phase_seconds: &result.times,
            config: cfg,
        }
    }
}
