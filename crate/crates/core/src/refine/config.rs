use serde::Serialize;

use crate::error::PartitionError;
use crate::graph::Weight;
use crate::partition::balance_limit;

/// Which label-propagation variant the refiner runs. Everything except
/// [`LpVariant::Jet`] exists for ablation studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpVariant {
    /// Move every vertex with a strictly positive gain; no afterburner, no
    /// locks.
    Baseline,
    /// Baseline plus vertex locking.
    BaselineLocks,
    /// Afterburner over non-negative-gain candidates only.
    WeakAfterburner,
    /// Afterburner over gain-ratio-filtered candidates, no locks.
    FullAfterburner,
    /// Gain-ratio filter, afterburner and locks.
    Jet,
}

impl LpVariant {
    pub fn uses_locks(self) -> bool {
        matches!(self, LpVariant::BaselineLocks | LpVariant::Jet)
    }

    pub fn uses_afterburner(self) -> bool {
        matches!(
            self,
            LpVariant::WeakAfterburner | LpVariant::FullAfterburner | LpVariant::Jet
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinerConfig {
    pub k: usize,
    /// Allowed imbalance λ; parts may weigh up to `⌊(1 + λ) W / k⌋`.
    pub imbalance: f64,
    /// Gain-ratio filter constant on the finest level.
    pub c_finest: f64,
    /// Gain-ratio filter constant on every coarser level.
    pub c_other: f64,
    /// A new best cut resets the stall counter only if it beats
    /// `phi * previous_best`.
    pub phi: f64,
    pub no_improve_limit: usize,
    /// Sub-buckets per loss slot during rebalancing.
    pub rho: usize,
    /// Deadzone width as a fraction of the slack `λ W / k`.
    pub deadzone_fraction: f64,
    pub seed: u64,
    pub deterministic: bool,
    pub lp_variant: LpVariant,
    pub coarse_target: usize,
    pub initial_restarts: usize,
}

impl RefinerConfig {
    pub fn new(k: usize, imbalance: f64) -> Self {
        RefinerConfig {
            k,
            imbalance,
            c_finest: 0.25,
            c_other: 0.75,
            phi: 0.999,
            no_improve_limit: 12,
            rho: 32,
            deadzone_fraction: 0.1,
            seed: 0,
            deterministic: true,
            lp_variant: LpVariant::Jet,
            coarse_target: 200,
            initial_restarts: 8,
        }
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        let err = |m: &str| Err(PartitionError::Config(m.to_owned()));
        if self.k == 0 {
            return Err(PartitionError::ZeroParts);
        }
        if !(self.imbalance >= 0.0 && self.imbalance.is_finite()) {
            return err("imbalance must be a finite non-negative number");
        }
        if !(self.phi > 0.0 && self.phi <= 1.0) {
            return err("phi must lie in (0, 1]");
        }
        for c in [self.c_finest, self.c_other] {
            if !(0.0..=1.0).contains(&c) {
                return err("c must lie in [0, 1]");
            }
        }
        if self.no_improve_limit == 0 || self.rho == 0 || self.initial_restarts == 0 {
            return err("iteration limit, rho and restarts must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.deadzone_fraction) {
            return err("deadzone fraction must lie in [0, 1]");
        }
        if self.coarse_target < 2 {
            return err("coarse target must be at least 2");
        }
        Ok(())
    }
}

/// Weight thresholds shared by every pass on one graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    /// Parts heavier than this are oversized.
    pub max_part: Weight,
    /// Parts lighter than this are valid rebalancing destinations.
    pub sigma: Weight,
    /// `W / k`.
    pub average: f64,
}

impl Limits {
    pub fn new(total: Weight, k: usize, imbalance: f64, deadzone_fraction: f64) -> Self {
        let max_part = balance_limit(total, k, imbalance);
        let average = total as f64 / k as f64;
        let width = ((deadzone_fraction * imbalance * average).floor() as Weight).max(1);
        Limits {
            max_part,
            sigma: max_part - width,
            average,
        }
    }
}
