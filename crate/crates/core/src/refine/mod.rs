//! Jet refinement: label propagation with the afterburner filter, plus
//! weak and strong rebalancing passes, driven by an iteration controller.

pub mod config;
pub mod conn;
pub mod controller;
pub mod lp;
pub mod rebalance;

pub use config::{Limits, LpVariant, RefinerConfig};
pub use conn::{ConnectivityTable, Move};
pub use controller::{jet_refine, IterationRecord, Level, PassKind, RefineStats};
