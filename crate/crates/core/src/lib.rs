//! Multilevel k-way graph partitioning with Jet refinement.
//!
//! ```
//! use jetpart::{generate, partition, RefinerConfig};
//!
//! let g = generate::grid2d(16, 16);
//! let result = partition(g, &RefinerConfig::new(4, 0.03)).unwrap();
//! assert!(result.balanced);
//! ```

pub mod coarsen;
pub mod driver;
pub mod error;
pub mod generate;
pub mod graph;
pub mod initpart;
pub mod io;
pub mod partition;
pub mod preprocess;
pub mod refine;

pub use driver::{partition, project, Metrics, PartitionResult};
pub use error::{GraphError, IoError, NoValidDestination, PartitionError};
pub use graph::{Graph, Weight};
pub use partition::PartitionState;
pub use refine::{jet_refine, LpVariant, RefinerConfig};
