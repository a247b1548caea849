//! Online multi-coloring with advice.
//!
//! Paths and bipartite graphs are colored optimally (or within `1 + 1/2^(b-1)`)
//! from a few bits of advice; hexagonal graphs within 3/2 and 4/3 of optimal.
//! The crate also contains the offline oracle that writes the advice, exact
//! optimum computation for small instances, the adversarial instance families
//! used in the lower bounds, and an experiment harness.

pub mod adversary;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod online;
pub mod oracle;
pub mod tape;

pub use error::{GenError, GraphError, InstanceError, OracleError, PlayerError, TapeError};
pub use graph::{CellCoord, ColorClass, Graph, GraphKind, NodeId, Side};
pub use instance::{Action, Color, Instance, Op, Request};
pub use tape::AdviceTape;
