//! Recognition of finite metric spaces that are realised exactly by a fully
//! labelled spanning tree on their own points, and measures of how far a
//! space is from being one.
//!
//! All distances are exact rationals. The main entry points:
//!
//! * [`metric::validate_metric`] builds a [`FiniteMetricSpace`] from a raw matrix.
//! * [`geodesic::basic_geodesic_graph`] keeps the edges of the complete graph
//!   that no chain of other points can replace.
//! * [`recognition::recognize`] decides spanning tree / spanning path
//!   membership and cross-checks it against the fourth-point condition.
//! * [`conditions`] holds the fourth- and three-point conditions, the
//!   roundaboutness ρ, path deviance, and Gromov hyperbolicity.
//! * [`oracle`] has brute-force references and seeded generators.

pub mod cli;
pub mod conditions;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod geodesic;
pub mod graph;
mod kernel;
pub mod metric;
pub mod oracle;
pub mod output;
pub mod rational;
pub mod recognition;
pub mod report;

pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use metric::{FiniteMetricSpace, PointSet};
