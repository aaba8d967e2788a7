//! Deterministic multi-objective optimization with Weighted Optimistic
//! Optimization (WOO).
//!
//! A vector-valued problem is reduced to a scalar one with a weighted
//! Tchebycheff scalarization; the scalar function is minimized by
//! hierarchical partitioning of the decision box, and every evaluated point
//! is kept in a Pareto archive whose quality is tracked with the additive
//! ε-indicator.

pub mod analysis;
pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod pareto;
pub mod partition;
pub mod pointset;
pub mod scalarization;
pub mod space;
pub mod woo;

pub use error::{Error, Result};
pub use pareto::{epsilon_indicator, nondominated_filter, ParetoArchive, ReferenceSet};
pub use scalarization::{TchebycheffScalarizer, WeightVector};
pub use space::{DecisionVector, Hyperbox, NormOrder, ObjectiveVector};
pub use woo::{run, WooConfig};
