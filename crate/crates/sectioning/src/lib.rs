//! Student sectioning and timetabling toolkit.
//!
//! Assigns students to course sections so that the student conflict graph
//! (SCG) carries as few edges as possible, then builds a period-grid
//! timetable on top of the resulting graph. The pipeline is: greedy seeding,
//! weighted local-search edge minimization (with a neutral pseudo-boolean /
//! weighted-clause export for external exact solvers), soft-constrained
//! timetabling with room assignment, and a conflict-feedback (tabu) loop
//! between the two stages.

pub mod conflict_graph;
pub mod documents;
pub mod error;
pub mod greedy;
pub mod instance;
pub mod minimize;
pub mod pipeline;
pub mod render;
pub mod timetable;

mod portfolio;

pub use error::Error;

/// Shorthand result type used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
