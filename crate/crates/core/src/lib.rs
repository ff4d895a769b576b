//! Non-overlapping domain decomposition for the 2D Laplace problem, a banded LU
//! kernel, and the speedup/efficiency algebra used to judge parallel runs
//! against divide-and-conquer performance goals.

pub mod band;
pub mod dd;
pub mod error;
pub mod grid;
pub mod metrics;

pub use band::{factor, flop_model, BandedLu, BandedMatrix};
pub use dd::{
    decompose, restrict_to_internal, solve_dd, solve_monolithic, solve_single_local, CgStats,
    DerivedSystem, FactoredSystem, SolveReport, WorkerPool,
};
pub use error::{Error, Result};
pub use grid::{
    apply_operator, assemble_monolithic, build_grid, classify_nodes, make_partition, DerivedNode,
    GridSpec, NodeClassification, Partition,
};
pub use metrics::{
    EfficiencyReport, GoalKind, GoalSpec, ReportRow, TimingKind, TimingRecord,
};
