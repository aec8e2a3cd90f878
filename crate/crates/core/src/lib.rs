//! Marginal density approximation from function values on structured point
//! sets: grids, rank-1 and maximal-rank lattices, and random points.
//!
//! The usual pipeline is [`PointSet`] -> [`evaluate`] -> [`approximate`],
//! yielding one [`MarginalPoly`] per axis.

pub mod analysis;
pub mod distributions;
pub mod error;
pub mod evaluation;
pub mod format;
pub mod korobov;
pub mod marginal;
pub mod pointset;

pub use analysis::{
    compare_grid_vs_lattice, convergence_study, sup_error, theorem_bound, ConvergenceReport, ErrorReport,
    PairedReport, PointSetSpec, ScheduleEntry, StudyOptions,
};
pub use distributions::{Factor, ProductDistribution};
pub use error::{Error, Result};
pub use evaluation::{evaluate, project, transform_domain, DomainTransform, EvaluatedSet, Projection};
pub use format::g17;
pub use korobov::{korobov_criterion, korobov_search};
pub use marginal::{
    algorithm_i, algorithm_ii, approximate, Algorithm, FitMode, MarginalPoly, NodeRule, PartitionSmoother,
};
pub use pointset::{
    grid_points, korobov_lattice, maximal_rank_lattice, projection_profile, random_points, rank1_lattice, PointSet,
    PointSetKind, ProjectionProfile,
};
