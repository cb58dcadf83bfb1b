//! Interval constrained 3-coloring: instance model and verification, exact
//! solvers, the 3-SAT gadget reduction with witness translation in both
//! directions, and the expander-based gap construction with its audit.

pub mod cnf;
pub mod format;
pub mod gap;
pub mod generator;
pub mod model;
pub mod reduction;
pub mod solver;

pub use cnf::{Assignment, Clause, CnfError, CnfFormula, Literal};
pub use format::{FormatError, SolutionText};
pub use gap::{AuditReport, ExpanderCert, GapError, GapParams, Multigraph};
pub use model::{
    check_consistency, count_colors, verify, Color, Coloring, Counts, Instance, Interval, ModelError, VerifyReport,
};
pub use reduction::{ReductionError, ReductionMap};
pub use solver::{Budget, SolveOutcome, SolveStatus, SolverError};
