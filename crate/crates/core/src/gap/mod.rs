//! Gap amplification: expander construction and certification, gap-mode
//! reduction, majority witness extraction and the broken/bad clause audit.

mod audit;
mod expander;
mod params;

use thiserror::Error;

use crate::model::ModelError;
use crate::reduction::ReductionError;

pub use audit::{majority_extract, soundness_audit, AuditReport};
pub use expander::{
    build_expander, edge_expansion_exact, expansion_lower_bound_spectral, second_eigenvalue, ExpanderCert,
    ExpanderMethod, ExpanderRecord, Multigraph, EXACT_EXPANSION_MAX_N,
};
pub use num_rational::Rational64;
pub use params::{compute_epsilon, gap_reduce, gap_reduce_with, GapOptions, GapParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("graph edge ({0}, {1}) is a self-loop or out of range")]
    BadEdge(usize, usize),
    #[error("exact expansion needs 2..={max} vertices, got {n}")]
    Capacity { n: usize, max: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not regular")]
    Irregular,
    #[error("degree {0} must be even and at least 2")]
    Degree(usize),
    #[error("no graph on {n} vertices reached expansion {target} (best {best:?})")]
    RetriesExhausted { n: usize, target: f64, best: Option<Box<ExpanderCert>> },
    #[error("{0} must be positive")]
    Nonpositive(&'static str),
    #[error("epsilon {0} is not below 1")]
    EpsilonTooLarge(num_rational::Rational64),
    #[error("coloring, instance and map disagree: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
