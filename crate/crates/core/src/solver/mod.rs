//! Exact feasibility solvers and enumeration oracles.

mod backtrack;
mod brute;
mod dpll;
mod encode;

use thiserror::Error;

use crate::model::{Coloring, ModelError};

pub use backtrack::{
    enumerate_colorings, enumerate_projections, enumerate_up_to, enumerate_with_domains, solve_backtracking,
    solve_with_domains, Domain,
};
pub use brute::{max_satisfy_brute, scan_feasible_colorings, BRUTE_FORCE_MAX_N};
pub use dpll::{solve_dpll, DpllOutcome, GeneralCnf, Lit};
pub use encode::{decode_model, encode_to_cnf, solve_via_dpll, CnfEncoding, VarMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("instance is inconsistent: intervals {0:?} do not sum to their lengths")]
    Inconsistent(Vec<usize>),
    #[error("more than {limit} feasible colorings")]
    LimitExceeded { limit: usize },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("brute force supports n <= {max}, got {n}")]
    Capacity { n: usize, max: usize },
    #[error("domain list has length {found}, instance has {expected} positions")]
    DomainLength { expected: usize, found: usize },
    #[error("model violates one-hot constraint at position {0}")]
    OneHot(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Search nodes expanded (positions entered or DPLL decisions).
    pub nodes: u64,
    /// Forced assignments found by propagation.
    pub propagations: u64,
    /// Budget units consumed; equal to `nodes`.
    pub budget_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub witness: Option<Coloring>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == SolveStatus::Feasible
    }
}

/// Limit on search-node expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget(Option<u64>);

impl Budget {
    pub fn unlimited() -> Self {
        Budget(None)
    }

    pub fn nodes(n: u64) -> Self {
        Budget(Some(n))
    }

    pub fn limit(&self) -> Option<u64> {
        self.0
    }

    fn exceeded(&self, used: u64) -> bool {
        self.0.is_some_and(|max| used > max)
    }
}
