//! The 3-SAT to interval constrained coloring reduction: gadget layouts,
//! clause blocks, variable intervals, and witness translation in both
//! directions.

mod build;
mod layout;
mod map;
mod tiling;
mod witness;

use thiserror::Error;

use crate::cnf::CnfError;
use crate::model::{Counts, ModelError};

pub use build::{
    build_clause_block, build_links, build_variable_intervals, clique_pairs, reduce, reduce_with_links, ClauseBlock,
    Links,
};
pub use layout::{
    gadget_layout, infer_gadget_layouts, ClauseLayout, GadgetLayout, Template, LAYOUT_NAME, LAYOUT_VERSION,
};
pub use map::{emit_map, parse_map, LiteralSlot, ReductionMap, VariableLink};
pub use tiling::partition_sum;
pub use witness::{encode_coloring, extract_assignment, slot_value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("gadget layout invalid: {0}")]
    Layout(String),
    #[error("no tiling of [{lo}, {hi}] by existing intervals")]
    NoTiling { lo: usize, hi: usize },
    #[error("tilings of [{lo}, {hi}] disagree: {a} vs {b}")]
    TilingsDisagree { lo: usize, hi: usize, a: Counts, b: Counts },
    #[error("assignment falsifies clauses {0:?}")]
    NotSatisfying(Vec<usize>),
    #[error("occurrences of variable {var} disagree on its value")]
    InconsistentOccurrences { var: u32 },
    #[error("coloring has length {found}, instance has {expected} positions")]
    LengthMismatch { expected: usize, found: usize },
    #[error("assignment covers {found} variables, formula has {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("map line {line}: {msg}")]
    Map { line: usize, msg: String },
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
