//! Posets, antichains and upper sets.
//!
//! Carriers: extended nonnegative reals, finite labeled orders, products,
//! opposites and Hermitian matrices under the Loewner order.

mod antichain;
mod hermitian;
mod poset;

pub use antichain::{
    antichain_leq, antichain_merge, monotone_violations, pareto_filter, pareto_max, pareto_min, Antichain, Orientation,
};
pub use hermitian::{HermitianPoint, PSD_REL_TOL};
pub use poset::{Element, FinitePoset, Poset};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("dimension mismatch at {component}: expected {expected}, found {found}")]
    DimensionMismatch {
        component: String,
        expected: usize,
        found: usize,
    },
    #[error("element not in carrier at {component}: {reason}")]
    NotInCarrier { component: String, reason: String },
    #[error("poset mismatch: {0}")]
    PosetMismatch(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("relation is not antisymmetric: `{0}` and `{1}` are mutually below each other")]
    NotAntisymmetric(String, String),
}

/// `leq` as a free function.
pub fn leq(poset: &Poset, a: &Element, b: &Element) -> Result<bool, OrderError> {
    poset.leq(a, b)
}
