//! Design problems with implementations, their compositions, co-design
//! diagrams and the fixed-point solver.

mod brute;
mod design;
mod diagram;
mod function;
mod solver;

pub use brute::{brute_force_solve, compile_to_dpi, BruteForceSolution, BRUTE_FORCE_LIMIT};
pub use design::{identity_dpi, parallel, series, unit_dpi, Dpi, Implementation};
pub use diagram::{Block, CoDesignDiagram, DiagramBuilder, Edge, Node, PortRef, Witness};
pub use function::{log_space, FunctionBlock, FunctionKind, Grid};
pub use solver::{solve_loop, solve_loop_with, Solution, SolveOptions, SolveReport, DEFAULT_MAX_ITER};

use thiserror::Error;

use crate::order::{Antichain, OrderError};

#[derive(Debug, Error)]
pub enum DpiError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("design problem has no implementations")]
    EmptyDpi,
    #[error("duplicate implementation label `{0}`")]
    DuplicateLabel(String),
    #[error("implementation `{0}`: {1}")]
    BadImplementation(String, String),
    #[error("{0}")]
    Arity(String),
    #[error("port mismatch: {0}")]
    PortMismatch(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("syntax: {0}")]
    Syntax(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}` in {1}")]
    UnknownNode(String, String),
    #[error("unknown {side} port `{port}` in {context}")]
    UnknownPort {
        port: String,
        side: &'static str,
        context: String,
    },
    #[error("dangling {1} port `{0}`: neither connected nor exposed")]
    Dangling(String, &'static str),
    #[error("{1} port `{0}` is connected or exposed more than once")]
    MultiplyConnected(String, &'static str),
    #[error("node `{0}` has ports that are not extended reals; only real-valued ports can be wired")]
    NonRealPort(String),
    #[error("cycle remains after cutting feedback edges: {0}")]
    NotAcyclic(String),
    #[error("cycle made only of function nodes: {0}")]
    FunctionCycle(String),
    #[error("implementation product {0} exceeds the exhaustive-search limit")]
    TooLarge(u128),
    #[error("Kleene iteration did not converge within {max_iter} iterations")]
    NoConvergence {
        max_iter: usize,
        previous: Box<Antichain>,
        last: Box<Antichain>,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
