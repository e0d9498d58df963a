//! Monotone co-design: posets and antichains, design problems with
//! implementations, co-design diagrams with feedback, and LQG
//! estimation/control blocks with a drone-level design example.

// NaN must fail range checks, so `!(x > 0.0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dpi;
pub mod drone;
pub mod lqg;
pub mod lqg_dpi;
pub mod order;

pub use dpi::{
    brute_force_solve, solve_loop, CoDesignDiagram, DiagramBuilder, Dpi, DpiError, FunctionBlock, FunctionKind, Grid,
    Solution, Witness,
};
pub use order::{Antichain, Element, OrderError, Orientation, Poset};
