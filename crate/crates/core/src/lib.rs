//! Branch and bound for multiobjective optimization under cone orders.
//!
//! The solver encloses the set of efficient points of a box-constrained,
//! Lipschitz-continuous multiobjective problem with respect to an ordering cone
//! that contains the nonnegative orthant. Two cone families are provided: the
//! polyhedral cone `{d : T_eps d >= 0}` and the ice cream cone of axis `w` and
//! half-angle `theta`. Larger cones give smaller, more focused enclosures.
//!
//! ```
//! use conebb::{problems, solve, OrderingCone64, SolverParams};
//!
//! let p = problems::build::<f64>("tp1").unwrap();
//! let cone = OrderingCone64::polyhedral(0.75).unwrap();
//! let res = solve(&p, &SolverParams::new(cone, 0.1, 0.1)).unwrap();
//! assert!(!res.front().is_empty());
//! ```
//!
//! Everything is generic over the scalar type; `f64` and `f32` aliases are
//! exported at the crate root.

mod scalar;
mod sweep;

pub mod archive;
pub mod bounding;
pub mod cones;
pub mod error;
pub mod geometry;
pub mod problem;
pub mod problems;
pub mod sampler;
pub mod solver;

pub use archive::{directed_hausdorff, hausdorff, NondominatedSet, ReferencePoints};
pub use cones::{theta_circumscribed, theta_inscribed, ConeKind, OrderingCone};
pub use error::{Error, Result};
pub use geometry::SearchBox;
pub use problem::{Evaluation, Problem, ProblemBuilder};
pub use sampler::{Sample, SamplerConfig};
pub use scalar::Scalar;
pub use solver::{
    discarding_test, solve, solve_with_sink, IterationTrace, IterationView, SolveError,
    SolveResult, SolverParams, Termination, TraceSink,
};

pub type SearchBox64 = SearchBox<f64>;
pub type Problem64 = Problem<f64>;
pub type OrderingCone64 = OrderingCone<f64>;
pub type SolverParams64 = SolverParams<f64>;
pub type SolveResult64 = SolveResult<f64>;

pub type SearchBox32 = SearchBox<f32>;
pub type Problem32 = Problem<f32>;
pub type OrderingCone32 = OrderingCone<f32>;
pub type SolverParams32 = SolverParams<f32>;
pub type SolveResult32 = SolveResult<f32>;
