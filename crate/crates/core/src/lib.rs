//! Exact p-adic arithmetic and contraction-mapping solvers.
//!
//! The crate covers fixed-precision p-adic numbers and the algebras built
//! on them, the p-adic exponential and logarithm, recurrence and coupled
//! iterations of contractive maps, reverse recurrences on finite k-ary trees,
//! and four concrete families of contractive rational maps.

pub mod algebra;
pub mod applications;
pub mod domain;
pub mod error;
pub mod json;
pub mod map;
pub mod padic;
pub mod problem;
pub mod recurrence;
pub mod special;
pub mod tree;

pub use algebra::{is_cauchy_gap, product_difference_bound, AlgebraElement, ElementShape};
pub use domain::{in_ep, DomainSpec};
pub use error::{Error, Result};
pub use map::{verify_contraction, ContractionReport, ContractiveMap, MapRule};
pub use padic::{Norm, PadicNumber, Qp, Valuation, DEFAULT_DIGITS};
pub use recurrence::{
    solve_coupled, solve_power_fixed_point, solve_recurrence, step, ConvergenceCertificate, CoupledCertificate,
    CoupledSpec, Factor, OffsetRule, RecurrenceSpec, SolveOptions,
};
pub use special::{padic_exp, padic_log, SeriesBudget};
pub use tree::{
    backward_sweep, invariant_solution, uniqueness_gap, Boundary, Branching, EdgeArgument, MapFamily, TreeProblem,
    TreeShape, TreeSolution, UniquenessReport,
};
