//! Exact decision engine for inequalities `sum_i w_i f(a_i) >= 0` holding for
//! every `f` with nonnegative `k`-th derivative, together with a catalog of
//! sufficient criteria, the induced order on equal-power-sum configurations,
//! and numeric increasing-path construction.

pub mod criteria;
pub mod divdiff;
pub mod error;
pub mod exactpoly;
pub mod exec;
pub mod order;
pub mod paths;
pub mod spline;
pub mod testgen;

pub use error::{Error, Result};
pub use exactpoly::{format_rational, int, parse_rational, ratio, to_f64, Interval, Poly, Rational};
pub use exec::Exec;
pub use spline::{build_rk, InequalityProblem, Node, TruncatedPowerSpline};
