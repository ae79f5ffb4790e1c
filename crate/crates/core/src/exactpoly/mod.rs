//! Exact scalar and polynomial kernel: rationals, dense polynomials, Sturm
//! chains, root isolation and null spaces.

pub mod linalg;
pub mod poly;
pub mod rational;
pub mod sturm;

pub use linalg::{null_space, rank};
pub use poly::Poly;
pub use rational::{format_rational, from_f64, int, parse_rational, ratio, to_f64, Rational};
pub use sturm::{
    count_roots, isolate_roots, isolate_roots_with, nonneg_on_interval, sturm_chain, Interval,
    Nonneg, Resolution, SturmChain,
};
