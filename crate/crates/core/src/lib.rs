//! Exact sup norms, ultrametric singular values and equidistribution
//! measures for Shilov-finite metrics on `O(1)` over projective space.
//!
//! Norms are stored throughout as additive valuations `v = -log ||.||` in
//! exact rationals. A metric is the max-envelope of finitely many monomial
//! (Gauss) valuation points, each given by a weight vector and a shift.

pub mod arith;
pub mod cells;
pub mod cli;
pub mod config;
pub mod equi;
pub mod error;
pub mod hahn;
pub mod lp;
pub mod metrics;
pub mod poly;
pub mod props;
pub mod random;
pub mod solver;
pub mod text;
pub mod ultra;

pub use arith::{int, rat, LogVal, Rat};
pub use error::{Error, Result};
pub use hahn::HahnSeries;
pub use metrics::{MetricSpec, MonomialPoint, ShilovSet};
pub use poly::{ExpVec, HomPoly, MultOpMatrix};
