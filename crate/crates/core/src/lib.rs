//! Sub-Riemannian isoperimetry toolkit for the Heisenberg group and its
//! compact quotients.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cutting;
pub mod domains;
pub mod error;
pub mod geodesy;
pub mod group;
pub mod measures;
pub mod necklace;
pub mod profiles;
pub mod quadrature;
pub mod report;
pub mod samples;

pub use error::{Error, Result};
pub use group::{GroupPoint, LatticeElement, MetricParams};
