//! Finite metric measure spaces, measures on the line and round spheres: the
//! Lipschitz order, quantile transport, observable and box distances, and
//! detectors for the maximum of the 1-measurement.

// NaN must fail range checks, which `!(x > 0.0)` does and `x <= 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod boxdist;
pub mod cli;
pub mod error;
pub mod flow;
pub mod maxdetect;
pub mod measure1d;
pub mod mmspace;
pub mod order;
pub mod prohorov;
pub mod quadrature;
pub mod spaces;
pub mod sphere;

pub use error::{Error, Result};
