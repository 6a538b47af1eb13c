//! Eigenvalue clustering in LMI regions via generalized diagonal dominance,
//! with applications to second-order and fractional-order systems.

// `!(x < y)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dominance;
pub mod error;
pub mod fractional;
pub mod generate;
pub mod linalg;
pub mod regions;
pub mod report;
pub mod second_order;
pub mod serde_ext;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::{ComplexPoint, Matrix};
pub use num_complex::Complex64;
pub use regions::Region;
