//! Zeno-limit decay rates of open quantum systems under Markovian noise,
//! with and without strong coherent control.
//!
//! The crate is `no_std` (it needs `alloc`). Dense linear algebra,
//! quadrature and the simplex optimizer are bundled so the numerics have no
//! platform dependencies.

#![no_std]
#![forbid(unsafe_code)]
// `!(x >= 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod control;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod liouville;
pub mod optimize;
pub mod quadrature;
pub mod qubit;
pub mod trajectory;
pub mod zeno;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use liouville::{DensityMatrix, NoiseChannel, Operator, PureState, Superoperator, SystemModel};
