//! `qsteer` computes concurrence, three-setting CJWR steerability, purity and
//! first-order coherence for two-qubit states, and checks how steerability is
//! squeezed between bounds written in terms of concurrence and purity.
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: small dense complex matrices, Jacobi eigensolver, SVD, QR.
//! - [`qstate`]: pure and mixed states, damping channels, seeded sampling.
//! - [`measures`]: every scalar quantity plus the closed forms of the damped
//!   Bell-like and Werner-unitary families.
//! - [`harness`]: scatter campaigns, family sweeps, region scans, falsification.
//! - [`cli`]: the `qsteer` command line.

// Index loops read better than iterator chains in small matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod measures;
pub mod qstate;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Qubit};
pub use measures::{Classification, MeasureReport};
pub use qstate::{DensityMatrix, KrausChannel, PureState, SamplerConfig};
