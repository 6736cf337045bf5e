//! Weyl–Heisenberg operator basis on C^d, system–environment dilations and
//! operator-sum channels, with numerical verification of the identities
//! relating them.
//!
//! - [`numerics`]: dense complex matrices, partial traces, Hermitian spectra.
//! - [`weyl`]: the basis {X_l Z_k}, decomposition and reconstruction.
//! - [`dilation`]: the isometry built from a γ table and the Weyl-form
//!   regrouping of the joint state.
//! - [`channels`]: Kraus channels, Weyl channels and Choi matrices.
//! - [`cli`], [`io`], [`verify`]: the `weyl` command-line tool.

pub mod channels;
pub mod cli;
pub mod dilation;
mod error;
pub mod io;
pub mod numerics;
pub mod random;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use numerics::{Complex, ComplexMatrix, ComplexVector, DensityMatrix, Ket, Tolerances};
