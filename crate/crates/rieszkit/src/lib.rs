//! Numerical toolkit for biorthogonal systems, quasi bases, and
//! non-self-adjoint Hamiltonians on a truncated Hermite basis.
//!
//! The central objects are constructing pairs (an orthonormal basis together
//! with an invertible operator T), the biorthogonal families phi_n = T e_n and
//! psi_n = (T^{-1})* e_n they generate, and the similarity-transformed
//! Hamiltonians and ladder operators that act on those families. Everything is
//! realized as dense N x N complex matrices in the Hermite basis, with
//! truncation error quantified rather than hidden.

pub mod config;
pub mod error;
pub mod expr;
pub mod hamiltonian;
pub mod hermite;
pub mod kernel;
pub mod linalg;
pub mod lower;
pub mod models;
pub mod operator;
pub mod polar;
pub mod report;
pub mod riesz;
pub mod suite;

pub use error::{Error, Result};
