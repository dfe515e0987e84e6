//! Exact construction and verification of twisted Wakimoto free-field
//! realizations of affine Lie algebras.
//!
//! The crate is organised bottom-up: [`exactnum`] supplies cyclotomic
//! arithmetic and polynomials, [`liealg`] the finite-dimensional data,
//! [`wakipoly`] the polynomial families entering the currents, [`currents`]
//! and [`twistor`] the field expressions, and [`fockcheck`] evaluates
//! everything on truncated Fock/Verma modules.

pub mod cli;
pub mod currents;
pub mod error;
pub mod exactnum;
pub mod fockcheck;
pub mod liealg;
pub mod twistor;
pub mod wakipoly;

pub use error::{Result, WakiError};
