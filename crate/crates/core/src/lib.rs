//! Hierarchy of supersymmetric golden (Fibonacci-divisor) quantum oscillators.
//!
//! - [`golden`]: exact Z[φ] arithmetic and big-integer divisor sequences
//! - [`qcalc`]: (p,q)-numbers, golden exponentials and the derivative D_k
//! - [`fock`]: truncated Fock-space ladder operators, Hamiltonians and spectra
//! - [`susy`]: supercharges, super Hamiltonian and super-number states
//! - [`coherent`]: golden and super-coherent states, symmetry operator
//! - [`entangle`]: reduced density matrices, concurrence and entropy
//! - [`verify`]: the identity-verification suite

pub mod coherent;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod golden;
pub mod qcalc;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
