//! Finite-dimensional *-algebras, their states, and the GNS representation.
//!
//! Algebras are presented by structure constants over a basis, states are
//! *-linear functionals, and the GNS space of a state is the quotient of the
//! algebra by the radical of the form `<a, b> = phi(b* a)`. On top of that the
//! crate builds the represented maps of *-homomorphisms and *-linear
//! processes, complete positivity and Stinespring dilations, the Born rule,
//! finite Markov kernels and their duals, and symmetry representations.
//!
//! Everything is generic over a [`Scalar`] backend: exact Gaussian rationals
//! ([`Exact`]) for structural questions, `f64` complex numbers for spectra.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

mod error;
pub mod algebra;
pub mod gns;
pub mod linalg;
pub mod markov;
pub mod matrix;
pub mod prob;
pub mod scalar;
pub mod symmetry;
pub mod tol;

pub use error::{Error, GroupAxiom};
pub use matrix::Matrix;
pub use scalar::{Backend, Exact, PsdCertificate, Scalar};
pub use tol::ToleranceConfig;

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
