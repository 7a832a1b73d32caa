//! Numerical laboratory for Toeplitz kernels on the Hardy space H² of the disk.
//!
//! Functions live on an equispaced grid of the unit circle ([`boundary_core`]).
//! On top of that sit structured inner functions and model spaces
//! ([`inner_functions`]), finite-section kernel computation
//! ([`toeplitz_engine`]), factorisations and maximal functions
//! ([`factorization`]), the natural conjugation on a kernel
//! ([`conjugation_lab`]) and finite-dimensional isometric representations
//! ([`hayashi`]).

pub mod boundary_core;
pub mod descriptor;
pub mod factorization;
pub mod hayashi;
pub mod inner_functions;
pub mod linalg;
pub mod toeplitz_engine;
pub mod conjugation_lab;

pub use boundary_core::{BoundaryFunction, GridConfig, HardyFunction};
pub use num_complex::Complex64;
