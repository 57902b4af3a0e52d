//! Pseudospectral toolkit for the Chern-Simons-Dirac and Chern-Simons-Higgs
//! systems in Lorenz gauge on a periodic box, with the supporting null-form
//! and `X^{s,b}` machinery.

pub mod csd;
pub mod csh;
pub mod data;
pub mod diagnostics;
pub mod dirac;
pub mod error;
pub mod fft;
pub mod field;
pub mod gauge;
pub mod grid;
pub mod integrator;
pub mod nullforms;
pub mod propagators;
pub mod quadrature;
pub mod snapshot;
pub mod spectral;
pub mod xsb;

pub use error::{Error, Result};
pub use field::{OneForm, Representation, ScalarField, SpinorField};
pub use grid::Grid2D;
pub use spectral::Sign;
