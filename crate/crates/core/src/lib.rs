//! Exact and numerical spectral-shift laboratory for Schrodinger operators
//! -Delta + v on R^d (d = 1, 2, 3) with decaying potentials.
//!
//! The symbolic layers (`coeff`, `jet`, `diffop`, `displacement`,
//! `invariants`) compute heat-kernel coefficients, symbol operators and
//! high-energy expansion densities exactly over rationals times powers of
//! sqrt(pi). The numerical layers (`potential`, `scattering1d`, `radial3d`,
//! `oracle`, `tracelab`) evaluate scattering data, the spectral shift
//! function and trace identities for concrete potentials, with error
//! estimates carried alongside every quantity.

pub mod coeff;
pub mod error;
pub mod jet;

pub mod diffop;
pub mod displacement;
pub mod invariants;

pub mod expr;
pub mod ode;
pub mod quadrature;
pub mod special;

pub mod oracle;
pub mod potential;
pub mod radial3d;
pub mod scattering1d;
pub mod tracelab;

pub use error::{Result, SsfError};
pub use num::complex::Complex64;
