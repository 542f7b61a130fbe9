//! Closed-form side of the mixed Dirichlet–Neumann eigenvalue asymptotics:
//! exact combinatorial constants, elliptic-coordinate limit profiles,
//! Bessel zeros, and exact spectra with their leading-order expansions.

pub mod combinatorics;
pub mod error;
pub mod exact_spectra;
pub mod profiles;
pub mod quadrature;
pub mod special_functions;

pub use error::{CoreError, Result};
