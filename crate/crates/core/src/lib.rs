//! Green functions of the Dirichlet Laplacian on the annulus `{rho < |x| < 1}`
//! in `R^N`, the least eigenvalue `Lambda_1(r)` of the interaction matrix of
//! `k` symmetric peaks, the critical inner radius `rho_k` at which it changes
//! sign, and the reduced energies whose critical points give `k`-peak
//! solutions of almost-critical elliptic problems.

pub mod cli;
pub mod configuration;
pub mod error;
pub mod green;
pub mod landscape;
pub mod reduced_energy;
pub mod series;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
