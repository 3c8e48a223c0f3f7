//! Numerical verification of sharp second-order Caffarelli–Kohn–Nirenberg
//! inequalities, their equality cases, modal sharp constants, Hermite spectral
//! estimates and stability of the Gaussian extremals.

pub mod battery;
pub mod eigen;
pub mod error;
pub mod functionals;
pub mod hermite;
pub mod modal;
pub mod profiles;
pub mod quad;
pub mod stability;

pub use error::{Error, Result};
