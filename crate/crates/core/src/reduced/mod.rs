//! Reduced realizations of e(3)*: the magnetic-monopole phase space
//! `(T*R^3_0, Omega_mu)`, the cotangent bundle `T*S^3_rho` in Moser and
//! embedded charts, and the four-dimensional slice `M_{mu,nu}` with the
//! embedding `Phi` back into twistor space.

pub mod monopole;
pub mod slice;
pub mod sphere;

use crate::error::{Error, Result};

pub use monopole::*;
pub use slice::*;
pub use sphere::*;

/// Reduction levels: `mu` (J0 level, monopole strength) and `nu < 0` (Gamma0 level).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedParams {
    pub mu: f64,
    pub nu: f64,
}

impl ReducedParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(nu < 0.0) || !nu.is_finite() || !mu.is_finite() {
            return Err(Error::Validation(format!(
                "reduction level nu must be negative and finite, got {nu}"
            )));
        }
        Ok(ReducedParams { mu, nu })
    }

    /// Sphere radius `rho = sqrt(-2 nu)`.
    pub fn rho(&self) -> f64 {
        rho_of_nu(self.nu)
    }
}

pub fn rho_of_nu(nu: f64) -> f64 {
    (-2.0 * nu).sqrt()
}
