//! Weyl paradifferential calculus on T^2.
//!
//! `T_a f` has Fourier coefficients
//! `(4 pi^2)^{-1} sum_eta chi(|xi - eta| / |xi + eta|) a~(xi - eta, (xi + eta)/2) f^(eta)`,
//! with the zero frequency of the output set to zero.

mod composition;
mod norm;
mod paralin;
mod symbol;
mod weyl;
mod zeta;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::torus::{phi_leq, CutoffProfile};

pub use composition::{composition_residual, CompositionProbe, CompositionReport};
pub use norm::{default_zeta_samples, symbol_norm, SymbolNormReport};
pub use paralin::{omega2, paracomposition_remainder, paralin_kernel, paralin_remainder};
pub use symbol::{Rows, Symbol, Term};
pub use weyl::{assemble_matrix, error_kernel_apply, weyl_apply, Side, MAX_MATRIX_GRID};
pub use zeta::{ZetaFn, FD_STEP};

/// Paraproduct cutoff chi = phi_{<= chi_exponent}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadiffConfig {
    pub chi_exponent: i32,
}

impl Default for ParadiffConfig {
    /// Exponent -2 keeps paraproducts alive on grids of a few hundred modes.
    fn default() -> Self {
        Self { chi_exponent: -2 }
    }
}

impl ParadiffConfig {
    pub fn new(chi_exponent: i32) -> Result<Self> {
        if chi_exponent > -1 {
            return Err(invalid("chi_exponent", format!("{chi_exponent} must be <= -1")));
        }
        Ok(Self { chi_exponent })
    }

    /// The asymptotic cutoff phi_{<= -20}.
    pub fn literal() -> Self {
        Self { chi_exponent: -20 }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.chi_exponent).map(|_| ())
    }

    #[inline]
    pub fn chi<T: Real>(&self, r: T) -> T {
        phi_leq(T::from_int(self.chi_exponent as i64), r)
    }

    /// chi(r) = 0 for r at or above this ratio.
    pub fn support_ratio(&self) -> f64 {
        CutoffProfile::SUPPORT * 2f64.powi(self.chi_exponent)
    }
}
