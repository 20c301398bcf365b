//! Symbols of the paralinearized system and the improved good unknown U.
//!
//! The velocity V is replaced throughout by V1 = |grad|^{-1/2} grad Im U0, where U0 is U without
//! the m' correction. Callers supply omega directly.

mod expansion;
mod symbols;
mod unknown;

use num_complex::Complex;

use crate::dispersion::DispersionParams;
use crate::error::{Error, Result};
use crate::scalar::FftReal;
use crate::torus::{AbsGrad, FourierField, GravityCapillary};

pub use expansion::{expansion_check, good_variable_scaling, ExpansionEntry, ExpansionReport, EXPANSION_POWERS};
pub use symbols::{build_symbols, gamma_from, v1_from, WWSymbols};
pub use unknown::{build_good_variable, ladder, GoodVariable, LadderReport};

/// Surface elevation h and the scalar unknown omega, both real with zero mean.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceState<T: FftReal> {
    h: FourierField<T>,
    omega: FourierField<T>,
    params: DispersionParams<T>,
}

fn check_field<T: FftReal>(f: &FourierField<T>, name: &str) -> Result<()> {
    if !f.is_real_valued() {
        return Err(Error::NotReal(name.to_string()));
    }
    let m = f.mean().norm();
    if m > T::lit(1e-12) * (T::one() + f.l2_norm()) {
        return Err(Error::NonzeroMean(m.as_f64()));
    }
    Ok(())
}

impl<T: FftReal> SurfaceState<T> {
    pub fn new(h: FourierField<T>, omega: FourierField<T>, params: DispersionParams<T>) -> Result<Self> {
        if h.grid() != omega.grid() {
            return Err(Error::GridMismatch {
                left: h.grid().size(),
                right: omega.grid().size(),
            });
        }
        check_field(&h, "h")?;
        check_field(&omega, "omega")?;
        Ok(Self { h, omega, params })
    }

    pub fn h(&self) -> &FourierField<T> {
        &self.h
    }

    pub fn omega(&self) -> &FourierField<T> {
        &self.omega
    }

    pub fn params(&self) -> DispersionParams<T> {
        self.params
    }

    /// (eps h, eps omega).
    pub fn scaled(&self, eps: T) -> Self {
        Self {
            h: self.h.scale(eps),
            omega: self.omega.scale(eps),
            params: self.params,
        }
    }
}

/// ||(g - sigma Laplacian)^{1/2} h||^2 + || |grad|^{1/2} omega ||^2.
pub fn quadratic_energy<T: FftReal>(state: &SurfaceState<T>) -> T {
    let a = state.h.apply_regular(&GravityCapillary::new(state.params, T::lit(0.5))).l2_norm();
    let b = state.omega.apply_regular(&AbsGrad::new(T::lit(0.5))).l2_norm();
    a * a + b * b
}

#[inline]
pub(crate) fn cre<T: FftReal>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[cfg(test)]
mod tests;
