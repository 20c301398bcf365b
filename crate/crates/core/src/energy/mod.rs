//! Energies of the model, the depletion-factored energy symbol and trilinear increment accounting.
//!
//! With f^(xi) = integral of f e^{-i xi.x} and W = <grad>^N U, the model gives
//!
//! d/dt ||W||^2 = Re sum_{xi,eta} m(xi,eta) W^(eta) conj W^(xi) V^(xi - eta),
//!
//! m = c [(xi-eta).(xi+eta)] (<eta>^{2N} - <xi>^{2N}) / (<xi>^N <eta>^N) phi_{<=B}(xi - eta),
//! c = 1 / (32 pi^4). The constant comes from N^(xi) = -(8 pi^2)^{-1} sum_eta (xi-eta).(xi+eta)
//! V^(xi-eta) U^(eta) and one symmetrization in (xi, eta). The symbol is even under the swap.

mod audit;
mod depletion;
mod trilinear;

#[cfg(test)]
mod tests;

use serde::Serialize;

use crate::lattice::LatticePoint;
use crate::paradiff::ParadiffConfig;
use crate::scalar::{FftReal, Real};
use crate::torus::{phi_leq, FourierField};

pub use audit::{increment_audit, AuditRecord, EnergyAudit, IncrementParts, MAX_CADENCE_STEPS};
pub use depletion::{depletion_checks, DepletionReport, DepletionWindow, FactorExtreme};
pub use trilinear::{trilinear, trivial_resonance_sum, ModulationFilter, Threshold, SMALL_DIVISOR};

/// c = 1 / (32 pi^4).
pub fn energy_constant<T: Real>() -> T {
    let p2 = T::PI() * T::PI();
    (T::lit(32.0) * p2 * p2).recip()
}

/// (2 pi)^{-2} sum <xi>^{2N} |U^(xi)|^2.
pub fn energy_en<T: FftReal>(u: &FourierField<T>, n: T) -> T {
    let s = u.sobolev_norm(n);
    s * s
}

/// (1/2) sum_n ||W_n||^2 over a ladder W_0, W_1, ...
pub fn energy_ladder<T: FftReal>(ws: &[FourierField<T>]) -> T {
    ws.iter().fold(T::zero(), |acc, w| {
        let l = w.l2_norm();
        acc + l * l
    }) * T::lit(0.5)
}

/// m(xi, eta) with the default band B = 10 and c = 1 / (32 pi^4).
pub fn energy_symbol<T: Real>(n: T, xi: LatticePoint, eta: LatticePoint) -> T {
    EnergySymbol::new(n).value(xi, eta)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct EnergySymbol<T> {
    pub n: T,
    pub c: T,
    /// B in phi_{<=B}(xi - eta).
    pub band: T,
}

impl<T: Real> EnergySymbol<T> {
    pub fn new(n: T) -> Self {
        Self {
            n,
            c: energy_constant(),
            band: T::lit(10.0),
        }
    }

    pub fn with_band(self, band: T) -> Self {
        Self { band, ..self }
    }

    pub fn value(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        let k = T::from_int((xi - eta).dot(xi + eta));
        if k == T::zero() {
            return T::zero();
        }
        let a = T::from_int(1 + eta.norm_sq());
        let b = T::from_int(1 + xi.norm_sq());
        let cut = phi_leq(self.band, (xi - eta).norm());
        let h = self.n * T::lit(0.5);
        // (a^N - b^N) / (a b)^{N/2} = (a/b)^{N/2} - (b/a)^{N/2}
        self.c * k * ((a / b).powf(h) - (b / a).powf(h)) * cut
    }

    /// d = [(xi-eta).(xi+eta)]^2 / (1 + |xi+eta|^2).
    pub fn depletion(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        let k = T::from_int((xi - eta).dot(xi + eta));
        k * k / T::from_int(1 + (xi + eta).norm_sq())
    }

    /// m' = m / d where d != 0, evaluated without dividing by d.
    ///
    /// For integer N, a^N - b^N = (a - b) sum_j a^{N-1-j} b^j with a - b = -(xi-eta).(xi+eta).
    pub fn reduced(&self, xi: LatticePoint, eta: LatticePoint) -> Option<T> {
        if (xi - eta).dot(xi + eta) == 0 {
            return None;
        }
        let cut = phi_leq(self.band, (xi - eta).norm());
        let a = T::from_int(1 + eta.norm_sq());
        let b = T::from_int(1 + xi.norm_sq());
        let q = T::from_int(1 + (xi + eta).norm_sq());
        let ni = self.n.round();
        if ni == self.n && ni >= T::one() {
            let n = ni.to_i64().unwrap_or(0);
            let mut s = T::zero();
            for j in 0..n {
                s = s + a.powi((n - 1 - j) as i32) * b.powi(j as i32);
            }
            let h = self.n * T::lit(0.5);
            Some(-self.c * q * s / (a * b).powf(h) * cut)
        } else {
            Some(self.value(xi, eta) / self.depletion(xi, eta))
        }
    }
}

/// mu_0(xi, eta) = |xi - eta|^{3/2} d_b(xi, eta) with
/// d_b = chi(|xi-eta| / |xi+eta|) ((xi-eta)/|xi-eta| . (xi+eta)/|xi+eta|)^2.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BulkSymbol {
    pub cfg: ParadiffConfig,
}

impl BulkSymbol {
    pub fn new(cfg: ParadiffConfig) -> Self {
        Self { cfg }
    }

    pub fn depletion<T: Real>(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        let (d, s) = (xi - eta, xi + eta);
        if d.is_zero() || s.is_zero() {
            return T::zero();
        }
        let nd: T = d.norm();
        let ns: T = s.norm();
        let cos = T::from_int(d.dot(s)) / (nd * ns);
        self.cfg.chi(nd / ns) * cos * cos
    }

    pub fn mu0<T: Real>(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        let nd: T = (xi - eta).norm();
        nd.powf(T::lit(1.5)) * self.depletion(xi, eta)
    }
}
