use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{phase3, DispersionParams, Sign};
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::{FftReal, Real};
use crate::torus::{phi, phi_leq, FourierField};

/// Weighted sums refuse terms with |Phi| below this.
pub const SMALL_DIVISOR: f64 = 1e-12;

/// Which modulations a filter keeps, through the bump phi of the Littlewood-Paley cutoffs.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold<T> {
    /// phi(Phi)
    AtMostZero,
    /// 1 - phi(Phi)
    AboveZero,
    /// phi(Phi / 2^B)
    AtMost(T),
    /// phi(Phi) - phi(Phi / 2^B), the band (B, 0] for B <= 0.
    Between(T),
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModulationFilter<T> {
    pub threshold: Threshold<T>,
    /// Phi = Lambda(xi) - i1 Lambda(xi - eta) - i2 Lambda(eta).
    pub signs: [Sign; 2],
    pub params: DispersionParams<T>,
}

impl<T: Real> ModulationFilter<T> {
    pub fn new(threshold: Threshold<T>, signs: [Sign; 2], params: DispersionParams<T>) -> Self {
        Self {
            threshold,
            signs,
            params,
        }
    }

    pub fn phase(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        phase3(&self.params, self.signs, xi, eta)
    }

    pub fn weight(&self, phase: T) -> T {
        match self.threshold {
            Threshold::AtMostZero => phi(phase),
            Threshold::AboveZero => T::one() - phi(phase),
            Threshold::AtMost(b) => phi_leq(b, phase),
            Threshold::Between(b) => phi(phase) - phi_leq(b, phase),
        }
    }
}

/// sum over xi, eta of w(xi, eta) F^(xi-eta) G^(eta) conj H^(xi), K weights at once.
///
/// Parallel over eta in the support of G; partial sums are reduced in support order.
pub(crate) fn pair_sums<T: FftReal, const K: usize>(
    f: &FourierField<T>,
    g: &FourierField<T>,
    h: &FourierField<T>,
    w: impl Fn(LatticePoint, LatticePoint) -> Result<[Complex<T>; K]> + Sync,
) -> Result<[Complex<T>; K]> {
    let zero = Complex::new(T::zero(), T::zero());
    let sf = f.support();
    let sg = g.support();
    let partial: Vec<Result<[Complex<T>; K]>> = sg
        .par_iter()
        .map(|&(eta, ge)| {
            let mut acc = [zero; K];
            for &(rho, fr) in &sf {
                let xi = rho + eta;
                let hx = h.coeff(xi);
                if hx.re == T::zero() && hx.im == T::zero() {
                    continue;
                }
                let base = fr * ge * hx.conj();
                let ws = w(xi, eta)?;
                for k in 0..K {
                    acc[k] = acc[k] + ws[k] * base;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = [zero; K];
    for p in partial {
        let p = p?;
        for k in 0..K {
            total[k] = total[k] + p[k];
        }
    }
    Ok(total)
}

/// sum mu(xi,eta) F^(xi-eta) G^(eta) conj(H)^(-xi) phi_*(Phi) [/(i Phi) when weighted].
///
/// Weighted sums need a filter and fail on any kept term with |Phi| < 1e-12.
pub fn trilinear<T: FftReal>(
    mu: &(dyn Fn(LatticePoint, LatticePoint) -> T + Sync),
    filter: Option<&ModulationFilter<T>>,
    f: &FourierField<T>,
    g: &FourierField<T>,
    h: &FourierField<T>,
    weighted: bool,
) -> Result<Complex<T>> {
    if weighted && filter.is_none() {
        return Err(invalid("filter", "a weighted sum needs a modulation filter"));
    }
    let [s] = pair_sums(f, g, h, |xi, eta| {
        let m = mu(xi, eta);
        let Some(flt) = filter else {
            return Ok([Complex::new(m, T::zero())]);
        };
        let p = flt.phase(xi, eta);
        let wt = flt.weight(p);
        if wt == T::zero() || m == T::zero() {
            return Ok([Complex::new(T::zero(), T::zero())]);
        }
        if !weighted {
            return Ok([Complex::new(m * wt, T::zero())]);
        }
        if p.abs() < T::lit(SMALL_DIVISOR) {
            return Err(Error::SmallDivisor {
                xi: xi.tuple(),
                eta: eta.tuple(),
                phase: p.as_f64(),
            });
        }
        // 1 / (i Phi) = -i / Phi
        Ok([Complex::new(T::zero(), -m * wt / p)])
    })?;
    Ok(s)
}

/// The quartic sum on the trivial resonance rho = xi with opposite signs:
///
/// sum q(xi,eta) phi_*(Phi)/(i Phi) U_{i1}^(xi-eta) U_{-i1}^(eta-xi) |W^(xi)|^2,
///
/// U_+ = U, U_- = conj U, Phi = Phi_{i1 +}. With q real the summand is purely imaginary.
pub fn trivial_resonance_sum<T: FftReal>(
    q: &(dyn Fn(LatticePoint, LatticePoint) -> T + Sync),
    threshold: Threshold<T>,
    params: DispersionParams<T>,
    iota1: Sign,
    u: &FourierField<T>,
    w: &FourierField<T>,
) -> Result<Complex<T>> {
    let filter = ModulationFilter::new(threshold, [iota1, Sign::Plus], params);
    let (a, b) = match iota1 {
        Sign::Plus => (u.clone(), u.conj()),
        Sign::Minus => (u.conj(), u.clone()),
    };
    let abs_w: Vec<(LatticePoint, T)> = w.support().into_iter().map(|(xi, c)| (xi, c.norm_sqr())).collect();
    let sa: Vec<(LatticePoint, Complex<T>)> = a.support();
    let parts: Vec<Result<Complex<T>>> = abs_w
        .par_iter()
        .map(|&(xi, w2)| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &(rho, ar) in &sa {
                let eta = xi - rho;
                let p = filter.phase(xi, eta);
                let wt = filter.weight(p);
                let m = q(xi, eta);
                if wt == T::zero() || m == T::zero() {
                    continue;
                }
                if p.abs() < T::lit(SMALL_DIVISOR) {
                    return Err(Error::SmallDivisor {
                        xi: xi.tuple(),
                        eta: eta.tuple(),
                        phase: p.as_f64(),
                    });
                }
                let prod = ar * b.coeff(LatticePoint::ZERO - rho) * w2;
                acc = acc + prod * Complex::new(T::zero(), -m * wt / p);
            }
            Ok(acc)
        })
        .collect();
    parts.into_iter().try_fold(Complex::new(T::zero(), T::zero()), |s, p| Ok(s + p?))
}
