use rayon::prelude::*;
use serde::Serialize;

use super::EnergySymbol;
use crate::dispersion::{phase3, DispersionParams, Sign};
use crate::error::{invalid, Result};
use crate::lattice::LatticePoint;

/// |xi| <= radius and 0 < |xi - eta| <= max_low.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepletionWindow {
    pub radius: i64,
    pub max_low: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorExtreme {
    pub iota: Sign,
    /// Smallest admissible C.
    pub constant: f64,
    pub xi: (i64, i64),
    pub eta: (i64, i64),
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepletionReport {
    pub window: DepletionWindow,
    pub n: f64,
    pub c: f64,
    /// min and max of |m'| over the window where d != 0.
    pub mprime_min: f64,
    pub mprime_max: f64,
    pub mprime_points: u64,
    /// max |m - d m'| / max |m|.
    pub factor_defect: f64,
    /// One entry per iota in Phi_{iota +}.
    pub correlation: Vec<FactorExtreme>,
    /// Largest constant over both signs.
    pub correlation_constant: f64,
}

impl DepletionReport {
    /// max |m'| / min |m'|.
    pub fn mprime_ratio(&self) -> f64 {
        self.mprime_max / self.mprime_min
    }
}

/// Exhaustive scans of m = d m' and of the correlation
///
/// ((xi-eta)/|xi-eta| . (xi+eta)/|xi+eta|)^2 <= C (Phi_{iota +}^2 + <xi-eta>^3) / ((1+|xi|+|eta|) <xi-eta>^2)
///
/// over 0 < |xi-eta| < |xi+eta| / 16.
pub fn depletion_checks(params: &DispersionParams<f64>, n: f64, window: DepletionWindow) -> Result<DepletionReport> {
    if window.radius < 1 || window.max_low < 1 {
        return Err(invalid("window", "radius and max_low must be at least 1"));
    }
    let sym = EnergySymbol::new(n);
    let xis = LatticePoint::disk(window.radius);
    let lows = LatticePoint::disk(window.max_low);

    // (min, max, count, max |m|, max defect)
    let fold = xis
        .par_iter()
        .map(|&xi| {
            let mut acc = (f64::INFINITY, 0.0f64, 0u64, 0.0f64, 0.0f64);
            for &rho in &lows {
                let eta = xi - rho;
                let Some(mp) = sym.reduced(xi, eta) else { continue };
                let m = sym.value(xi, eta);
                let d = sym.depletion(xi, eta);
                let a = mp.abs();
                acc.0 = acc.0.min(a);
                acc.1 = acc.1.max(a);
                acc.2 += 1;
                acc.3 = acc.3.max(m.abs());
                acc.4 = acc.4.max((m - d * mp).abs());
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::INFINITY, 0.0f64, 0u64, 0.0f64, 0.0f64), |a, b| {
            (a.0.min(b.0), a.1.max(b.1), a.2 + b.2, a.3.max(b.3), a.4.max(b.4))
        });

    let correlation: Vec<FactorExtreme> = Sign::BOTH
        .iter()
        .map(|&iota| correlation_scan(params, iota, &xis, &lows))
        .collect();
    let correlation_constant = correlation.iter().map(|e| e.constant).fold(0.0, f64::max);
    Ok(DepletionReport {
        window,
        n,
        c: sym.c,
        mprime_min: fold.0,
        mprime_max: fold.1,
        mprime_points: fold.2,
        factor_defect: if fold.3 > 0.0 { fold.4 / fold.3 } else { 0.0 },
        correlation,
        correlation_constant,
    })
}

fn correlation_scan(
    params: &DispersionParams<f64>,
    iota: Sign,
    xis: &[LatticePoint],
    lows: &[LatticePoint],
) -> FactorExtreme {
    let best = xis
        .par_iter()
        .map(|&xi| {
            let mut best = (0.0f64, xi, xi, 0u64);
            for &rho in lows {
                let eta = xi - rho;
                let s = xi + eta;
                // |rho| < |xi + eta| / 16
                if 256 * rho.norm_sq() >= s.norm_sq() {
                    continue;
                }
                let nr: f64 = rho.norm();
                let ns: f64 = s.norm();
                let cos = rho.dot(s) as f64 / (nr * ns);
                let br: f64 = rho.bracket();
                let phase = phase3(params, [iota, Sign::Plus], xi, eta);
                let rhs = (phase * phase + br.powi(3)) / ((1.0 + xi.norm::<f64>() + eta.norm::<f64>()) * br * br);
                let c = cos * cos / rhs;
                best.3 += 1;
                if c > best.0 {
                    best = (c, xi, eta, best.3);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0f64, LatticePoint::ZERO, LatticePoint::ZERO, 0u64), |a, b| {
            let pts = a.3 + b.3;
            if b.0 > a.0 {
                (b.0, b.1, b.2, pts)
            } else {
                (a.0, a.1, a.2, pts)
            }
        });
    FactorExtreme {
        iota,
        constant: best.0,
        xi: best.1.tuple(),
        eta: best.2.tuple(),
        points: best.3,
    }
}
