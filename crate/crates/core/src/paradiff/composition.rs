use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::symbol::Symbol;
use super::weyl::weyl_apply;
use super::ParadiffConfig;
use crate::error::{invalid, Result};
use crate::fit::linear_slope;
use crate::scalar::FftReal;
use crate::torus::{FourierField, Grid};

/// Relative residuals below this are treated as exact zeros.
pub const RESIDUAL_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionProbe {
    pub k: i32,
    pub residual: f64,
    pub probe_norm: f64,
}

/// Decay of T_a T_b - T_{ab} - (i/2) T_{{a,b}} on dyadic probes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub orders: [f64; 2],
    pub expected_slope: f64,
    pub probes: Vec<CompositionProbe>,
    /// log2-slope of the residual ratio over bands above the floor; None when every band vanished.
    pub slope: Option<f64>,
    pub fitted_bands: Vec<i32>,
    pub chi_exponent: i32,
    pub grid: usize,
    pub seed: u64,
}

impl CompositionReport {
    /// Slope with vanished residuals read as minus infinity.
    pub fn slope_or_neg_inf(&self) -> f64 {
        self.slope.unwrap_or(f64::NEG_INFINITY)
    }
}

fn random_probe<T: FftReal>(grid: &Grid<T>, k: i32, rng: &mut ChaCha8Rng) -> FourierField<T> {
    FourierField::from_fn(grid, |_| Complex::new(T::lit(rng.random::<f64>() - 0.5), T::lit(rng.random::<f64>() - 0.5))).lp_project(k)
}

/// Residual ratios r(k) = ||R P_k f|| / ||P_k f|| for seeded random probes and their log2-slope in k.
#[allow(clippy::too_many_arguments)]
pub fn composition_residual<T: FftReal>(
    a: &Symbol<T>,
    b: &Symbol<T>,
    l1: T,
    l2: T,
    bands: &[i32],
    grid: &Grid<T>,
    cfg: &ParadiffConfig,
    seed: u64,
) -> Result<CompositionReport> {
    if l1.abs() > T::lit(10.0) || l2.abs() > T::lit(10.0) {
        return Err(invalid("orders", "need |l1|, |l2| <= 10"));
    }
    if bands.len() < 2 {
        return Err(invalid("bands", "need at least two probe bands"));
    }
    let ab = a.mul(b);
    let bracket = a.poisson(b);
    let half_i = Complex::new(T::zero(), T::lit(0.5));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = Vec::with_capacity(bands.len());
    for &k in bands {
        let f = random_probe(grid, k, &mut rng);
        let tbf = weyl_apply(b, &f, cfg)?;
        let r = weyl_apply(a, &tbf, cfg)?
            .minus(&weyl_apply(&ab, &f, cfg)?)
            .minus(&weyl_apply(&bracket, &f, cfg)?.scale_complex(half_i));
        let pn = f.l2_norm().as_f64();
        probes.push(CompositionProbe {
            k,
            residual: if pn > 0.0 { r.l2_norm().as_f64() / pn } else { 0.0 },
            probe_norm: pn,
        });
    }
    let kept: Vec<(f64, f64)> = probes
        .iter()
        .filter(|p| p.residual > RESIDUAL_FLOOR)
        .map(|p| (p.k as f64, p.residual.log2()))
        .collect();
    let slope = linear_slope(&kept);
    Ok(CompositionReport {
        orders: [l1.as_f64(), l2.as_f64()],
        expected_slope: (l1 + l2).as_f64() - 2.0,
        fitted_bands: probes.iter().filter(|p| p.residual > RESIDUAL_FLOOR).map(|p| p.k).collect(),
        probes,
        slope,
        chi_exponent: cfg.chi_exponent,
        grid: grid.size(),
        seed,
    })
}
