use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::symbol::Symbol;
use super::zeta::FD_STEP;
use crate::error::{invalid, Result};
use crate::scalar::FftReal;
use crate::torus::{torus_area, FourierField, Grid};

/// Estimated symbol-class norm. Over a finite sample set this bounds the true supremum from below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolNormReport {
    pub order: f64,
    pub differentiability: u32,
    pub value: f64,
    pub samples: String,
    pub sample_count: usize,
    pub argmax_zeta: Option<[f64; 2]>,
    pub lower_bound: bool,
}

/// Half-integer points with 1/2 < |zeta| <= radius, every `stride`-th point on each axis.
pub fn default_zeta_samples<T: FftReal>(radius: f64, stride: usize) -> Vec<[T; 2]> {
    let stride = stride.max(1) as i64;
    let n = (2.0 * radius).floor() as i64;
    let mut out = Vec::new();
    for a in (-n..=n).step_by(stride as usize) {
        for b in (-n..=n).step_by(stride as usize) {
            let (x, y) = (a as f64 / 2.0, b as f64 / 2.0);
            let r = x.hypot(y);
            if r > 0.5 && r <= radius {
                out.push([T::lit(x), T::lit(y)]);
            }
        }
    }
    out
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central difference D^beta applied to a sample-valued function of zeta.
fn difference<T: FftReal>(f: &dyn Fn([T; 2]) -> Vec<Complex<T>>, zeta: [T; 2], beta: [u32; 2]) -> Vec<Complex<T>> {
    let h = T::lit(FD_STEP);
    let mut acc: Option<Vec<Complex<T>>> = None;
    for k1 in 0..=beta[0] {
        for k2 in 0..=beta[1] {
            let sign = if (k1 + k2) % 2 == 0 { 1.0 } else { -1.0 };
            let c = T::lit(sign * binom(beta[0], k1) * binom(beta[1], k2));
            let p = [
                zeta[0] + h * T::from_i64(beta[0] as i64 - 2 * k1 as i64).unwrap(),
                zeta[1] + h * T::from_i64(beta[1] as i64 - 2 * k2 as i64).unwrap(),
            ];
            let v = f(p);
            match &mut acc {
                None => acc = Some(v.into_iter().map(|x| x * c).collect()),
                Some(a) => a.iter_mut().zip(v).for_each(|(a, x)| *a = *a + x * c),
            }
        }
    }
    let scale = (h + h).powi(-((beta[0] + beta[1]) as i32));
    acc.unwrap().into_iter().map(|x| x * scale).collect()
}

fn zeta_derivative<T: FftReal>(a: &Symbol<T>, grid: &Grid<T>, zeta: [T; 2], beta: [u32; 2]) -> Vec<Complex<T>> {
    if beta == [0, 0] {
        return a.samples_at(grid, zeta);
    }
    if a.has_exact_zeta_gradient() {
        let j = if beta[0] > 0 { 0 } else { 1 };
        let mut rest = beta;
        rest[j] -= 1;
        let g = move |z: [T; 2]| {
            let [g0, g1] = a.zeta_gradient_samples(grid, z);
            if j == 0 {
                g0
            } else {
                g1
            }
        };
        return difference(&g, zeta, rest);
    }
    difference(&|z| a.samples_at(grid, z), zeta, beta)
}

/// sup over samples and |alpha| + |beta| <= r of <zeta>^{-l} || <zeta>^{|beta|} d_zeta^beta d_x^alpha a ||_{L^2_x}.
pub fn symbol_norm<T: FftReal>(a: &Symbol<T>, l: T, r: u32, zeta_samples: &[[T; 2]], grid: &Grid<T>) -> Result<SymbolNormReport> {
    if zeta_samples.is_empty() {
        return Err(invalid("zeta_samples", "empty sample set"));
    }
    if let Some(&z) = zeta_samples.iter().find(|z| z[0].hypot(z[1]) <= T::lit(0.5)) {
        return Err(invalid("zeta_samples", format!("|zeta| <= 1/2 at ({}, {})", z[0], z[1])));
    }
    let inv_area = torus_area::<T>().recip();
    let best = zeta_samples
        .par_iter()
        .map(|&zeta| {
            let bracket = (T::one() + zeta[0] * zeta[0] + zeta[1] * zeta[1]).sqrt();
            let mut best = T::zero();
            for b1 in 0..=r {
                for b2 in 0..=(r - b1) {
                    let v = zeta_derivative(a, grid, zeta, [b1, b2]);
                    let rows = FourierField::analyze(grid, &v).expect("size matches");
                    let w = bracket.powf(T::from_u32(b1 + b2).unwrap() - l);
                    let left = r - b1 - b2;
                    for a1 in 0..=left {
                        for a2 in 0..=(left - a1) {
                            let mut s = T::zero();
                            for (i, c) in rows.coeffs().iter().enumerate() {
                                let rho = grid.freq(i);
                                let m = T::from_i64(rho.x).unwrap().powi(a1 as i32) * T::from_i64(rho.y).unwrap().powi(a2 as i32);
                                s = s + c.norm_sqr() * m * m;
                            }
                            best = best.max(w * (s * inv_area).sqrt());
                        }
                    }
                }
            }
            (best, zeta)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((T::zero(), None), |acc: (T, Option<[T; 2]>), (v, z)| if v > acc.0 || acc.1.is_none() { (v, Some(z)) } else { acc });
    let radius = zeta_samples.iter().map(|z| z[0].hypot(z[1]).as_f64()).fold(0.0, f64::max);
    Ok(SymbolNormReport {
        order: l.as_f64(),
        differentiability: r,
        value: best.0.as_f64(),
        samples: format!("{} points, {} < |zeta| <= {radius}", zeta_samples.len(), 0.5),
        sample_count: zeta_samples.len(),
        argmax_zeta: best.1.map(|z| [z[0].as_f64(), z[1].as_f64()]),
        lower_bound: true,
    })
}
