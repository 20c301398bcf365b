use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::symbol::Symbol;
use super::zeta::ZetaFn;
use super::ParadiffConfig;
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::FftReal;
use crate::torus::{torus_area, FourierField, Grid};

/// Largest grid side for which operator matrices are materialized.
pub const MAX_MATRIX_GRID: usize = 64;

type Weight<'a, T> = &'a (dyn Fn(LatticePoint, LatticePoint, [T; 2]) -> Complex<T> + Sync);

#[inline]
fn czero<T: FftReal>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn half<T: FftReal>(s: LatticePoint) -> [T; 2] {
    let h = T::lit(0.5);
    [T::from_i64(s.x).unwrap() * h, T::from_i64(s.y).unwrap() * h]
}

fn guard<T: FftReal>(zeta: [T; 2]) -> Result<()> {
    let n = zeta[0].hypot(zeta[1]);
    if n <= T::lit(0.5) {
        return Err(Error::ZetaGuard { norm: n.as_f64() });
    }
    Ok(())
}

/// T_a f, acting on and returning modes without a Nyquist coordinate so that conjugation maps the
/// frequency set to itself.
pub fn weyl_apply<T: FftReal>(a: &Symbol<T>, f: &FourierField<T>, cfg: &ParadiffConfig) -> Result<FourierField<T>> {
    weyl_kernel(a, f, cfg, None)
}

/// Quantization with an extra kernel factor w(xi, eta, zeta) inside the sum.
pub(crate) fn weyl_kernel<T: FftReal>(a: &Symbol<T>, f: &FourierField<T>, cfg: &ParadiffConfig, weight: Option<Weight<'_, T>>) -> Result<FourierField<T>> {
    cfg.validate()?;
    if let Some(g) = a.grid() {
        if g.size() != f.grid().size() {
            return Err(Error::GridMismatch {
                left: g.size(),
                right: f.grid().size(),
            });
        }
    }
    let coeffs = if a.is_separable() {
        sparse_path(a, f, cfg, weight)?
    } else {
        dense_path(a, f, cfg, weight)?
    };
    FourierField::from_coeffs(f.grid(), coeffs, false)
}

fn sparse_path<T: FftReal>(a: &Symbol<T>, f: &FourierField<T>, cfg: &ParadiffConfig, weight: Option<Weight<'_, T>>) -> Result<Vec<Complex<T>>> {
    let grid = f.grid();
    let terms = a.terms().expect("separable");
    let inv_area = torus_area::<T>().recip();
    let ratio = cfg.support_ratio();
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let xi = grid.freq(i);
            if xi.is_zero() || grid.symmetric_index(xi).is_none() {
                return Ok(czero());
            }
            let mut acc = czero();
            for t in terms {
                for (rho, c) in t.rows.iter() {
                    let eta = xi - *rho;
                    if rho.max_abs() >= grid.half() {
                        continue;
                    }
                    let Some(j) = grid.symmetric_index(eta) else { continue };
                    let fe = f.coeffs()[j];
                    if fe == czero() {
                        continue;
                    }
                    let s = xi + eta;
                    if s.is_zero() {
                        continue;
                    }
                    let (nr, ns) = ((rho.norm_sq() as f64).sqrt(), (s.norm_sq() as f64).sqrt());
                    if nr >= ratio * ns {
                        continue;
                    }
                    let w = cfg.chi(T::lit(nr) / T::lit(ns));
                    let zeta = half::<T>(s);
                    guard(zeta)?;
                    let mut v = *c * t.zeta.eval(zeta) * fe * w;
                    if let Some(wf) = weight {
                        v = v * wf(xi, eta, zeta);
                    }
                    acc = acc + v;
                }
            }
            Ok(acc * inv_area)
        })
        .collect()
}

fn dense_path<T: FftReal>(a: &Symbol<T>, f: &FourierField<T>, cfg: &ParadiffConfig, weight: Option<Weight<'_, T>>) -> Result<Vec<Complex<T>>> {
    let grid = f.grid();
    let m = grid.size() as i64;
    let h = grid.half();
    let inv_area = torus_area::<T>().recip();
    let ratio = cfg.support_ratio();
    // s = xi + eta ranges over [-M, M - 2]^2; one block per first coordinate.
    let blocks: Vec<Vec<(usize, Complex<T>)>> = (-m..=m - 2)
        .into_par_iter()
        .map(|sx| -> Result<Vec<(usize, Complex<T>)>> {
            let mut out = Vec::new();
            let mut pairs: Vec<(usize, usize, LatticePoint, T)> = Vec::new();
            for sy in -m..=m - 2 {
                let s = LatticePoint::new(sx, sy);
                if s.is_zero() {
                    continue;
                }
                let ns = (s.norm_sq() as f64).sqrt();
                let radius = ratio * ns / 2.0;
                let (cx, cy) = (sx as f64 / 2.0, sy as f64 / 2.0);
                pairs.clear();
                for ex in ((cx - radius).floor() as i64).max(-h)..=((cx + radius).ceil() as i64).min(h - 1) {
                    for ey in ((cy - radius).floor() as i64).max(-h)..=((cy + radius).ceil() as i64).min(h - 1) {
                        let eta = LatticePoint::new(ex, ey);
                        let rho = s - eta - eta;
                        let nr = (rho.norm_sq() as f64).sqrt();
                        if nr >= ratio * ns {
                            continue;
                        }
                        let Some(j) = grid.symmetric_index(eta) else { continue };
                        if f.coeffs()[j] == czero() {
                            continue;
                        }
                        let xi = s - eta;
                        if xi.is_zero() {
                            continue;
                        }
                        let Some(i) = grid.symmetric_index(xi) else { continue };
                        pairs.push((i, j, rho, cfg.chi(T::lit(nr) / T::lit(ns))));
                    }
                }
                if pairs.is_empty() {
                    continue;
                }
                let zeta = half::<T>(s);
                guard(zeta)?;
                let rows = a.rows_at(grid, zeta);
                for &(i, j, rho, w) in &pairs {
                    let Some(k) = grid.symmetric_index(rho) else { continue };
                    let mut v = rows[k] * f.coeffs()[j] * w * inv_area;
                    if let Some(wf) = weight {
                        v = v * wf(grid.freq(i), grid.freq(j), zeta);
                    }
                    out.push((i, v));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![czero(); grid.len()];
    for block in blocks {
        for (i, v) in block {
            coeffs[i] = coeffs[i] + v;
        }
    }
    Ok(coeffs)
}

/// Full matrix of T_a in storage order, row-major: entry (i, j) maps f^(freq j) to output freq i.
pub fn assemble_matrix<T: FftReal>(a: &Symbol<T>, grid: &Grid<T>, cfg: &ParadiffConfig) -> Result<Vec<Complex<T>>> {
    if grid.size() > MAX_MATRIX_GRID {
        return Err(Error::ResourceBudget {
            what: "operator matrix side".into(),
            requested: grid.size() as u64,
            budget: MAX_MATRIX_GRID as u64,
        });
    }
    let n = grid.len();
    let area = torus_area::<T>();
    let columns: Vec<Vec<Complex<T>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut c = vec![czero(); n];
            c[j] = Complex::new(area, T::zero());
            let unit = FourierField::from_coeffs(grid, c, false)?;
            Ok(weyl_apply(a, &unit, cfg)?.coeffs().iter().map(|v| *v / area).collect())
        })
        .collect::<Result<_>>()?;
    let mut out = vec![czero(); n * n];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            out[i * n + j] = *v;
        }
    }
    Ok(out)
}

/// Which of the two explicit remainders to apply.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// T_a T_b - T_{ab} - (i/2) T_{{a,b}}.
    Left,
    /// T_b T_a - T_{ba} - (i/2) T_{{b,a}}.
    Right,
}

/// Remainder of composing with a Fourier multiplier a, from its second-order Taylor kernel.
///
/// T_a kills constants, so a(0) reads as zero on the right.
pub fn error_kernel_apply<T: FftReal>(
    a: &ZetaFn<T>,
    b: &Symbol<T>,
    f: &FourierField<T>,
    side: Side,
    cfg: &ParadiffConfig,
) -> Result<FourierField<T>> {
    if !a.has_exact_gradient() {
        return Err(invalid("a", "multiplier needs an exact gradient"));
    }
    let pt = |v: LatticePoint| [T::from_i64(v.x).unwrap(), T::from_i64(v.y).unwrap()];
    let w = move |xi: LatticePoint, eta: LatticePoint, zeta: [T; 2]| -> Complex<T> {
        let g = a.gradient(zeta);
        let half = T::lit(0.5);
        let (outer, d) = match side {
            Side::Left => (a.eval(pt(xi)), xi - eta),
            Side::Right => (if eta.is_zero() { czero() } else { a.eval(pt(eta)) }, eta - xi),
        };
        let dv = pt(d);
        outer - a.eval(zeta) - (g[0] * dv[0] + g[1] * dv[1]) * half
    };
    weyl_kernel(b, f, cfg, Some(&w))
}
