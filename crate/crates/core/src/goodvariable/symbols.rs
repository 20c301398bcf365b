use std::sync::Arc;

use num_complex::Complex;

use super::{cre, SurfaceState};
use crate::error::{Error, Result};
use crate::paradiff::{weyl_apply, ParadiffConfig, Symbol, ZetaFn};
use crate::scalar::FftReal;
use crate::torus::{AbsGrad, Dispersion, FourierField, Grid};

/// The symbols built from a surface state. Fields of Fourier data are kept alongside for reuse.
#[derive(Clone, Debug)]
pub struct WWSymbols<T: FftReal> {
    /// lambda^(1), order 1.
    pub lambda1: Symbol<T>,
    /// lambda^(0), order 0.
    pub lambda0: Symbol<T>,
    /// lambda = lambda^(1) + lambda^(0).
    pub lambda: Symbol<T>,
    /// First-order part lambda_1^(0) of lambda^(0).
    pub lambda1_0: Symbol<T>,
    /// ell = L_ij zeta_i zeta_j - Lambda^2 h, order 2.
    pub ell: Symbol<T>,
    pub l_ij: [[FourierField<T>; 2]; 2],
    pub g_plus_ell: Symbol<T>,
    pub sqrt_g_ell: Symbol<T>,
    pub inv_sqrt_g_ell: Symbol<T>,
    /// Sigma = sqrt(lambda (g + ell)), order 3/2.
    pub sigma: Symbol<T>,
    /// Sigma_1, order 1/2.
    pub sigma1: Symbol<T>,
    /// m' = (i/2) div V1 / sqrt(g + ell), order -1.
    pub mprime: Symbol<T>,
    /// m'_1 = (i/2) div V1 / sqrt(g + sigma |zeta|^2).
    pub mprime1: Symbol<T>,
    pub gamma: Symbol<T>,
    /// V1 . zeta, order 1.
    pub v1_dot_zeta: Symbol<T>,
    pub v1: [FourierField<T>; 2],
    /// Im U0 = T_Sigma T_{1/sqrt(g+ell)} omega, the source of V1.
    pub im_u0: FourierField<T>,
    pub lambda2_h: FourierField<T>,
}

fn field_of<T: FftReal>(grid: &Grid<T>, samples: Vec<T>) -> FourierField<T> {
    FourierField::analyze_real(grid, &samples).expect("sample count matches grid")
}

/// V1 = |grad|^{-1/2} grad Im U.
pub fn v1_from<T: FftReal>(im_u: &FourierField<T>) -> [FourierField<T>; 2] {
    let r = im_u.without_mean().apply(&AbsGrad::new(T::lit(-0.5))).expect("mean removed");
    r.gradient()
}

/// gamma = (zeta_i zeta_j / |zeta|^2) |grad|^{-1/2} d_i d_j Im U.
pub fn gamma_from<T: FftReal>(im_u: &FourierField<T>) -> Symbol<T> {
    let r = im_u.without_mean().apply(&AbsGrad::new(T::lit(-0.5))).expect("mean removed");
    let [d1, d2] = r.gradient();
    let mut out: Option<Symbol<T>> = None;
    for (i, di) in [d1, d2].iter().enumerate() {
        for j in 0..2 {
            let t = Symbol::product(&di.partial(j), ZetaFn::angular(i, j), T::zero());
            out = Some(match out {
                None => t,
                Some(o) => o.add(&t),
            });
        }
    }
    out.unwrap()
}

fn sum<T: FftReal>(parts: Vec<Symbol<T>>) -> Symbol<T> {
    let mut it = parts.into_iter();
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, s| acc.add(&s))
}

fn real_map<T: FftReal>(
    s: &Symbol<T>,
    order: T,
    f: impl Fn(T) -> T + Send + Sync + 'static,
    df: impl Fn(T) -> T + Send + Sync + 'static,
) -> Symbol<T> {
    s.map_samples(order, move |z| cre(f(z.re)), Some(Arc::new(move |z: Complex<T>| cre(df(z.re)))))
        .expect("symbol carries a grid")
}

/// Builds every symbol from (h, omega).
pub fn build_symbols<T: FftReal>(state: &SurfaceState<T>, cfg: &ParadiffConfig) -> Result<WWSymbols<T>> {
    let h = state.h();
    let grid = h.grid().clone();
    let p = state.params();
    let (g, sig) = (p.g(), p.sigma());
    let [hx, hy] = h.gradient();
    let hxs = Arc::new(hx.synthesize_real());
    let hys = Arc::new(hy.synthesize_real());
    let s: Arc<Vec<T>> = Arc::new(hxs.iter().zip(hys.iter()).map(|(a, b)| T::one() + *a * *a + *b * *b).collect());
    let lambda2_h = h.apply_regular(&Dispersion::power(p, 2));
    let l2h = lambda2_h.synthesize_real();
    let m = grid.size();
    for (k, (&sk, &lk)) in s.iter().zip(&l2h).enumerate() {
        if !(sk > T::zero()) || !sk.is_finite() {
            return Err(Error::Positivity {
                quantity: "1 + |grad h|^2",
                i: k / m,
                j: k % m,
                value: sk.as_f64(),
            });
        }
        // Smallest value of g + ell over |zeta| >= 1/2.
        let floor = g - lk + sig / (T::lit(4.0) * sk.powf(T::lit(1.5)));
        if !(floor > T::zero()) {
            return Err(Error::Positivity {
                quantity: "g + ell",
                i: k / m,
                j: k % m,
                value: floor.as_f64(),
            });
        }
    }

    // lambda^(1) with its exact zeta-gradient.
    let (a, b, c) = (hxs.clone(), hys.clone(), s.clone());
    let (a2, b2, c2) = (hxs.clone(), hys.clone(), s.clone());
    let lambda1 = Symbol::sampled(T::one(), &grid, move |z| {
        let n2 = z[0] * z[0] + z[1] * z[1];
        (0..c.len())
            .map(|i| {
                let d = z[0] * a[i] + z[1] * b[i];
                cre((c[i] * n2 - d * d).sqrt())
            })
            .collect()
    })
    .with_sample_gradient(move |z| {
        let n2 = z[0] * z[0] + z[1] * z[1];
        let mut g0 = Vec::with_capacity(c2.len());
        let mut g1 = Vec::with_capacity(c2.len());
        for i in 0..c2.len() {
            let d = z[0] * a2[i] + z[1] * b2[i];
            let l = (c2[i] * n2 - d * d).sqrt();
            g0.push(cre((c2[i] * z[0] - d * a2[i]) / l));
            g1.push(cre((c2[i] * z[1] - d * b2[i]) / l));
        }
        [g0, g1]
    });

    // lambda^(0) = s^2 / (2 lambda1) {lambda1 / s, zeta.grad h / s} + Delta h / 2.
    let inv_s = field_of(&grid, s.iter().map(|x| x.recip()).collect());
    let a_sym = lambda1.mul(&Symbol::function(&inv_s));
    let b_sym = Symbol::product(&field_of(&grid, hxs.iter().zip(s.iter()).map(|(x, y)| *x / *y).collect()), ZetaFn::component(0), T::one())
        .add(&Symbol::product(&field_of(&grid, hys.iter().zip(s.iter()).map(|(x, y)| *x / *y).collect()), ZetaFn::component(1), T::one()));
    let bracket = a_sym.poisson(&b_sym);
    let lap = Arc::new(h.laplacian().synthesize_real());
    let (l1, gr, ss) = (lambda1.clone(), grid.clone(), s.clone());
    let lambda0 = Symbol::sampled(T::zero(), &grid, move |z| {
        let pb = bracket.samples_at(&gr, z);
        let l = l1.samples_at(&gr, z);
        (0..pb.len())
            .map(|i| cre(ss[i] * ss[i] / (T::lit(2.0) * l[i].re) * pb[i].re + T::lit(0.5) * lap[i]))
            .collect()
    });
    let lambda = lambda1.add(&lambda0).with_order(T::one());

    // Second derivatives of h.
    let dd = [[hx.partial(0), hx.partial(1)], [hy.partial(0), hy.partial(1)]];
    let half = T::lit(0.5);
    let neg_half = Complex::new(-half, T::zero());
    let lap_h = h.laplacian();
    let mut l1_parts = vec![Symbol::product(&lap_h.scale(half), ZetaFn::one(), T::zero())];
    for (i, row) in dd.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            l1_parts.push(Symbol::product(d, ZetaFn::angular(i, j), T::zero()).scale(neg_half));
        }
    }
    let lambda1_0 = sum(l1_parts);

    // L_ij and ell.
    let l_ij: [[FourierField<T>; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let v: Vec<T> = (0..s.len())
                .map(|k| {
                    let di = if i == 0 { hxs[k] } else { hys[k] };
                    let dj = if j == 0 { hxs[k] } else { hys[k] };
                    let delta = if i == j { T::one() } else { T::zero() };
                    sig / s[k].sqrt() * (delta - di * dj / s[k])
                })
                .collect();
            field_of(&grid, v)
        })
    });
    let mut ell_parts = Vec::new();
    for (i, row) in l_ij.iter().enumerate() {
        for (j, l) in row.iter().enumerate() {
            let zij = ZetaFn::component(i).mul(&ZetaFn::component(j));
            ell_parts.push(Symbol::product(l, zij, T::lit(2.0)));
        }
    }
    ell_parts.push(Symbol::function(&lambda2_h).scale(Complex::new(-T::one(), T::zero())));
    let ell = sum(ell_parts).with_order(T::lit(2.0));
    let g_plus_ell = ell.add(&Symbol::constant(cre(g))).with_order(T::lit(2.0));
    let sqrt_g_ell = real_map(&g_plus_ell, T::one(), |x| x.sqrt(), |x| T::lit(0.5) / x.sqrt());
    let inv_sqrt_g_ell = real_map(&g_plus_ell, -T::one(), |x| x.sqrt().recip(), |x| -T::lit(0.5) * x.powf(T::lit(-1.5)));
    let sigma = real_map(&lambda.mul(&g_plus_ell), T::lit(1.5), |x| x.sqrt(), |x| T::lit(0.5) / x.sqrt());

    // Sigma_1 = (Lambda / 4|zeta|)(Delta h - zeta_i zeta_j d_i d_j h / |zeta|^2) - (|zeta| / 2 Lambda) Lambda^2 h.
    let q = ZetaFn::dispersion(p).mul(&ZetaFn::abs_power(-T::one())).scale(cre(T::lit(0.25)));
    let mut s1_parts = vec![Symbol::product(&lap_h, q.clone(), T::lit(0.5))];
    for (i, row) in dd.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            s1_parts.push(Symbol::product(d, q.mul(&ZetaFn::angular(i, j)), T::lit(0.5)).scale(cre(-T::one())));
        }
    }
    let r = ZetaFn::abs_power(T::one()).mul(&ZetaFn::dispersion_power(p, -T::one())).scale(neg_half);
    s1_parts.push(Symbol::product(&lambda2_h, r, T::lit(0.5)));
    let sigma1 = sum(s1_parts);

    let omega = state.omega();
    let im_u0 = weyl_apply(&sigma, &weyl_apply(&inv_sqrt_g_ell, omega, cfg)?, cfg)?.real_part();
    let v1 = v1_from(&im_u0);
    let div_v = v1[0].partial(0).plus(&v1[1].partial(1));
    let half_i = Complex::new(T::zero(), half);
    let mprime = Symbol::function(&div_v).mul(&inv_sqrt_g_ell).scale(half_i).with_order(-T::one());
    let mprime1 = Symbol::product(&div_v, ZetaFn::gravity_capillary(p, -half), -T::one()).scale(half_i);
    let gamma = gamma_from(&im_u0);
    let v1_dot_zeta = Symbol::product(&v1[0], ZetaFn::component(0), T::one()).add(&Symbol::product(&v1[1], ZetaFn::component(1), T::one()));

    Ok(WWSymbols {
        lambda1,
        lambda0,
        lambda,
        lambda1_0,
        ell,
        l_ij,
        g_plus_ell,
        sqrt_g_ell,
        inv_sqrt_g_ell,
        sigma,
        sigma1,
        mprime,
        mprime1,
        gamma,
        v1_dot_zeta,
        v1,
        im_u0,
        lambda2_h,
    })
}
