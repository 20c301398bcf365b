use serde::{Deserialize, Serialize};

use super::symbols::WWSymbols;
use super::SurfaceState;
use crate::error::Result;
use crate::paradiff::{weyl_apply, ParadiffConfig};
use crate::scalar::FftReal;
use crate::torus::{Dispersion, FourierField};

/// U = H + i Psi with H = T_{sqrt(g+ell)} h and Psi = T_Sigma T_{1/sqrt(g+ell)} omega + T_{m'} omega.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodVariable<T: FftReal> {
    pub u: FourierField<T>,
    pub h_part: FourierField<T>,
    pub psi: FourierField<T>,
}

pub fn build_good_variable<T: FftReal>(state: &SurfaceState<T>, symbols: &WWSymbols<T>, cfg: &ParadiffConfig) -> Result<GoodVariable<T>> {
    let h_part = weyl_apply(&symbols.sqrt_g_ell, state.h(), cfg)?;
    let t = weyl_apply(&symbols.inv_sqrt_g_ell, state.omega(), cfg)?;
    let psi = weyl_apply(&symbols.sigma, &t, cfg)?.plus(&weyl_apply(&symbols.mprime, state.omega(), cfg)?);
    let u = h_part.plus(&psi.times_i());
    Ok(GoodVariable { u, h_part, psi })
}

/// The ladder W_n = (T_Sigma)^n U with its comparison to Lambda^n U.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    /// ||W_n - Lambda^n U||_{L^2}.
    pub deviation: Vec<f64>,
    /// ||W_n||_{L^2}.
    pub w_norms: Vec<f64>,
    /// ||U||_{H^{3n/2}}.
    pub u_norms: Vec<f64>,
    /// sum_n ||W_n|| / ||U||_{H^{3 n_max / 2}}.
    pub equivalence_ratio: f64,
}

pub fn ladder<T: FftReal>(
    u: &FourierField<T>,
    symbols: &WWSymbols<T>,
    state: &SurfaceState<T>,
    n_max: usize,
    cfg: &ParadiffConfig,
) -> Result<(Vec<FourierField<T>>, LadderReport)> {
    let mut w = vec![u.clone()];
    for _ in 0..n_max {
        let next = weyl_apply(&symbols.sigma, w.last().unwrap(), cfg)?;
        w.push(next);
    }
    let mut deviation = Vec::new();
    let mut w_norms = Vec::new();
    let mut u_norms = Vec::new();
    for (n, wn) in w.iter().enumerate() {
        let ln = u.apply_regular(&Dispersion::power(state.params(), n as i32));
        deviation.push(wn.minus(&ln).l2_norm().as_f64());
        w_norms.push(wn.l2_norm().as_f64());
        u_norms.push(u.sobolev_norm(T::lit(1.5 * n as f64)).as_f64());
    }
    let total: f64 = w_norms.iter().sum();
    let equivalence_ratio = total / u_norms[n_max].max(f64::MIN_POSITIVE);
    Ok((
        w,
        LadderReport {
            deviation,
            w_norms,
            u_norms,
            equivalence_ratio,
        },
    ))
}
