use serde::{Deserialize, Serialize};

use super::symbols::{build_symbols, WWSymbols};
use super::unknown::build_good_variable;
use super::{cre, SurfaceState};
use crate::error::{invalid, Result};
use crate::fit::loglog_slope;
use crate::paradiff::{symbol_norm, ParadiffConfig, Symbol, ZetaFn};
use crate::scalar::FftReal;
use crate::torus::{AbsGrad, GravityCapillary};

/// Remainders below this are exact zeros for the slope fit.
const VANISH: f64 = 1e-14;

/// Powers p used for the lambda^p and (g + ell)^p expansions.
pub const EXPANSION_POWERS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionEntry {
    pub name: String,
    pub order: f64,
    pub values: Vec<f64>,
    /// log-log slope against eps; None when every remainder vanished.
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub eps: Vec<f64>,
    pub entries: Vec<ExpansionEntry>,
    pub chi_exponent: i32,
}

impl ExpansionReport {
    pub fn entry(&self, name: &str) -> Option<&ExpansionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn check_eps<T: FftReal>(eps: &[T]) -> Result<Vec<f64>> {
    let e: Vec<f64> = eps.iter().map(|x| x.as_f64()).collect();
    let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = e.iter().cloned().fold(0.0, f64::max);
    if e.len() < 2 || !(lo > 0.0) || hi / lo < 100.0 - 1e-9 {
        return Err(invalid("eps", "need positive values spanning at least two decades"));
    }
    Ok(e)
}

fn power<T: FftReal>(s: &Symbol<T>, order: T, p: T) -> Symbol<T> {
    s.map_samples(order, move |z| cre(z.re.powf(p)), None).expect("symbol carries a grid")
}

fn remainders<T: FftReal>(sy: &WWSymbols<T>, state: &SurfaceState<T>) -> Vec<(String, T, Symbol<T>)> {
    let prm = state.params();
    let mut out = Vec::new();
    for &pf in &EXPANSION_POWERS {
        let p = T::lit(pf);
        let lead = Symbol::multiplier(p, ZetaFn::abs_power(p));
        let first = sy.lambda1_0.mul(&Symbol::multiplier(p - T::one(), ZetaFn::abs_power(p - T::one()))).scale(cre(p));
        out.push((format!("lambda^{pf}"), p, power(&sy.lambda, p, p).sub(&lead).sub(&first)));
    }
    for &pf in &EXPANSION_POWERS {
        let p = T::lit(pf);
        let two_p = p + p;
        let lead = Symbol::multiplier(two_p, ZetaFn::gravity_capillary(prm, p));
        let first = Symbol::product(&sy.lambda2_h, ZetaFn::gravity_capillary(prm, p - T::one()), two_p - T::lit(2.0)).scale(cre(-p));
        out.push((format!("(g+ell)^{pf}"), two_p, power(&sy.g_plus_ell, two_p, p).sub(&lead).sub(&first)));
    }
    let lam = Symbol::multiplier(T::lit(1.5), ZetaFn::dispersion(prm));
    out.push(("Sigma".to_string(), T::lit(1.5), sy.sigma.sub(&lam).sub(&sy.sigma1)));
    out
}

/// Symbol-class norms of the expansion remainders for each eps, with their eps-slopes.
pub fn expansion_check<T: FftReal>(
    base: &SurfaceState<T>,
    eps: &[T],
    zeta_samples: &[[T; 2]],
    r: u32,
    cfg: &ParadiffConfig,
) -> Result<ExpansionReport> {
    let e = check_eps(eps)?;
    let grid = base.h().grid().clone();
    let mut names: Vec<(String, f64)> = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    for &ek in eps {
        let st = base.scaled(ek);
        let sy = build_symbols(&st, cfg)?;
        let rems = remainders(&sy, &st);
        if names.is_empty() {
            names = rems.iter().map(|(n, o, _)| (n.clone(), o.as_f64())).collect();
            values = vec![Vec::new(); rems.len()];
        }
        for (k, (_, order, sym)) in rems.iter().enumerate() {
            values[k].push(symbol_norm(sym, *order, r, zeta_samples, &grid)?.value);
        }
    }
    let entries = names
        .into_iter()
        .zip(values)
        .map(|((name, order), v)| ExpansionEntry {
            slope: loglog_slope(&e, &v, VANISH),
            name,
            order,
            values: v,
        })
        .collect();
    Ok(ExpansionReport {
        eps: e,
        entries,
        chi_exponent: cfg.chi_exponent,
    })
}

/// eps-scaling of U against its linearization and of (H, Psi) against (Re U, Im U), in H^n.
pub fn good_variable_scaling<T: FftReal>(base: &SurfaceState<T>, eps: &[T], n: T, cfg: &ParadiffConfig) -> Result<ExpansionReport> {
    let e = check_eps(eps)?;
    let mut v = vec![Vec::new(); 3];
    for &ek in eps {
        let st = base.scaled(ek);
        let sy = build_symbols(&st, cfg)?;
        let gv = build_good_variable(&st, &sy, cfg)?;
        let lin = st
            .h()
            .apply_regular(&GravityCapillary::new(st.params(), T::lit(0.5)))
            .plus(&st.omega().apply_regular(&AbsGrad::new(T::lit(0.5))).times_i());
        let re_u = gv.u.real_part();
        let im_u = gv.u.imag_part();
        v[0].push(gv.u.minus(&lin).sobolev_norm(n).as_f64());
        v[1].push(gv.h_part.minus(&re_u).sobolev_norm(n).as_f64());
        v[2].push(gv.psi.minus(&im_u).sobolev_norm(n).as_f64());
    }
    let names = ["U - linear", "H - Re U", "Psi - Im U"];
    let entries = names
        .iter()
        .zip(v)
        .map(|(name, vals)| ExpansionEntry {
            name: name.to_string(),
            order: n.as_f64(),
            slope: loglog_slope(&e, &vals, VANISH),
            values: vals,
        })
        .collect();
    Ok(ExpansionReport {
        eps: e,
        entries,
        chi_exponent: cfg.chi_exponent,
    })
}
