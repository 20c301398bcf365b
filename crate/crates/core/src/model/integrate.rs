use num_complex::Complex;

use super::{velocity, Integrator, ModelConfig, SolverState};
use crate::dispersion::DispersionParams;
use crate::error::{Error, Result};
use crate::scalar::FftReal;
use crate::torus::{FourierField, LinearFlow};

const MIDPOINT_TOL: f64 = 1e-15;
const MIDPOINT_MAX_ITER: usize = 60;

/// N(U) = grad V . grad U + (1/2) Lap V U, products in physical space, result truncated to the 2/3 band.
pub fn nonlinearity<T: FftReal>(u: &FourierField<T>, cfg: &ModelConfig<T>) -> FourierField<T> {
    let u = u.dealias();
    let v = velocity(&u, cfg);
    let [v1, v2] = v.gradient();
    let [u1, u2] = u.gradient();
    let lv = v.laplacian().synthesize();
    let (v1, v2, u1, u2, us) = (v1.synthesize(), v2.synthesize(), u1.synthesize(), u2.synthesize(), u.synthesize());
    let half = T::lit(0.5);
    let p: Vec<Complex<T>> = (0..us.len())
        .map(|i| u1[i] * v1[i].re + u2[i] * v2[i].re + us[i] * (lv[i].re * half))
        .collect();
    FourierField::analyze(u.grid(), &p).expect("same grid").dealias()
}

/// e^{-i tau Lambda} U.
pub fn linear_flow<T: FftReal>(u: &FourierField<T>, params: &DispersionParams<T>, tau: T) -> FourierField<T> {
    u.apply_regular(&LinearFlow { params: *params, tau })
}

fn forcing<T: FftReal>(u: &FourierField<T>, cfg: &ModelConfig<T>) -> FourierField<T> {
    if cfg.nonlinear {
        nonlinearity(u, cfg)
    } else {
        FourierField::zeros(u.grid()).forget_reality()
    }
}

fn midpoint<T: FftReal>(u: &FourierField<T>, dt: T, cfg: &ModelConfig<T>) -> Result<FourierField<T>> {
    let p = &cfg.params;
    let half = dt * T::lit(0.5);
    let a = linear_flow(u, p, half);
    if !cfg.nonlinear {
        return Ok(linear_flow(&a, p, half));
    }
    // y = A + (dt/2) N(y), then U_next = e^{-i dt/2 Lambda} (2y - A).
    let mut y = a.clone();
    let mut last = T::infinity();
    for _ in 0..MIDPOINT_MAX_ITER {
        let next = a.plus(&nonlinearity(&y, cfg).scale(half));
        let change = next.minus(&y).l2_norm();
        let scale = next.l2_norm().max(T::min_positive_value());
        y = next;
        if change <= T::lit(MIDPOINT_TOL) * scale || (change >= last && change <= T::lit(1e3 * MIDPOINT_TOL) * scale) {
            return Ok(linear_flow(&y.scale(T::lit(2.0)).minus(&a), p, half));
        }
        last = change;
    }
    Err(Error::NumericAbort {
        t: f64::NAN,
        reason: format!("midpoint iteration did not converge with dt = {dt}"),
    })
}

fn lawson_rk4<T: FftReal>(u: &FourierField<T>, dt: T, cfg: &ModelConfig<T>) -> FourierField<T> {
    let p = &cfg.params;
    let h2 = dt * T::lit(0.5);
    let e_half = |f: &FourierField<T>| linear_flow(f, p, h2);
    let e_full = |f: &FourierField<T>| linear_flow(f, p, dt);
    let k1 = forcing(u, cfg);
    let k2 = forcing(&e_half(&u.plus(&k1.scale(h2))), cfg);
    let eu = e_half(u);
    let k3 = forcing(&eu.plus(&k2.scale(h2)), cfg);
    let k4 = forcing(&e_full(u).plus(&e_half(&k3).scale(dt)), cfg);
    let incr = e_full(&k1)
        .plus(&e_half(&k2.plus(&k3)).scale(T::lit(2.0)))
        .plus(&k4)
        .scale(dt / T::lit(6.0));
    e_full(u).plus(&incr)
}

fn direct_rk4<T: FftReal>(u: &FourierField<T>, dt: T, cfg: &ModelConfig<T>) -> FourierField<T> {
    let p = cfg.params;
    let rhs = |f: &FourierField<T>| {
        let lin = f
            .apply_regular(&crate::torus::Dispersion::new(p))
            .scale_complex(Complex::new(T::zero(), -T::one()));
        lin.plus(&forcing(f, cfg))
    };
    let h2 = dt * T::lit(0.5);
    let k1 = rhs(u);
    let k2 = rhs(&u.plus(&k1.scale(h2)));
    let k3 = rhs(&u.plus(&k2.scale(h2)));
    let k4 = rhs(&u.plus(&k3.scale(dt)));
    let incr = k1
        .plus(&k2.scale(T::lit(2.0)))
        .plus(&k3.scale(T::lit(2.0)))
        .plus(&k4)
        .scale(dt / T::lit(6.0));
    u.plus(&incr)
}

/// Advances by an explicit dt. On a non-finite result the input state is left untouched.
pub fn advance<T: FftReal>(state: &SolverState<T>, dt: T, cfg: &ModelConfig<T>) -> Result<SolverState<T>> {
    let abort = |reason: String| Error::NumericAbort {
        t: state.t.as_f64(),
        reason,
    };
    let next = match cfg.integrator {
        Integrator::ExpMidpoint => midpoint(&state.u, dt, cfg).map_err(|e| match e {
            Error::NumericAbort { reason, .. } => abort(reason),
            e => e,
        })?,
        Integrator::LawsonRk4 => lawson_rk4(&state.u, dt, cfg),
        Integrator::DirectRk4 => direct_rk4(&state.u, dt, cfg),
    };
    if !next.is_finite() {
        return Err(abort("non-finite coefficients".into()));
    }
    let mut out = SolverState {
        t: state.t + dt,
        u: next,
        l2_initial: state.l2_initial,
        diagnostics: state.diagnostics.clone(),
    };
    out.record(cfg.sobolev_index);
    Ok(out)
}

/// One step of size cfg.dt, or of the Courant step for the current state.
pub fn step<T: FftReal>(state: &SolverState<T>, cfg: &ModelConfig<T>) -> Result<SolverState<T>> {
    let dt = cfg.dt.unwrap_or_else(|| cfg.courant_dt(&state.u));
    advance(state, dt, cfg)
}
