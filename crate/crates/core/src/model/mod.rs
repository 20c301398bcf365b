//! The quasilinear model dU/dt + i Lambda U = grad V . grad U + (1/2) Lap V U, V = P_{<=B} Im U.
//!
//! Lambda = Lambda_{g,1}. Fields are kept inside the 2/3 band, where the nonlinearity is skew
//! to rounding and the L^2 norm is conserved by the midpoint rule.

mod integrate;
mod run;
mod sweep;


use std::collections::VecDeque;

use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dispersion::DispersionParams;
use crate::error::{invalid, Result};
use crate::scalar::FftReal;
use crate::torus::{FourierField, Grid, LinearFlow};

pub use integrate::{advance, linear_flow, nonlinearity, step};
pub use run::{run, ConservationReport, RunOutput, TrajectoryPoint};
pub use sweep::{lifespan_sweep, SweepReport, SweepRow};

/// Default velocity band B in V = P_{<=B} Im U.
pub const DEFAULT_VELOCITY_BAND: u32 = 10;
/// Default Sobolev index of the monitored H^N norm.
pub const DEFAULT_SOBOLEV_INDEX: f64 = 5.0;
/// Target Courant number ||grad V||_inf dt max|xi| of the automatic step.
pub const COURANT_TARGET: f64 = 0.1;
/// Diagnostics kept in the state ring buffer.
pub const DIAGNOSTIC_CAPACITY: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Implicit midpoint in the profile frame; conserves L^2 up to the solver tolerance.
    ExpMidpoint,
    /// Lawson RK4: classical RK4 on the profile u = e^{it Lambda} U.
    LawsonRk4,
    /// Classical RK4 on U itself, linear part included. Stiff; used for cross-checks.
    DirectRk4,
}

impl Integrator {
    pub fn order(self) -> u32 {
        match self {
            Integrator::ExpMidpoint => 2,
            Integrator::LawsonRk4 | Integrator::DirectRk4 => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig<T: FftReal> {
    pub params: DispersionParams<T>,
    pub grid: Grid<T>,
    /// Amplitude of the initial data, used by sweeps and reports.
    pub epsilon: T,
    /// Time step; None picks the Courant step from the initial data.
    pub dt: Option<T>,
    pub t_end: T,
    pub velocity_band: u32,
    pub integrator: Integrator,
    pub sobolev_index: T,
    /// Snapshot every this many steps (the initial and final states are always recorded).
    pub snapshot_every: usize,
    /// Store the field at each snapshot.
    pub keep_fields: bool,
    /// Stop once ||U||_{H^N} exceeds twice its initial value.
    pub stop_at_doubling: bool,
    /// Set to false for the linear flow alone.
    pub nonlinear: bool,
}

impl<T: FftReal> ModelConfig<T> {
    /// Defaults: midpoint rule, Courant step, B = 10, N = 5, a snapshot every step.
    pub fn new(g: T, grid: Grid<T>, epsilon: T, t_end: T) -> Result<Self> {
        let cfg = Self {
            params: DispersionParams::new(g, T::one())?,
            grid,
            epsilon,
            dt: None,
            t_end,
            velocity_band: DEFAULT_VELOCITY_BAND,
            integrator: Integrator::ExpMidpoint,
            sobolev_index: T::lit(DEFAULT_SOBOLEV_INDEX),
            snapshot_every: 1,
            keep_fields: false,
            stop_at_doubling: false,
            nonlinear: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.sigma() != T::one() {
            return Err(invalid("sigma", "the model is posed with sigma = 1"));
        }
        if !(self.epsilon > T::zero()) {
            return Err(invalid("epsilon", format!("must be positive, got {}", self.epsilon)));
        }
        if let Some(dt) = self.dt {
            if !(dt > T::zero()) || !dt.is_finite() {
                return Err(invalid("dt", format!("must be positive, got {dt}")));
            }
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(invalid("t_end", format!("must be nonnegative, got {}", self.t_end)));
        }
        if self.snapshot_every == 0 {
            return Err(invalid("snapshot_every", "must be at least 1"));
        }
        Ok(())
    }

    /// B as a real exponent.
    pub fn band(&self) -> T {
        T::from_int(self.velocity_band as i64)
    }

    /// The smaller of the Courant step (||grad V||_inf dt max|xi| = 0.1) and 1 / max Lambda,
    /// both over the dealiased band. The second bound resolves the oscillating forcing in the
    /// profile frame.
    pub fn courant_dt(&self, u: &FourierField<T>) -> T {
        let kmax = T::from_int(self.grid.dealias_cutoff()) * T::SQRT_2();
        let cap = self.params.lambda_radial(kmax).max(T::one()).recip();
        if !self.nonlinear {
            return cap;
        }
        let v = velocity(u, self);
        let [v1, v2] = v.gradient();
        let s1 = v1.synthesize();
        let s2 = v2.synthesize();
        let sup = s1
            .iter()
            .zip(&s2)
            .map(|(a, b)| (a.re * a.re + b.re * b.re).sqrt())
            .fold(T::zero(), T::max);
        if sup * kmax <= T::zero() {
            return cap;
        }
        (T::lit(COURANT_TARGET) / (sup * kmax)).min(cap)
    }
}

/// V = P_{<=B} Im U, restricted to the 2/3 band.
pub(crate) fn velocity<T: FftReal>(u: &FourierField<T>, cfg: &ModelConfig<T>) -> FourierField<T> {
    u.imag_part().lp_leq(cfg.band()).dealias()
}

/// One entry of the state ring buffer.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub t: f64,
    pub l2: f64,
    pub hn: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverState<T: FftReal> {
    pub t: T,
    pub u: FourierField<T>,
    pub l2_initial: T,
    pub diagnostics: VecDeque<Diagnostic>,
}

impl<T: FftReal> SolverState<T> {
    /// Starts at t = 0 from the dealiased initial data.
    pub fn new(initial: &FourierField<T>) -> Self {
        let u = initial.clone().forget_reality().dealias();
        let l2 = u.l2_norm();
        Self {
            t: T::zero(),
            u,
            l2_initial: l2,
            diagnostics: VecDeque::with_capacity(DIAGNOSTIC_CAPACITY),
        }
    }

    /// Profile u = e^{it Lambda} U.
    pub fn profile(&self, params: &DispersionParams<T>) -> FourierField<T> {
        self.u.apply_regular(&LinearFlow {
            params: *params,
            tau: -self.t,
        })
    }

    /// |‖U‖ - ‖U(0)‖| / ‖U(0)‖ in squared norms; 0 for zero data.
    pub fn relative_l2_drift(&self) -> T {
        let l = self.u.l2_norm();
        let l0 = self.l2_initial;
        if l0 == T::zero() {
            return l;
        }
        ((l * l - l0 * l0) / (l0 * l0)).abs()
    }

    pub(crate) fn record(&mut self, sobolev_index: T) {
        if self.diagnostics.len() == DIAGNOSTIC_CAPACITY {
            self.diagnostics.pop_front();
        }
        self.diagnostics.push_back(Diagnostic {
            t: self.t.as_f64(),
            l2: self.u.l2_norm().as_f64(),
            hn: self.u.sobolev_norm(sobolev_index).as_f64(),
        });
    }
}

/// Random data with sup |U| = 1: uniform complex coefficients under <xi>^{-decay}, zero mean,
/// restricted to the 2/3 band.
pub fn random_profile<T: FftReal>(grid: &Grid<T>, decay: T, seed: u64) -> FourierField<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = grid.dealias_cutoff();
    let f = FourierField::from_fn(grid, |xi| {
        let a = T::lit(rng.random::<f64>() - 0.5);
        let b = T::lit(rng.random::<f64>() - 0.5);
        if xi.is_zero() || xi.max_abs() > k {
            return Complex::new(T::zero(), T::zero());
        }
        let w = xi.bracket::<T>().powf(-decay);
        Complex::new(a * w, b * w)
    })
    .forget_reality();
    let s = f.sup_norm();
    f.scale(s.recip())
}
