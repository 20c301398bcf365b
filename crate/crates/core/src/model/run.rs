use serde::Serialize;

use super::{advance, linear_flow, ModelConfig, SolverState};
use crate::error::Result;
use crate::scalar::FftReal;
use crate::torus::FourierField;

/// One snapshot. The field is present only when the run keeps fields.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryPoint<T: FftReal> {
    pub t: f64,
    pub l2: f64,
    pub hn: f64,
    pub doubled: bool,
    #[serde(skip)]
    pub field: Option<FourierField<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub dt: f64,
    pub steps: usize,
    pub t_final: f64,
    pub l2_initial: f64,
    pub max_relative_l2_drift: f64,
    pub hn_initial: f64,
    pub max_hn_growth: f64,
    /// First step time with ||U||_{H^N} > 2 ||U(0)||_{H^N}.
    pub doubling_time: Option<f64>,
    pub courant_dt: f64,
    /// Reason when a non-finite step stopped the run.
    pub aborted: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutput<T: FftReal> {
    pub trajectory: Vec<TrajectoryPoint<T>>,
    pub report: ConservationReport,
    /// Last healthy state.
    pub final_state: SolverState<T>,
}

/// Integrates to t_end with a uniform step t_end / ceil(t_end / dt).
///
/// The zero mode has Lambda(0) = 0 and is left alone by the linear flow; no mean-zero condition
/// is imposed.
pub fn run<T: FftReal>(cfg: &ModelConfig<T>, initial: &FourierField<T>) -> Result<RunOutput<T>> {
    cfg.validate()?;
    let mut state = SolverState::new(initial);
    if state.u.grid() != &cfg.grid {
        return Err(crate::error::Error::GridMismatch {
            left: cfg.grid.size(),
            right: state.u.grid().size(),
        });
    }
    let u0 = state.u.clone();
    let courant = cfg.courant_dt(&state.u);
    let target = cfg.dt.unwrap_or(courant);
    let steps = if cfg.t_end == T::zero() {
        0
    } else {
        (cfg.t_end / target).ceil().to_usize().unwrap_or(usize::MAX).max(1)
    };
    let dt = if steps == 0 { target } else { cfg.t_end / T::from_usize(steps).unwrap() };
    let n = cfg.sobolev_index;
    let hn0 = state.u.sobolev_norm(n);
    state.record(n);

    let mut trajectory = Vec::new();
    let mut report = ConservationReport {
        dt: dt.as_f64(),
        steps: 0,
        t_final: 0.0,
        l2_initial: state.l2_initial.as_f64(),
        max_relative_l2_drift: 0.0,
        hn_initial: hn0.as_f64(),
        max_hn_growth: 1.0,
        doubling_time: None,
        courant_dt: courant.as_f64(),
        aborted: None,
    };
    let snap = |s: &SolverState<T>, hn: T, doubled: bool| TrajectoryPoint {
        t: s.t.as_f64(),
        l2: s.u.l2_norm().as_f64(),
        hn: hn.as_f64(),
        doubled,
        field: cfg.keep_fields.then(|| s.u.clone()),
    };
    trajectory.push(snap(&state, hn0, false));

    for k in 1..=steps {
        let t = dt * T::from_usize(k).unwrap();
        if cfg.nonlinear {
            let mut next = match advance(&state, dt, cfg) {
                Ok(s) => s,
                Err(e) => {
                    report.aborted = Some(e.to_string());
                    break;
                }
            };
            // Keep the time grid exact for finite differences.
            next.t = t;
            state = next;
        } else {
            // The linear flow is exact, so it is taken from the initial data to avoid accumulating rounding.
            state.u = linear_flow(&u0, &cfg.params, t);
            state.t = t;
            state.record(n);
        }
        report.steps = k;
        let hn = state.u.sobolev_norm(n);
        report.max_relative_l2_drift = report.max_relative_l2_drift.max(state.relative_l2_drift().as_f64());
        if hn0 > T::zero() {
            report.max_hn_growth = report.max_hn_growth.max((hn / hn0).as_f64());
        }
        let doubled = hn0 > T::zero() && hn > hn0 * T::lit(2.0);
        if doubled && report.doubling_time.is_none() {
            report.doubling_time = Some(state.t.as_f64());
        }
        let stop = doubled && cfg.stop_at_doubling;
        if k % cfg.snapshot_every == 0 || k == steps || stop {
            trajectory.push(snap(&state, hn, report.doubling_time.is_some()));
        }
        if stop {
            break;
        }
    }
    report.t_final = state.t.as_f64();
    Ok(RunOutput {
        trajectory,
        report,
        final_state: state,
    })
}
