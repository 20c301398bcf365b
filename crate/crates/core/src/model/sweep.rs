use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{run, ModelConfig};
use crate::error::{invalid, Result};
use crate::scalar::FftReal;
use crate::torus::FourierField;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Doubling time, or t_end when the run never doubled.
    pub doubling_time: f64,
    pub censored: bool,
    pub steps: usize,
    pub aborted: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// p in T ~ eps^{-p}, fitted on the uncensored rows.
    pub p_fit: Option<f64>,
    /// 95% t-interval for p.
    pub p_interval: Option<(f64, f64)>,
    pub any_censored: bool,
    /// T(eps) non-increasing in eps.
    pub monotone: bool,
    /// max eps / min eps >= 10.
    pub spans_decade: bool,
}

/// Runs eps * shape for every eps until doubling or t_end and fits log T against log eps.
pub fn lifespan_sweep<T: FftReal>(
    template: &ModelConfig<T>,
    shape: &FourierField<T>,
    epsilons: &[T],
) -> Result<SweepReport> {
    if epsilons.len() < 3 {
        return Err(invalid("epsilons", "need at least three amplitudes"));
    }
    if epsilons.iter().any(|e| !(*e > T::zero())) {
        return Err(invalid("epsilons", "amplitudes must be positive"));
    }
    template.validate()?;
    let runs: Vec<Result<SweepRow>> = epsilons
        .par_iter()
        .map(|&eps| {
            let mut cfg = template.clone();
            cfg.epsilon = eps;
            cfg.stop_at_doubling = true;
            cfg.keep_fields = false;
            cfg.snapshot_every = usize::MAX;
            let out = run(&cfg, &shape.scale(eps))?;
            let r = out.report;
            Ok(SweepRow {
                epsilon: eps.as_f64(),
                doubling_time: r.doubling_time.unwrap_or(cfg.t_end.as_f64()),
                censored: r.doubling_time.is_none(),
                steps: r.steps,
                aborted: r.aborted,
            })
        })
        .collect();
    let mut rows = runs.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));

    let monotone = rows.windows(2).all(|w| w[1].doubling_time <= w[0].doubling_time);
    let lo = rows.first().map(|r| r.epsilon).unwrap_or(1.0);
    let hi = rows.last().map(|r| r.epsilon).unwrap_or(1.0);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.censored)
        .map(|r| (r.epsilon.ln(), r.doubling_time.ln()))
        .collect();
    let (p_fit, p_interval) = fit_exponent(&pts);
    Ok(SweepReport {
        any_censored: rows.iter().any(|r| r.censored),
        rows,
        p_fit,
        p_interval,
        monotone,
        spans_decade: hi / lo >= 10.0 - 1e-9,
    })
}

fn fit_exponent(pts: &[(f64, f64)]) -> (Option<f64>, Option<(f64, f64)>) {
    let Some(slope) = crate::fit::linear_slope(pts) else {
        return (None, None);
    };
    let p = -slope;
    let n = pts.len();
    if n < 3 {
        return (Some(p), None);
    }
    let nf = n as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / nf;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    let sse: f64 = pts.iter().map(|q| (q.1 - my - slope * (q.0 - mx)).powi(2)).sum();
    let se = (sse / (nf - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, nf - 2.0)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN);
    (Some(p), Some((p - t * se, p + t * se)))
}

#[cfg(test)]
mod tests {
    use super::fit_exponent;

    #[test]
    fn exact_power_law_has_zero_width_band() {
        let pts: Vec<(f64, f64)> = [0.4f64, 0.2, 0.1].iter().map(|e| (e.ln(), (3.0 * e.powf(-1.5)).ln())).collect();
        let (p, band) = fit_exponent(&pts);
        assert!((p.unwrap() - 1.5).abs() < 1e-12);
        let (a, b) = band.unwrap();
        assert!((b - a).abs() < 1e-9);
    }
}
