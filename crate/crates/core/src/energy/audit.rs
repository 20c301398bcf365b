use num_complex::Complex;
use serde::Serialize;

use super::trilinear::pair_sums;
use super::{energy_en, EnergySymbol};
use crate::dispersion::{phase3, Sign};
use crate::error::{invalid, Error, Result};
use crate::model::{ModelConfig, RunOutput};
use crate::scalar::FftReal;
use crate::torus::{phi, phi_leq, Bracket, FourierField};

/// Snapshots may be at most this many solver steps apart.
pub const MAX_CADENCE_STEPS: f64 = 10.0;

/// Rates split by modulation and output frequency.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize)]
pub struct IncrementParts {
    /// |Phi| > 1
    #[serde(rename = "hiMod")]
    pub hi_mod: f64,
    /// |Phi| <= 1, |xi| > 2^D
    #[serde(rename = "loMod_hiFreq")]
    pub lo_mod_hi_freq: f64,
    /// |Phi| <= 1, |xi| <= 2^D
    #[serde(rename = "loMod_loFreq")]
    pub lo_mod_lo_freq: f64,
}

impl IncrementParts {
    pub fn total(&self) -> f64 {
        self.hi_mod + self.lo_mod_hi_freq + self.lo_mod_lo_freq
    }

    fn add_scaled(&mut self, o: &Self, s: f64) {
        self.hi_mod += s * o.hi_mod;
        self.lo_mod_hi_freq += s * o.lo_mod_hi_freq;
        self.lo_mod_lo_freq += s * o.lo_mod_lo_freq;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub t: f64,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    /// Five-point difference; absent within two snapshots of either end.
    #[serde(rename = "dE_dt_fd")]
    pub de_dt_fd: Option<f64>,
    #[serde(rename = "dE_dt_trilinear")]
    pub de_dt_trilinear: f64,
    pub parts: IncrementParts,
    #[serde(rename = "D")]
    pub d: i32,
    #[serde(rename = "N")]
    pub n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyAudit {
    pub n: f64,
    pub d: i32,
    pub c: f64,
    pub cadence: f64,
    pub records: Vec<AuditRecord>,
    /// Trapezoid integrals of the parts over the trajectory.
    pub accumulated: IncrementParts,
    /// max |fd - trilinear| / max |trilinear| over interior snapshots.
    pub max_relative_mismatch: f64,
    /// max |fd - trilinear| / |trilinear| over interior snapshots.
    pub max_pointwise_mismatch: f64,
}

/// W = <grad>^N U, V_+ = U / (2i), V_- = -conj U / (2i).
pub(crate) fn rates<T: FftReal>(u: &FourierField<T>, cfg: &ModelConfig<T>, d: i32) -> Result<IncrementParts> {
    if !cfg.nonlinear {
        return Ok(IncrementParts::default());
    }
    let n = cfg.sobolev_index;
    let sym = EnergySymbol::new(n).with_band(cfg.band());
    let w = u.apply_regular(&Bracket::new(n));
    let v_plus = u.scale_complex(Complex::new(T::zero(), -T::lit(0.5)));
    let v_minus = u.conj().scale_complex(Complex::new(T::zero(), T::lit(0.5)));
    let dd = T::from_int(d as i64);
    let mut out = IncrementParts::default();
    for (v, iota) in [(v_plus, Sign::Plus), (v_minus, Sign::Minus)] {
        let [hi, lohi, lolo] = pair_sums(&v, &w, &w, |xi, eta| {
            let m = sym.value(xi, eta);
            let p = phi(phase3(&cfg.params, [iota, Sign::Plus], xi, eta));
            let low = phi_leq(dd, xi.norm());
            let c = |x: T| Complex::new(x, T::zero());
            Ok([c(m * (T::one() - p)), c(m * p * (T::one() - low)), c(m * p * low)])
        })?;
        out.hi_mod += hi.re.as_f64();
        out.lo_mod_hi_freq += lohi.re.as_f64();
        out.lo_mod_lo_freq += lolo.re.as_f64();
    }
    Ok(out)
}

/// Finite-difference dE_N/dt against the trilinear identity on every `every`-th stored snapshot,
/// with the rate split at |Phi| = 1 (smoothly, through phi) and at |xi| = 2^D.
pub fn increment_audit<T: FftReal>(
    out: &RunOutput<T>,
    cfg: &ModelConfig<T>,
    d: i32,
    every: usize,
) -> Result<EnergyAudit> {
    if every == 0 {
        return Err(invalid("every", "must be at least 1"));
    }
    let traj = &out.trajectory;
    let fields: Vec<&FourierField<T>> = traj
        .iter()
        .map(|p| p.field.as_ref())
        .collect::<Option<_>>()
        .ok_or_else(|| invalid("trajectory", "the run did not keep fields"))?;
    let dt = out.report.dt;
    let cadence = if traj.len() > 1 { traj[1].t - traj[0].t } else { 0.0 };
    let allowed = MAX_CADENCE_STEPS * dt;
    for w in traj.windows(2) {
        let h = w[1].t - w[0].t;
        if h > allowed * (1.0 + 1e-12) {
            return Err(Error::CadenceTooCoarse { cadence: h, allowed });
        }
        if (h - cadence).abs() > 1e-9 * cadence.max(1e-300) {
            return Err(invalid("trajectory", "snapshots are not evenly spaced"));
        }
    }
    let n = cfg.sobolev_index;
    let energies: Vec<f64> = fields.iter().map(|u| energy_en(*u, n).as_f64()).collect();
    let mut records = Vec::with_capacity(traj.len());
    for (k, u) in fields.iter().enumerate().step_by(every) {
        let parts = rates(u, cfg, d)?;
        let fd = (k >= 2 && k + 2 < traj.len()).then(|| {
            (energies[k - 2] - 8.0 * energies[k - 1] + 8.0 * energies[k + 1] - energies[k + 2]) / (12.0 * cadence)
        });
        records.push(AuditRecord {
            t: traj[k].t,
            e_n: energies[k],
            de_dt_fd: fd,
            de_dt_trilinear: parts.total(),
            parts,
            d,
            n: n.as_f64(),
        });
    }
    let mut accumulated = IncrementParts::default();
    for w in records.windows(2) {
        let h = 0.5 * (w[1].t - w[0].t);
        accumulated.add_scaled(&w[0].parts, h);
        accumulated.add_scaled(&w[1].parts, h);
    }
    let scale = records.iter().map(|r| r.de_dt_trilinear.abs()).fold(0.0, f64::max);
    let mut max_rel = 0.0f64;
    let mut max_point = 0.0f64;
    for r in &records {
        if let Some(fd) = r.de_dt_fd {
            let e = (fd - r.de_dt_trilinear).abs();
            if scale > 0.0 {
                max_rel = max_rel.max(e / scale);
            } else {
                max_rel = max_rel.max(e);
            }
            if r.de_dt_trilinear != 0.0 {
                max_point = max_point.max(e / r.de_dt_trilinear.abs());
            }
        }
    }
    Ok(EnergyAudit {
        n: n.as_f64(),
        d,
        c: super::energy_constant::<f64>(),
        cadence,
        records,
        accumulated,
        max_relative_mismatch: max_rel,
        max_pointwise_mismatch: max_point,
    })
}
