use serde::Serialize;
use serde_json::{json, Map, Value};

use torwave::dispersion::{
    collinear_gap, exceptional_measure_bound, lemma1_profile, scan_four_wave, scan_three_wave_with, FourWaveOptions,
    ProfileTriple, ResonanceRecord, ScanBudget, ScanOptions, ScanWindow, ShellMinimum, ThreeWaveWeight, WeightParams,
};
use torwave::energy::{energy_constant, increment_audit};
use torwave::goodvariable::{expansion_check, good_variable_scaling, SurfaceState};
use torwave::model::{lifespan_sweep, random_profile, run, Integrator, ModelConfig, COURANT_TARGET};
use torwave::paradiff::{
    composition_residual, default_zeta_samples, paralin_remainder, weyl_apply, ParadiffConfig, Symbol, ZetaFn,
};
use torwave::torus::write_snapshot;
use torwave::{Field, Grid, LatticePoint, Params};

use crate::config::*;
use crate::error::CliError;
use crate::manifest::Artifacts;

/// What a subcommand leaves behind besides its files.
#[derive(Default)]
pub struct Outcome {
    pub knobs: Map<String, Value>,
    pub abort_reason: Option<String>,
}

impl Outcome {
    fn knob(&mut self, k: &str, v: impl Into<Value>) {
        self.knobs.insert(k.to_string(), v.into());
    }
}

fn params(g: f64, sigma: f64) -> Result<Params, CliError> {
    Ok(Params::new(g, sigma)?)
}

fn grid(size: usize) -> Result<Grid, CliError> {
    if size > 1024 {
        return Err(CliError::Resource(format!("grid side {size} exceeds 1024")));
    }
    Ok(Grid::new(size)?)
}

fn paradiff_cfg(chi: i32) -> Result<ParadiffConfig, CliError> {
    Ok(ParadiffConfig::new(chi)?)
}

fn integrator(name: &str) -> Result<Integrator, CliError> {
    serde_json::from_value(Value::String(name.to_string()))
        .map_err(|_| CliError::Config(format!("unknown integrator `{name}`")))
}

fn points(v: &[LatticePoint]) -> String {
    v.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct RecordRow {
    shell: u32,
    signs: String,
    frequencies: String,
    phase: f64,
    weight: f64,
    normalized_gap: f64,
    near_resonance: bool,
    in_regime: Option<bool>,
}

fn record_rows(records: &[ResonanceRecord]) -> Vec<RecordRow> {
    records
        .iter()
        .map(|r| RecordRow {
            shell: r.frequencies[0].shell(),
            signs: r.signs.to_string(),
            frequencies: points(&r.frequencies),
            phase: r.phase_value,
            weight: r.weight,
            normalized_gap: r.normalized_gap,
            near_resonance: r.near_resonance,
            in_regime: r.in_regime,
        })
        .collect()
}

fn scan_opts(keep: u64, max_evaluations: u64, near: f64) -> ScanOptions {
    ScanOptions {
        keep,
        budget: ScanBudget {
            max_evaluations,
            ..ScanBudget::default()
        },
        near_resonance_threshold: near,
    }
}

pub fn scan3(c: &Scan3Config, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let p = params(c.g, c.sigma)?;
    let weight = match c.weight.as_str() {
        "kappa" => ThreeWaveWeight::Kappa { kappa: c.kappa },
        "heuristic" => ThreeWaveWeight::Heuristic { kappa: c.kappa },
        "high-bracket" => ThreeWaveWeight::HighBracket { exponent: c.exponent },
        w => return Err(CliError::Config(format!("unknown weight `{w}`"))),
    };
    let window = ScanWindow::new(c.max_high, c.max_low, c.shell_mode)?;
    let scan = scan_three_wave_with(&p, weight, &window, &scan_opts(c.keep, c.max_evaluations, c.near_threshold))?;
    out.csv("records.csv", &record_rows(&scan.records), None)?;
    out.csv::<ShellMinimum>("shells.csv", &scan.shell_minima, None)?;
    out.json(
        "summary.json",
        &json!({
            "min_normalized_gap": scan.min_normalized_gap,
            "argmin": scan.argmin,
            "evaluations": scan.evaluations,
            "near_resonances": scan.near_resonances,
            "weight": scan.weight,
        }),
    )?;
    let mut o = Outcome::default();
    o.knob("near_resonance_threshold", c.near_threshold);
    Ok(o)
}

pub fn scan4(c: &Scan4Config, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let p = params(c.g, c.sigma)?;
    let window = ScanWindow::new(c.max_high, c.max_low, c.shell_mode)?;
    let opts = FourWaveOptions {
        scan: scan_opts(c.keep, c.max_evaluations, c.near_threshold),
        regime_constant: c.regime_constant,
        plain_weight: c.plain_weight,
    };
    let scan = scan_four_wave(&p, &window, &opts)?;
    out.csv("records.csv", &record_rows(&scan.records), None)?;
    out.csv::<ShellMinimum>("shells.csv", &scan.shell_minima, None)?;
    out.json(
        "summary.json",
        &json!({
            "min_normalized_gap": scan.min_normalized_gap,
            "min_in_regime": scan.min_in_regime,
            "argmin": scan.argmin,
            "evaluations": scan.evaluations,
            "excluded_trivial": scan.excluded_trivial,
            "near_resonances": scan.near_resonances,
        }),
    )?;
    let mut o = Outcome::default();
    o.knob("near_resonance_threshold", c.near_threshold);
    o.knob("modulation_combination", "max");
    Ok(o)
}

pub fn collinear(c: &CollinearConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Row {
        eta_x: i64,
        eta_y: i64,
        gap: f64,
        normalized_gap: f64,
    }
    let p = params(c.g, c.sigma)?;
    let rows: Vec<Row> = collinear_gap(&p, LatticePoint::new(c.xi_x, c.xi_y))?
        .into_iter()
        .map(|e| Row {
            eta_x: e.eta.x,
            eta_y: e.eta.y,
            gap: e.gap,
            normalized_gap: e.normalized_gap,
        })
        .collect();
    out.csv("collinear.csv", &rows, None)?;
    Ok(Outcome::default())
}

pub fn lemma1(c: &Lemma1Config, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let t = ProfileTriple::new(c.a, c.b, c.c)?;
    let rep = lemma1_profile(&t, c.big_b, c.delta)?;
    out.json("profile.json", &rep)?;
    Ok(Outcome::default())
}

pub fn measure(c: &MeasureConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Row {
        j: i32,
        total: f64,
        contributing_pairs: u64,
        pairs_scanned: u64,
        ratio_to_previous: Option<f64>,
    }
    if c.j_max < c.j_min {
        return Err(CliError::Config("j_max must be at least j_min".into()));
    }
    let wp = WeightParams::new(c.kappa)?;
    let mut rows: Vec<Row> = Vec::new();
    for j in c.j_min..=c.j_max {
        let b = exceptional_measure_bound(c.big_b, j, &wp, c.cutoff, c.max_pairs)?;
        let ratio = rows.last().map(|r| b.total / r.total);
        rows.push(Row {
            j,
            total: b.total,
            contributing_pairs: b.contributing_pairs,
            pairs_scanned: b.pairs_scanned,
            ratio_to_previous: ratio,
        });
    }
    out.csv("measure.csv", &rows, None)?;
    Ok(Outcome::default())
}

pub fn paradiff_audit(c: &ParadiffAuditConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let g = grid(c.grid)?;
    let cfg = paradiff_cfg(c.chi_exponent)?;
    let coef = Field::from_spatial_real(&g, |x, y| 1.0 + 0.3 * x.cos() + 0.2 * (x + 2.0 * y).sin());
    let mut composition = Vec::new();
    for (l1, l2) in [(1.0, 0.5), (0.5, 0.5), (1.5, 0.0), (0.0, 0.0)] {
        let a = Symbol::product(&coef, ZetaFn::abs_power(l1), l1);
        let b = Symbol::product(&coef, ZetaFn::abs_power(l2), l2);
        let m = Symbol::multiplier(l1, ZetaFn::abs_power(l1));
        for (name, a) in [("c(x)|zeta|^l1", a), ("|zeta|^l1", m)] {
            let r = composition_residual(&a, &b, l1, l2, &c.bands, &g, &cfg, c.seed)?;
            composition.push(json!({ "a": name, "b": "c(x)|zeta|^l2", "report": r }));
        }
    }
    let q = Field::from_spatial_real(&g, |x, _| 1.0 / (2.0 + x.cos()));
    let f = Symbol::function(&q);
    let r = composition_residual(&f, &f, 0.0, 0.0, &c.bands, &g, &cfg, c.seed)?;
    composition.push(json!({ "a": "1/(2+cos x1)", "b": "1/(2+cos x1)", "report": r }));

    let u = random_profile(&g, 1.0, c.seed);
    let v = random_profile(&g, 1.0, c.seed + 1);
    let real = Symbol::product(&coef, ZetaFn::angular(0, 1), 0.0).add(&Symbol::function(&coef));
    let l = weyl_apply(&real, &u, &cfg)?.inner(&v);
    let rr = u.inner(&weyl_apply(&real, &v, &cfg)?);
    let adjoint_defect = (l - rr).norm() / l.norm().max(1.0);
    let conj_lhs = weyl_apply(&real, &u, &cfg)?.conj();
    let conj_rhs = weyl_apply(&real.conj_reflect(), &u.conj(), &cfg)?;
    let conj_defect = conj_lhs.minus(&conj_rhs).l2_norm() / conj_lhs.l2_norm().max(1.0);
    let (ur, vr) = (u.real_part(), v.real_part());
    let h1 = paralin_remainder(&ur, &vr, &cfg)?;
    let h2 = paralin_remainder(&vr, &ur, &cfg)?;
    let paralin_symmetry = h1.minus(&h2).l2_norm() / h1.l2_norm().max(1.0);
    out.json(
        "audit.json",
        &json!({
            "composition": composition,
            "adjoint_defect": adjoint_defect,
            "conjugation_defect": conj_defect,
            "paralin_symmetry_defect": paralin_symmetry,
        }),
    )?;
    let mut o = Outcome::default();
    o.knob("chi_exponent", c.chi_exponent);
    Ok(o)
}

pub fn symbols(c: &SymbolsConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let g = grid(c.grid)?;
    let p = params(c.g, c.sigma)?;
    let cfg = paradiff_cfg(c.chi_exponent)?;
    let h = random_profile(&g, 4.0, c.seed).real_part().scale(0.1);
    let w = random_profile(&g, 4.0, c.seed + 1).real_part().scale(0.2);
    let base = SurfaceState::new(h, w, p)?;
    let samples = default_zeta_samples::<f64>(4.0, 2);
    let expansions = expansion_check(&base, &c.epsilons, &samples, 1, &cfg)?;
    let scaling = good_variable_scaling(&base, &c.epsilons, c.sobolev_index, &cfg)?;
    out.json("expansions.json", &expansions)?;
    out.json("good_variable.json", &scaling)?;
    let mut o = Outcome::default();
    o.knob("chi_exponent", c.chi_exponent);
    o.knob("symbol_norm_regularity", 1);
    Ok(o)
}

struct ModelInputs<'a> {
    g: f64,
    grid: usize,
    epsilon: f64,
    t_end: f64,
    dt: f64,
    integrator: &'a str,
    velocity_band: u32,
    sobolev_index: f64,
}

fn model_config(m: &ModelInputs<'_>) -> Result<ModelConfig<f64>, CliError> {
    let mut cfg = ModelConfig::new(m.g, grid(m.grid)?, m.epsilon, m.t_end)?;
    cfg.dt = (m.dt > 0.0).then_some(m.dt);
    cfg.integrator = integrator(m.integrator)?;
    cfg.velocity_band = m.velocity_band;
    cfg.sobolev_index = m.sobolev_index;
    Ok(cfg)
}

fn model_knobs(o: &mut Outcome, cfg: &ModelConfig<f64>) {
    o.knob("sobolev_index", cfg.sobolev_index);
    o.knob("velocity_band", cfg.velocity_band);
    o.knob("dealias_fraction", cfg.grid.dealias_fraction());
    o.knob("courant_target", COURANT_TARGET);
    o.knob("dt_cap", "1 / Lambda(sqrt(2) * dealias cutoff)");
    o.knob("energy_constant", energy_constant::<f64>());
    o.knob("initial_data", "uniform random coefficients times <xi>^-decay, zero mean, sup norm epsilon");
    o.knob("fourier_convention", "f^(xi) = integral f e^{-i xi.x}");
}

pub fn simulate(c: &SimulateConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let mut cfg = model_config(&ModelInputs {
        g: c.g,
        grid: c.grid,
        epsilon: c.epsilon,
        t_end: c.t_end,
        dt: c.dt,
        integrator: &c.integrator,
        velocity_band: c.velocity_band,
        sobolev_index: c.sobolev_index,
    })?;
    cfg.snapshot_every = c.snapshot_every;
    cfg.nonlinear = c.nonlinear;
    cfg.stop_at_doubling = c.stop_at_doubling;
    let u0 = random_profile(&cfg.grid, c.decay, c.seed).scale(c.epsilon);
    let res = run(&cfg, &u0)?;
    let mut lines = Vec::new();
    for p in &res.trajectory {
        serde_json::to_writer(&mut lines, p)?;
        lines.push(b'\n');
    }
    out.write("trajectory.jsonl", &lines)?;
    out.json("report.json", &res.report)?;
    let mut snap = Vec::new();
    write_snapshot(&res.final_state.u, "U", res.report.t_final, &mut snap)?;
    out.write("final_state.csv", &snap)?;
    let mut o = Outcome::default();
    model_knobs(&mut o, &cfg);
    o.abort_reason = res.report.aborted.clone();
    Ok(o)
}

#[derive(Serialize)]
struct SweepCsvRow {
    epsilon: f64,
    doubling_time: f64,
    censored: bool,
    steps: usize,
    aborted: Option<String>,
}

pub fn sweep(c: &SweepConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    let cfg = model_config(&ModelInputs {
        g: c.g,
        grid: c.grid,
        epsilon: c.epsilons.first().copied().unwrap_or(1.0),
        t_end: c.t_end,
        dt: c.dt,
        integrator: &c.integrator,
        velocity_band: c.velocity_band,
        sobolev_index: c.sobolev_index,
    })?;
    let shape = random_profile(&cfg.grid, c.decay, c.seed);
    let rep = lifespan_sweep(&cfg, &shape, &c.epsilons)?;
    let rows: Vec<SweepCsvRow> = rep
        .rows
        .iter()
        .map(|r| SweepCsvRow {
            epsilon: r.epsilon,
            doubling_time: r.doubling_time,
            censored: r.censored,
            steps: r.steps,
            aborted: r.aborted.clone(),
        })
        .collect();
    let footer = match (rep.p_fit, rep.p_interval) {
        (Some(p), Some((lo, hi))) => format!("# p_fit={p} p_interval=[{lo},{hi}]"),
        (Some(p), None) => format!("# p_fit={p}"),
        _ => "# p_fit=none".to_string(),
    };
    out.csv("sweep.csv", &rows, Some(&footer))?;
    out.json("report.json", &rep)?;
    let mut o = Outcome::default();
    model_knobs(&mut o, &cfg);
    o.knob("doubling_threshold", 2.0);
    o.abort_reason = rep.rows.iter().find_map(|r| r.aborted.clone());
    Ok(o)
}

pub fn energy_audit(c: &EnergyAuditConfig, out: &mut Artifacts) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct Row {
        t: f64,
        #[serde(rename = "E_N")]
        e_n: f64,
        #[serde(rename = "dE_dt_fd")]
        fd: Option<f64>,
        #[serde(rename = "dE_dt_trilinear")]
        tri: f64,
        #[serde(rename = "hiMod")]
        hi: f64,
        #[serde(rename = "loMod_hiFreq")]
        lohi: f64,
        #[serde(rename = "loMod_loFreq")]
        lolo: f64,
        #[serde(rename = "D")]
        d: i32,
        #[serde(rename = "N")]
        n: f64,
    }
    let mut cfg = model_config(&ModelInputs {
        g: c.g,
        grid: c.grid,
        epsilon: c.epsilon,
        t_end: c.t_end,
        dt: c.dt,
        integrator: &c.integrator,
        velocity_band: c.velocity_band,
        sobolev_index: c.sobolev_index,
    })?;
    cfg.keep_fields = true;
    cfg.snapshot_every = 1;
    let u0 = random_profile(&cfg.grid, c.decay, c.seed).scale(c.epsilon);
    let res = run(&cfg, &u0)?;
    out.json("report.json", &res.report)?;
    let mut o = Outcome::default();
    model_knobs(&mut o, &cfg);
    o.knob("frequency_split_D", c.split);
    o.knob("modulation_split", "smooth phi(Phi) at |Phi| = 1");
    o.knob("mismatch_normalization", "max |trilinear| over interior snapshots");
    o.knob("finite_difference", "five-point central");
    if let Some(reason) = res.report.aborted.clone() {
        o.abort_reason = Some(reason);
        return Ok(o);
    }
    let audit = increment_audit(&res, &cfg, c.split, c.every)?;
    let rows: Vec<Row> = audit
        .records
        .iter()
        .map(|r| Row {
            t: r.t,
            e_n: r.e_n,
            fd: r.de_dt_fd,
            tri: r.de_dt_trilinear,
            hi: r.parts.hi_mod,
            lohi: r.parts.lo_mod_hi_freq,
            lolo: r.parts.lo_mod_lo_freq,
            d: r.d,
            n: r.n,
        })
        .collect();
    out.csv("audit.csv", &rows, None)?;
    out.json(
        "audit.json",
        &json!({
            "N": audit.n,
            "D": audit.d,
            "c": audit.c,
            "cadence": audit.cadence,
            "accumulated": audit.accumulated,
            "max_relative_mismatch": audit.max_relative_mismatch,
            "max_pointwise_mismatch": audit.max_pointwise_mismatch,
        }),
    )?;
    Ok(o)
}
