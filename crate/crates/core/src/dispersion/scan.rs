use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phase3, weight_k_unchecked, DispersionParams, Sign, SignPattern, WeightParams};
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::{Extended, Real};

const CHUNK: usize = 128;

/// Enumeration box for a census.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanWindow {
    pub max_high_freq: i64,
    pub max_low_freq: i64,
    #[serde(default)]
    pub shell_mode: bool,
}

impl ScanWindow {
    pub fn new(max_high_freq: i64, max_low_freq: i64, shell_mode: bool) -> Result<Self> {
        let w = Self {
            max_high_freq,
            max_low_freq,
            shell_mode,
        };
        w.validate()?;
        Ok(w)
    }

    /// A window with `max_high_freq < 1` is valid and empty.
    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        if self.max_low_freq < 1 {
            return Err(invalid("max_low_freq", "must be at least 1"));
        }
        if self.max_low_freq > self.max_high_freq {
            return Err(invalid(
                "max_low_freq",
                format!("{} exceeds max_high_freq {}", self.max_low_freq, self.max_high_freq),
            ));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.max_high_freq < 1
    }
}

/// Limits on work and retained output.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBudget {
    pub max_evaluations: u64,
    pub max_records: u64,
}

impl Default for ScanBudget {
    fn default() -> Self {
        Self {
            max_evaluations: 200_000_000_000,
            max_records: 2_000_000,
        }
    }
}

/// Shared census options.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Number of smallest records retained.
    pub keep: u64,
    pub budget: ScanBudget,
    /// Phases below this are re-evaluated in double-double arithmetic.
    pub near_resonance_threshold: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            keep: 32,
            budget: ScanBudget::default(),
            near_resonance_threshold: 1e-9,
        }
    }
}

/// Normalization used by the three-wave census.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThreeWaveWeight {
    /// K_kappa on the symmetric triple.
    Kappa { kappa: f64 },
    /// <xi>^{-3/2} log(2 + |xi|)^{-(1+kappa)} <xi - eta>^{-4}.
    Heuristic { kappa: f64 },
    /// <xi>^{-exponent}.
    HighBracket { exponent: f64 },
}

impl ThreeWaveWeight {
    fn validate(&self) -> Result<()> {
        match *self {
            ThreeWaveWeight::Kappa { kappa } | ThreeWaveWeight::Heuristic { kappa } => {
                WeightParams::new(kappa).map(|_| ())
            }
            ThreeWaveWeight::HighBracket { exponent } if exponent.is_finite() => Ok(()),
            ThreeWaveWeight::HighBracket { .. } => Err(invalid("exponent", "must be finite")),
        }
    }

    fn eval<T: Real>(&self, xi: LatticePoint, eta: LatticePoint) -> T {
        match *self {
            ThreeWaveWeight::Kappa { kappa } => {
                weight_k_unchecked(&WeightParams { kappa }, xi, eta - xi, -eta)
            }
            ThreeWaveWeight::Heuristic { kappa } => {
                let b: T = xi.bracket();
                let l = (T::lit(2.0) + xi.norm::<T>()).ln();
                let d: T = (xi - eta).bracket();
                b.powf(T::lit(-1.5)) * l.powf(-T::lit(1.0 + kappa)) * d.powi(-4)
            }
            ThreeWaveWeight::HighBracket { exponent } => {
                let b: T = xi.bracket();
                b.powf(-T::lit(exponent))
            }
        }
    }
}

/// One evaluated frequency tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRecord {
    pub signs: SignPattern,
    pub frequencies: Vec<LatticePoint>,
    pub phase_value: f64,
    pub weight: f64,
    pub normalized_gap: f64,
    /// The phase fell below the re-evaluation threshold.
    pub near_resonance: bool,
    /// The two modulations of a four-wave record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulations: Option<[f64; 2]>,
    /// Whether the four-wave regime condition holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_regime: Option<bool>,
}

impl ResonanceRecord {
    fn key(&self) -> (u32, &[LatticePoint], &SignPattern) {
        (self.frequencies[0].shell(), &self.frequencies, &self.signs)
    }

    /// Output order: dyadic shell of the first frequency, then frequencies, then signs.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }

    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.normalized_gap
            .total_cmp(&other.normalized_gap)
            .then_with(|| self.lex_cmp(other))
    }
}

/// Heap entry ordered by (gap, lexicographic key).
struct Ranked(ResonanceRecord);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

/// Bounded set of the smallest records.
struct TopK {
    keep: usize,
    heap: BinaryHeap<Ranked>,
}

impl TopK {
    fn new(keep: usize) -> Self {
        Self {
            keep,
            heap: BinaryHeap::new(),
        }
    }

    /// Cheap rejection before a record is materialized.
    #[inline]
    fn admits(&self, gap: f64) -> bool {
        if self.keep == 0 {
            return false;
        }
        if self.heap.len() < self.keep {
            return true;
        }
        let worst = self.heap.peek().map(|r| r.0.normalized_gap).unwrap_or(f64::INFINITY);
        gap <= worst
    }

    fn push(&mut self, r: ResonanceRecord) {
        if self.keep == 0 {
            return;
        }
        self.heap.push(Ranked(r));
        if self.heap.len() > self.keep {
            self.heap.pop();
        }
    }

    fn merge(&mut self, other: TopK) {
        for r in other.heap {
            self.push(r.0);
        }
    }

    fn into_sorted(self) -> Vec<ResonanceRecord> {
        let mut v: Vec<_> = self.heap.into_iter().map(|r| r.0).collect();
        v.sort_by(|a, b| a.lex_cmp(b));
        v
    }
}

/// Minimum of the normalized gap over one dyadic shell of |xi| (or |v|).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellMinimum {
    /// Shell k covers 2^{k-1} < |xi| <= 2^k.
    pub shell: u32,
    pub min_normalized_gap: f64,
    pub evaluations: u64,
}

/// Result of the three-wave census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeWaveScan {
    pub records: Vec<ResonanceRecord>,
    pub min_normalized_gap: Option<f64>,
    pub argmin: Option<ResonanceRecord>,
    pub evaluations: u64,
    pub near_resonances: u64,
    pub shell_minima: Vec<ShellMinimum>,
    pub weight: ThreeWaveWeight,
}

struct Partial {
    top: TopK,
    best: Option<ResonanceRecord>,
    evaluations: u64,
    near: u64,
    shells: BTreeMap<u32, (f64, u64)>,
}

impl Partial {
    fn new(keep: usize) -> Self {
        Self {
            top: TopK::new(keep),
            best: None,
            evaluations: 0,
            near: 0,
            shells: BTreeMap::new(),
        }
    }

    fn merge(&mut self, o: Partial) {
        self.top.merge(o.top);
        self.evaluations += o.evaluations;
        self.near += o.near;
        if let Some(b) = o.best {
            self.offer_best(b);
        }
        for (k, (m, n)) in o.shells {
            let e = self.shells.entry(k).or_insert((f64::INFINITY, 0));
            e.0 = e.0.min(m);
            e.1 += n;
        }
    }

    fn offer_best(&mut self, r: ResonanceRecord) {
        let better = match &self.best {
            None => true,
            Some(b) => r.rank_cmp(b) == Ordering::Less,
        };
        if better {
            self.best = Some(r);
        }
    }

    #[inline]
    fn note_shell(&mut self, shell: u32, gap: f64) {
        let e = self.shells.entry(shell).or_insert((f64::INFINITY, 0));
        e.0 = e.0.min(gap);
        e.1 += 1;
    }

    fn shell_minima(&self) -> Vec<ShellMinimum> {
        self.shells
            .iter()
            .map(|(&shell, &(m, n))| ShellMinimum {
                shell,
                min_normalized_gap: m,
                evaluations: n,
            })
            .collect()
    }
}

fn high_points(window: &ScanWindow) -> Vec<LatticePoint> {
    let mut pts = LatticePoint::disk(window.max_high_freq);
    pts.sort_by_key(|p| (p.shell(), *p));
    pts
}

fn check_budget(evals: u64, opts: &ScanOptions) -> Result<()> {
    if evals > opts.budget.max_evaluations {
        return Err(Error::ResourceBudget {
            what: "phase evaluations",
            requested: evals,
            budget: opts.budget.max_evaluations,
        });
    }
    let retained = opts.keep.min(evals);
    if retained > opts.budget.max_records {
        return Err(Error::ResourceBudget {
            what: "retained records",
            requested: retained,
            budget: opts.budget.max_records,
        });
    }
    Ok(())
}

/// Re-evaluates a three-wave phase in double-double arithmetic.
fn phase3_extended<T: Real>(p: &DispersionParams<T>, s: [Sign; 2], xi: LatticePoint, eta: LatticePoint) -> f64 {
    let pe: DispersionParams<Extended> = p.cast();
    phase3(&pe, s, xi, eta).as_f64()
}

/// Three-wave census normalized by K_kappa.
pub fn scan_three_wave<T: Real>(
    params: &DispersionParams<T>,
    wp: &WeightParams,
    window: &ScanWindow,
    opts: &ScanOptions,
) -> Result<ThreeWaveScan> {
    scan_three_wave_with(params, ThreeWaveWeight::Kappa { kappa: wp.kappa() }, window, opts)
}

/// Three-wave census over 1 <= |xi| <= max_high, 1 <= |xi - eta| <= max_low, eta != 0,
/// and all four sign pairs.
pub fn scan_three_wave_with<T: Real>(
    params: &DispersionParams<T>,
    weight: ThreeWaveWeight,
    window: &ScanWindow,
    opts: &ScanOptions,
) -> Result<ThreeWaveScan> {
    window.validate()?;
    weight.validate()?;
    if window.is_empty() {
        return Ok(ThreeWaveScan {
            records: Vec::new(),
            min_normalized_gap: None,
            argmin: None,
            evaluations: 0,
            near_resonances: 0,
            shell_minima: Vec::new(),
            weight,
        });
    }
    let highs = high_points(window);
    let lows = LatticePoint::disk(window.max_low_freq);
    let evals = highs.len() as u64 * lows.len() as u64 * 4;
    check_budget(evals, opts)?;
    let keep = opts.keep.min(evals) as usize;
    let lam_low: Vec<T> = lows.iter().map(|&d| params.lambda(d)).collect();
    let thr = opts.near_resonance_threshold;
    let signs_all = [
        [Sign::Plus, Sign::Plus],
        [Sign::Plus, Sign::Minus],
        [Sign::Minus, Sign::Plus],
        [Sign::Minus, Sign::Minus],
    ];

    let partials: Vec<Partial> = highs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut part = Partial::new(keep);
            for &xi in chunk {
                let shell = xi.shell();
                let lx = params.lambda(xi);
                for (&d, &ld) in lows.iter().zip(&lam_low) {
                    let eta = xi - d;
                    if eta.is_zero() {
                        continue;
                    }
                    let le = params.lambda(eta);
                    let w: T = weight.eval(xi, eta);
                    let wf = w.as_f64();
                    for s in signs_all {
                        let phi = lx - s[0].value::<T>() * ld - s[1].value::<T>() * le;
                        let mut pv = phi.as_f64();
                        let near = pv.abs() < thr;
                        if near {
                            pv = phase3_extended(params, s, xi, eta);
                            part.near += 1;
                        }
                        let gap = pv.abs() / wf;
                        part.evaluations += 1;
                        part.note_shell(shell, gap);
                        let in_top = part.top.admits(gap);
                        let is_best = part.best.as_ref().map_or(true, |b| gap <= b.normalized_gap);
                        if in_top || is_best {
                            let rec = ResonanceRecord {
                                signs: SignPattern(s.to_vec()),
                                frequencies: vec![xi, eta],
                                phase_value: pv,
                                weight: wf,
                                normalized_gap: gap,
                                near_resonance: near,
                                modulations: None,
                                in_regime: None,
                            };
                            if is_best {
                                part.offer_best(rec.clone());
                            }
                            if in_top {
                                part.top.push(rec);
                            }
                        }
                    }
                }
            }
            part
        })
        .collect();

    let mut total = Partial::new(keep);
    for p in partials {
        total.merge(p);
    }
    let shell_minima = if window.shell_mode { total.shell_minima() } else { Vec::new() };
    Ok(ThreeWaveScan {
        min_normalized_gap: total.best.as_ref().map(|b| b.normalized_gap),
        argmin: total.best,
        evaluations: total.evaluations,
        near_resonances: total.near,
        shell_minima,
        records: total.top.into_sorted(),
        weight,
    })
}

/// Options specific to the four-wave census.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourWaveOptions {
    pub scan: ScanOptions,
    /// Constant b' in the regime flag (|xi| + |eta|)^16 <= b' |v|.
    pub regime_constant: f64,
    /// Use |v|^{-1/2} (|xi| + |eta|)^{-2} instead of the bracketed weight.
    pub plain_weight: bool,
}

impl Default for FourWaveOptions {
    fn default() -> Self {
        Self {
            scan: ScanOptions::default(),
            regime_constant: 1.0,
            plain_weight: false,
        }
    }
}

/// Result of the four-wave census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourWaveScan {
    pub records: Vec<ResonanceRecord>,
    /// Empirical b'.
    pub min_normalized_gap: Option<f64>,
    pub argmin: Option<ResonanceRecord>,
    pub evaluations: u64,
    /// Diagonal pairs (xi, i1) = (eta, i2) skipped.
    pub excluded_trivial: u64,
    pub near_resonances: u64,
    pub shell_minima: Vec<ShellMinimum>,
    /// Minimum restricted to tuples satisfying the regime flag.
    pub min_in_regime: Option<f64>,
}

/// Four-wave census over 1 <= |v| <= max_high and 1 <= |xi|, |eta| <= max_low: records the
/// larger of |Lambda(v+mu) - Lambda(v) - i Lambda(mu)| for mu in {xi, eta} against
/// <v>^{-1/2} (<xi> + <eta>)^{-2}.
pub fn scan_four_wave<T: Real>(
    params: &DispersionParams<T>,
    window: &ScanWindow,
    opts: &FourWaveOptions,
) -> Result<FourWaveScan> {
    window.validate()?;
    if !(opts.regime_constant > 0.0) {
        return Err(invalid("regime_constant", "must be positive"));
    }
    if window.is_empty() {
        return Ok(FourWaveScan {
            records: Vec::new(),
            min_normalized_gap: None,
            argmin: None,
            evaluations: 0,
            excluded_trivial: 0,
            near_resonances: 0,
            shell_minima: Vec::new(),
            min_in_regime: None,
        });
    }
    let highs = high_points(window);
    let smalls: Vec<(LatticePoint, Sign)> = LatticePoint::disk(window.max_low_freq)
        .into_iter()
        .flat_map(|m| Sign::BOTH.into_iter().map(move |s| (m, s)))
        .collect();
    let ns = smalls.len() as u64;
    let evals = highs.len() as u64 * ns * (ns - 1);
    check_budget(evals, &opts.scan)?;
    let keep = opts.scan.keep.min(evals) as usize;
    let thr = opts.scan.near_resonance_threshold;
    let lam_small: Vec<T> = smalls.iter().map(|&(m, _)| params.lambda(m)).collect();
    let br_small: Vec<f64> = smalls
        .iter()
        .map(|&(m, _)| if opts.plain_weight { m.norm::<f64>() } else { m.bracket::<f64>() })
        .collect();
    let norm_small: Vec<f64> = smalls.iter().map(|&(m, _)| m.norm::<f64>()).collect();

    struct FourPartial {
        base: Partial,
        regime_min: f64,
    }

    let partials: Vec<FourPartial> = highs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut part = FourPartial {
                base: Partial::new(keep),
                regime_min: f64::INFINITY,
            };
            let mut mods = vec![0f64; smalls.len()];
            let mut near = vec![false; smalls.len()];
            for &v in chunk {
                let shell = v.shell();
                let lv = params.lambda(v);
                for (i, &(mu, s)) in smalls.iter().enumerate() {
                    let m = params.lambda(v + mu) - lv - s.value::<T>() * lam_small[i];
                    let mut mf = m.as_f64();
                    near[i] = mf.abs() < thr;
                    if near[i] {
                        let pe: DispersionParams<Extended> = params.cast();
                        let me = pe.lambda(v + mu) - pe.lambda(v) - s.value::<Extended>() * pe.lambda(mu);
                        mf = me.as_f64();
                    }
                    mods[i] = mf;
                }
                let vb = if opts.plain_weight { v.norm::<f64>() } else { v.bracket::<f64>() };
                let vw = vb.powf(-0.5);
                let vn = v.norm::<f64>();
                for a in 0..smalls.len() {
                    for b in 0..smalls.len() {
                        if a == b {
                            continue;
                        }
                        let big = if mods[a].abs() >= mods[b].abs() { mods[a] } else { mods[b] };
                        let w = vw * (br_small[a] + br_small[b]).powi(-2);
                        let gap = big.abs() / w;
                        let regime = (norm_small[a] + norm_small[b]).powi(16) <= opts.regime_constant * vn;
                        part.base.evaluations += 1;
                        if near[a] || near[b] {
                            part.base.near += 1;
                        }
                        part.base.note_shell(shell, gap);
                        if regime {
                            part.regime_min = part.regime_min.min(gap);
                        }
                        let in_top = part.base.top.admits(gap);
                        let is_best = part.base.best.as_ref().map_or(true, |r| gap <= r.normalized_gap);
                        if in_top || is_best {
                            let rec = ResonanceRecord {
                                signs: SignPattern(vec![smalls[a].1, smalls[b].1]),
                                frequencies: vec![v, smalls[a].0, smalls[b].0],
                                phase_value: big,
                                weight: w,
                                normalized_gap: gap,
                                near_resonance: near[a] || near[b],
                                modulations: Some([mods[a], mods[b]]),
                                in_regime: Some(regime),
                            };
                            if is_best {
                                part.base.offer_best(rec.clone());
                            }
                            if in_top {
                                part.base.top.push(rec);
                            }
                        }
                    }
                }
            }
            part
        })
        .collect();

    let mut total = Partial::new(keep);
    let mut regime_min = f64::INFINITY;
    for p in partials {
        regime_min = regime_min.min(p.regime_min);
        total.merge(p.base);
    }
    let shell_minima = if window.shell_mode { total.shell_minima() } else { Vec::new() };
    Ok(FourWaveScan {
        min_normalized_gap: total.best.as_ref().map(|b| b.normalized_gap),
        argmin: total.best,
        evaluations: total.evaluations,
        excluded_trivial: highs.len() as u64 * ns,
        near_resonances: total.near,
        shell_minima,
        min_in_regime: regime_min.is_finite().then_some(regime_min),
        records: total.top.into_sorted(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{psi3, weight_k};

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn all_opts() -> ScanOptions {
        ScanOptions {
            keep: u64::MAX,
            ..ScanOptions::default()
        }
    }

    #[test]
    fn contains_closed_form_entry() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(8, 1, false).unwrap();
        let scan = scan_three_wave(&p, &wp, &w, &all_opts()).unwrap();
        // Symmetric pattern (+,-,-) is the phase (+,+).
        let rec = scan
            .records
            .iter()
            .find(|r| r.frequencies == vec![lp(2, 0), lp(1, 0)] && r.signs.to_string() == "++")
            .expect("record present");
        assert!((rec.phase_value.abs() - 0.3338505).abs() < 1e-7);
        assert!(rec.weight > 0.0 && rec.normalized_gap >= 0.0);
    }

    #[test]
    fn empty_window() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(0, 0, false).unwrap();
        let scan = scan_three_wave(&p, &wp, &w, &ScanOptions::default()).unwrap();
        assert!(scan.records.is_empty());
        assert_eq!(scan.min_normalized_gap, None);
        assert!(ScanWindow::new(4, 5, false).is_err());
        assert!(ScanWindow::new(4, 0, false).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(64, 4, false).unwrap();
        let opts = ScanOptions {
            budget: ScanBudget {
                max_evaluations: 1000,
                max_records: 10,
            },
            ..ScanOptions::default()
        };
        assert!(matches!(scan_three_wave(&p, &wp, &w, &opts), Err(Error::ResourceBudget { .. })));
        let opts = ScanOptions {
            keep: 100,
            budget: ScanBudget {
                max_evaluations: u64::MAX,
                max_records: 10,
            },
            ..ScanOptions::default()
        };
        assert!(matches!(scan_three_wave(&p, &wp, &w, &opts), Err(Error::ResourceBudget { .. })));
    }

    #[test]
    fn exact_resonance_is_flagged() {
        // With g = 2, sigma = 1: Lambda(2) = 2 Lambda(1).
        let p = DispersionParams::new(2.0, 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(4, 1, false).unwrap();
        let scan = scan_three_wave(&p, &wp, &w, &all_opts()).unwrap();
        assert!(scan.near_resonances > 0);
        let best = scan.argmin.unwrap();
        assert!(best.near_resonance);
        assert!(best.phase_value.abs() < 1e-25);
    }

    /// Independent oracle: all triples v1 + v2 + v3 = 0 with the small leg |v2| <= max_low and
    /// all eight symmetric sign patterns.
    fn brute_force_min(p: &DispersionParams<f64>, wp: &WeightParams, high: i64, low: i64) -> f64 {
        let mut best = f64::INFINITY;
        for a in -high..=high {
            for b in -high..=high {
                let v1 = lp(a, b);
                if v1.is_zero() || v1.norm_sq() > high * high {
                    continue;
                }
                for c in -low..=low {
                    for d in -low..=low {
                        let v2 = lp(c, d);
                        if v2.is_zero() || v2.norm_sq() > low * low {
                            continue;
                        }
                        let v3 = -(v1 + v2);
                        if v3.is_zero() {
                            continue;
                        }
                        let k: f64 = weight_k(wp, v1, v2, v3).unwrap();
                        for s1 in Sign::BOTH {
                            for s2 in Sign::BOTH {
                                for s3 in Sign::BOTH {
                                    let ps = psi3(p, [s1, s2, s3], [v1, v2, v3]).unwrap();
                                    best = best.min(ps.abs() / k);
                                }
                            }
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn sub_window_matches_brute_force() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(16, 4, false).unwrap();
        let scan = scan_three_wave(&p, &wp, &w, &ScanOptions::default()).unwrap();
        let oracle = brute_force_min(&p, &wp, 16, 4);
        let got = scan.min_normalized_gap.unwrap();
        assert!((got - oracle).abs() <= 1e-12 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn generic_window_has_positive_floor() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        let wp = WeightParams::new(0.5).unwrap();
        let w = ScanWindow::new(64, 4, true).unwrap();
        let scan = scan_three_wave(&p, &wp, &w, &ScanOptions::default()).unwrap();
        assert!(scan.min_normalized_gap.unwrap() > 0.0);
        assert_eq!(scan.records.len(), 32);
        assert_eq!(scan.shell_minima.len(), 7);
        for pair in scan.records.windows(2) {
            assert_ne!(pair[0].lex_cmp(&pair[1]), Ordering::Greater);
        }
    }

    #[test]
    fn scans_are_thread_count_independent() {
        let p = DispersionParams::new(std::f64::consts::E, 1.0).unwrap();
        let wp = WeightParams::new(1.0).unwrap();
        let w = ScanWindow::new(48, 3, true).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| scan_three_wave(&p, &wp, &w, &ScanOptions::default()).unwrap())
        };
        let a = serde_json::to_string(&run(1)).unwrap();
        let b = serde_json::to_string(&run(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn four_wave_closed_form_modulations() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let w = ScanWindow::new(100, 1, false).unwrap();
        let opts = FourWaveOptions {
            scan: ScanOptions {
                keep: u64::MAX,
                ..ScanOptions::default()
            },
            ..FourWaveOptions::default()
        };
        let scan = scan_four_wave(&p, &w, &opts).unwrap();
        let rec = scan
            .records
            .iter()
            .find(|r| r.frequencies == vec![lp(100, 0), lp(1, 0), lp(-1, 0)] && r.signs.to_string() == "++")
            .unwrap();
        let lam = |r: f64| (r + r * r * r).sqrt();
        let m1 = lam(101.0) - lam(100.0) - lam(1.0);
        let m2 = lam(99.0) - lam(100.0) - lam(1.0);
        let [a, b] = rec.modulations.unwrap();
        assert!((a - m1).abs() < 1e-12 && (b - m2).abs() < 1e-12);
        assert_eq!(rec.phase_value, if m1.abs() >= m2.abs() { m1 } else { m2 });
    }

    #[test]
    fn four_wave_excludes_trivial_pairs() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        let w = ScanWindow::new(20, 2, false).unwrap();
        let opts = FourWaveOptions {
            scan: ScanOptions {
                keep: u64::MAX,
                ..ScanOptions::default()
            },
            ..FourWaveOptions::default()
        };
        let scan = scan_four_wave(&p, &w, &opts).unwrap();
        let nv = LatticePoint::disk(20).len() as u64;
        let ns = 2 * LatticePoint::disk(2).len() as u64;
        assert_eq!(scan.excluded_trivial, nv * ns);
        assert_eq!(scan.evaluations + scan.excluded_trivial, nv * ns * ns);
        assert!(scan
            .records
            .iter()
            .all(|r| !(r.frequencies[1] == r.frequencies[2] && r.signs.signs()[0] == r.signs.signs()[1])));
        assert!(scan.min_normalized_gap.unwrap() > 0.0);
    }
}
