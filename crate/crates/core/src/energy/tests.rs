use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::audit::IncrementParts;
use super::*;
use crate::dispersion::{DispersionParams, Sign};
use crate::lattice::LatticePoint;
use crate::model::{nonlinearity, random_profile, run, ModelConfig};
use crate::torus::{torus_area, Bracket};
use crate::{Field, Grid, Params};

fn lp(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

fn params() -> Params {
    Params::new(2f64.sqrt(), 1.0).unwrap()
}

#[test]
fn single_mode_energy() {
    let g = Grid::new(16).unwrap();
    let a = 0.7;
    let u = Field::mode(&g, lp(1, 0), Complex::new(a, 0.0)).unwrap();
    for n in [0.0, 1.0, 3.0] {
        let want = 2f64.powf(n) * a * a * torus_area::<f64>();
        assert!((energy_en(&u, n) - want).abs() < 1e-12 * want);
    }
    let l = u.l2_norm();
    assert!((energy_en(&u, 0.0) - l * l).abs() < 1e-12);
}

#[test]
fn symbol_vanishes_on_equal_norms() {
    for n in [1.0, 2.0, 5.0, 2.5] {
        assert_eq!(energy_symbol(n, lp(3, 4), lp(5, 0)), 0.0);
        assert_eq!(energy_symbol(n, lp(2, 1), lp(-1, 2)), 0.0);
    }
}

#[test]
fn symbol_closed_form_and_factorization() {
    // k = 8, ((2^2 - 10^2) / 20) = -4.8
    let want = -38.4 * energy_constant::<f64>();
    let s = EnergySymbol::new(2.0);
    let (xi, eta) = (lp(3, 0), lp(1, 0));
    assert!((s.value(xi, eta) - want).abs() < 1e-12 * want.abs());
    let factored = s.depletion(xi, eta) * s.reduced(xi, eta).unwrap();
    assert!((factored - want).abs() < 1e-12 * want.abs());
    assert!((energy_constant::<f64>() * 32.0 * std::f64::consts::PI.powi(4) - 1.0).abs() < 1e-15);
}

#[test]
fn symbol_is_even_in_the_swap() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = EnergySymbol::new(5.0).with_band(2.0);
    for _ in 0..500 {
        let mut r = || (rng.random::<f64>() * 24.0 - 12.0).round() as i64;
        let (xi, eta) = (lp(r(), r()), lp(r(), r()));
        let (a, b): (f64, f64) = (s.value(xi, eta), s.value(eta, xi));
        assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{xi:?} {eta:?}");
        assert!(a <= 0.0);
    }
}

#[test]
fn bulk_symbol_ranges() {
    let b = BulkSymbol::new(crate::paradiff::ParadiffConfig::new(-1).unwrap());
    for xi in LatticePoint::disk(6) {
        for eta in LatticePoint::disk(6) {
            let d: f64 = b.depletion(xi, eta);
            assert!((0.0..=1.0 + 1e-15).contains(&d));
            assert!(b.mu0::<f64>(xi, eta) >= 0.0);
        }
    }
    assert_eq!(b.mu0::<f64>(lp(3, 0), lp(3, 0)), 0.0);
    assert_eq!(b.depletion::<f64>(lp(3, 0), lp(-3, 0)), 0.0);
}

fn random_field(g: &Grid, seed: u64) -> Field {
    random_profile(g, 1.0, seed)
}

#[test]
fn single_shift_collapse() {
    let g = Grid::new(16).unwrap();
    let f = Field::mode(&g, lp(1, 0), Complex::new(1.0, 0.0)).unwrap();
    let (gg, h) = (random_field(&g, 1), random_field(&g, 2));
    let got = trilinear(&|_, _| 1.0, None, &f, &gg, &h, false).unwrap();
    let want: Complex<f64> = g
        .frequencies()
        .map(|eta| gg.coeff(eta) * h.coeff(eta + lp(1, 0)).conj())
        .sum::<Complex<f64>>()
        * torus_area::<f64>();
    assert!((got - want).norm() < 1e-12 * want.norm());
}

#[test]
fn filters_partition_the_sum() {
    let g = Grid::new(16).unwrap();
    let (f, gg, h) = (random_field(&g, 3), random_field(&g, 4), random_field(&g, 5));
    let mu = |xi: LatticePoint, eta: LatticePoint| 1.0 / (1.0 + (xi - eta).norm_sq() as f64);
    let all = trilinear(&mu, None, &f, &gg, &h, false).unwrap();
    for signs in [[Sign::Plus, Sign::Plus], [Sign::Minus, Sign::Plus]] {
        let lo = ModulationFilter::new(Threshold::AtMostZero, signs, params());
        let hi = ModulationFilter::new(Threshold::AboveZero, signs, params());
        let s = trilinear(&mu, Some(&lo), &f, &gg, &h, false).unwrap() + trilinear(&mu, Some(&hi), &f, &gg, &h, false).unwrap();
        assert!((s - all).norm() < 1e-12 * all.norm());
        let below = ModulationFilter::new(Threshold::AtMost(-2.0), signs, params());
        let band = ModulationFilter::new(Threshold::Between(-2.0), signs, params());
        let s2 = trilinear(&mu, Some(&below), &f, &gg, &h, false).unwrap()
            + trilinear(&mu, Some(&band), &f, &gg, &h, false).unwrap();
        let s3 = trilinear(&mu, Some(&lo), &f, &gg, &h, false).unwrap();
        assert!((s2 - s3).norm() < 1e-12 * all.norm());
    }
}

#[test]
fn young_bound_holds() {
    let g = Grid::new(16).unwrap();
    let mu = |xi: LatticePoint, eta: LatticePoint| ((xi.x - eta.y) as f64).cos();
    for seed in 0..100 {
        let (f, gg, h) = (random_field(&g, 3 * seed), random_field(&g, 3 * seed + 1), random_field(&g, 3 * seed + 2));
        let s = trilinear(&mu, None, &f, &gg, &h, false).unwrap().norm();
        let l1: f64 = f.coeffs().iter().map(|c| c.norm()).sum();
        let l2 = |x: &Field| x.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(s <= l1 * l2(&gg) * l2(&h) * (1.0 + 1e-12));
    }
}

#[test]
fn weighted_sum_guards_small_divisors() {
    let g = Grid::new(8).unwrap();
    let f = random_field(&g, 1);
    let gg = Field::mode(&g, LatticePoint::ZERO, Complex::new(1.0, 0.0)).unwrap().plus(&random_field(&g, 2));
    let lo = ModulationFilter::new(Threshold::AtMostZero, [Sign::Plus, Sign::Plus], params());
    let err = trilinear(&|_, _| 1.0, Some(&lo), &f, &gg, &gg, true).unwrap_err();
    assert!(matches!(err, crate::Error::SmallDivisor { eta: (0, 0), .. }));
    let hi = ModulationFilter::new(Threshold::AboveZero, [Sign::Plus, Sign::Plus], params());
    assert!(trilinear(&|_, _| 1.0, Some(&hi), &f, &gg, &gg, true).is_ok());
    assert!(trilinear(&|_, _| 1.0, None, &f, &gg, &gg, true).is_err());
}

#[test]
fn trivial_resonance_is_imaginary() {
    let g = Grid::new(16).unwrap();
    let q = |xi: LatticePoint, eta: LatticePoint| ((xi.dot(eta) as f64) * 0.3).sin() + 0.5;
    for seed in 0..6 {
        let (u, w) = (random_field(&g, seed), random_field(&g, seed + 100));
        for iota in Sign::BOTH {
            let s = trivial_resonance_sum(&q, Threshold::AboveZero, params(), iota, &u, &w).unwrap();
            assert!(s.im.abs() > 0.0);
            assert!(s.re.abs() <= 1e-13 * s.im.abs(), "{s}");
        }
    }
}

#[test]
fn rates_reproduce_the_direct_energy_derivative() {
    let g = Grid::new(32).unwrap();
    let cfg = ModelConfig::new(2f64.sqrt(), g.clone(), 0.1, 1.0).unwrap();
    for seed in 0..3 {
        let u = random_profile(&g, 3.0, seed).scale(0.2);
        let n = cfg.sobolev_index;
        let wn = nonlinearity(&u, &cfg).apply_regular(&Bracket::new(n));
        let w = u.apply_regular(&Bracket::new(n));
        let direct = 2.0 * wn.inner(&w).re;
        let parts: IncrementParts = super::audit::rates(&u, &cfg, 3).unwrap();
        assert!((parts.total() - direct).abs() < 1e-11 * direct.abs(), "{} {direct}", parts.total());
    }
}

#[test]
fn linear_audit_is_zero_and_cadence_is_checked() {
    let g = Grid::new(16).unwrap();
    let mut cfg = ModelConfig::new(2f64.sqrt(), g.clone(), 0.1, 0.1).unwrap();
    cfg.nonlinear = false;
    cfg.keep_fields = true;
    cfg.dt = Some(0.01);
    let out = run(&cfg, &random_profile(&g, 3.0, 1).scale(0.1)).unwrap();
    let a = increment_audit(&out, &cfg, 2, 1).unwrap();
    assert!(a.records.iter().all(|r| r.parts.total() == 0.0));
    assert!(a.records.iter().filter_map(|r| r.de_dt_fd).all(|d| d.abs() < 1e-12 * a.records[0].e_n));

    cfg.snapshot_every = 11;
    cfg.t_end = 0.5;
    let out = run(&cfg, &random_profile(&g, 3.0, 1).scale(0.1)).unwrap();
    assert!(matches!(increment_audit(&out, &cfg, 2, 1), Err(crate::Error::CadenceTooCoarse { .. })));
    cfg.keep_fields = false;
    cfg.snapshot_every = 1;
    let out = run(&cfg, &random_profile(&g, 3.0, 1).scale(0.1)).unwrap();
    assert!(increment_audit(&out, &cfg, 2, 1).is_err());
}

#[test]
fn small_window_depletion() {
    let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
    let r = depletion_checks(&p, 5.0, DepletionWindow { radius: 24, max_low: 4 }).unwrap();
    assert!(r.factor_defect < 1e-12);
    assert!(r.mprime_min > 0.0 && r.mprime_max.is_finite());
    assert!(r.correlation_constant.is_finite() && r.correlation_constant > 0.0);
    assert_eq!(r.correlation.len(), 2);
}
