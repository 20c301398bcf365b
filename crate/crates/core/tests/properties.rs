use num_complex::Complex;
use proptest::prelude::*;

use torwave::dispersion::{phase3, phase4, Sign};
use torwave::energy::{trilinear, trivial_resonance_sum, BulkSymbol, EnergySymbol, ModulationFilter, Threshold};
use torwave::model::{nonlinearity, random_profile, run, ModelConfig};
use torwave::paradiff::{weyl_apply, ParadiffConfig, Symbol, ZetaFn};
use torwave::{Field, Grid, LatticePoint, Params};

type C = Complex<f64>;

fn params() -> Params {
    Params::new(2f64.sqrt(), 1.0).unwrap()
}

fn point(r: i64) -> impl Strategy<Value = LatticePoint> {
    (-r..=r, -r..=r).prop_map(|(x, y)| LatticePoint::new(x, y))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &Field) -> f64 {
    a.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn real_symbol(g: &Grid, w: f64) -> Symbol<f64> {
    let c = Field::from_spatial_real(g, |x, y| 1.0 + w * x.cos() + 0.2 * (x + 2.0 * y).sin());
    Symbol::product(&c, ZetaFn::angular(0, 1), 0.0).add(&Symbol::function(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_is_even(v in point(500)) {
        let p = params();
        prop_assert_eq!(p.lambda(v), p.lambda(LatticePoint::ZERO - v));
    }

    #[test]
    fn phase4_splits_into_two_phase3(xi in point(200), eta in point(200), rho in point(200), s in (sign(), sign(), sign())) {
        let p = params();
        let (i1, i3, ir) = s;
        let whole: f64 = phase4(&p, [i1, i3, ir], xi, eta, rho);
        let parts: f64 = phase3(&p, [i1, Sign::Plus], xi, eta) + phase3(&p, [i3, ir], eta, rho);
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole.abs()));
    }

    #[test]
    fn phase4_vanishes_on_trivial_configurations(xi in point(1000), eta in point(1000), i1 in sign()) {
        let ph: f64 = phase4(&params(), [i1, i1.flip(), Sign::Plus], xi, eta, xi);
        prop_assert!(ph.abs() <= 1e-13);
    }

    #[test]
    fn energy_symbol_is_even_and_nonpositive(xi in point(40), eta in point(40), n in 1.0f64..6.0) {
        let s = EnergySymbol::new(n);
        let (a, b): (f64, f64) = (s.value(xi, eta), s.value(eta, xi));
        prop_assert!((a - b).abs() <= 1e-13 * a.abs());
        prop_assert!(a <= 0.0);
    }

    #[test]
    fn bulk_depletion_lies_in_unit_interval(xi in point(60), eta in point(60)) {
        let d: f64 = BulkSymbol::new(ParadiffConfig::default()).depletion(xi, eta);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn weyl_is_self_adjoint_for_real_symbols(w in -0.5f64..0.5, s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = Grid::new(16).unwrap();
        let a = real_symbol(&g, w);
        let cfg = ParadiffConfig::new(-1).unwrap();
        let (f, h) = (random_profile(&g, 0.5, s1), random_profile(&g, 0.5, s2 + 1000));
        let l = weyl_apply(&a, &f, &cfg).unwrap().inner(&h);
        let r = f.inner(&weyl_apply(&a, &h, &cfg).unwrap());
        prop_assert!((l - r).norm() <= 1e-12 * l.norm().max(1.0));
    }

    #[test]
    fn weyl_is_linear(re in -2.0f64..2.0, im in -2.0f64..2.0, s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = Grid::new(16).unwrap();
        let a = real_symbol(&g, 0.3);
        let b = Symbol::multiplier(1.0, ZetaFn::abs_power(1.0));
        let cfg = ParadiffConfig::default();
        let z = C::new(re, im);
        let (f, h) = (random_profile(&g, 0.5, s1), random_profile(&g, 0.5, s2 + 1000));
        let t = |x: &Symbol<f64>, y: &Field| weyl_apply(x, y, &cfg).unwrap();
        let lhs = t(&a.add(&b.scale(z)), &f.plus(&h.scale_complex(z)));
        let rhs = t(&a, &f)
            .plus(&t(&a, &h).scale_complex(z))
            .plus(&t(&b, &f).scale_complex(z))
            .plus(&t(&b, &h).scale_complex(z * z));
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * max_abs(&lhs).max(1.0));
    }

    #[test]
    fn modulation_filters_partition_the_sum(seed in 0u64..1000, band in -4.0f64..-0.5, signs in (sign(), sign())) {
        let g = Grid::new(16).unwrap();
        let (f, gg, h) = (random_profile(&g, 1.0, seed), random_profile(&g, 1.0, seed + 1), random_profile(&g, 1.0, seed + 2));
        let mu = |xi: LatticePoint, eta: LatticePoint| 1.0 / (1.0 + (xi - eta).norm_sq() as f64);
        let s = [signs.0, signs.1];
        let sum = |th| trilinear(&mu, Some(&ModulationFilter::new(th, s, params())), &f, &gg, &h, false).unwrap();
        let all = trilinear(&mu, None, &f, &gg, &h, false).unwrap();
        prop_assert!((sum(Threshold::AtMostZero) + sum(Threshold::AboveZero) - all).norm() <= 1e-12 * all.norm());
        prop_assert!((sum(Threshold::AtMost(band)) + sum(Threshold::Between(band)) - sum(Threshold::AtMostZero)).norm() <= 1e-12 * all.norm());
    }

    #[test]
    fn trivial_resonance_sum_is_imaginary(seed in 0u64..1000, i1 in sign(), k in 0.05f64..0.5) {
        let g = Grid::new(16).unwrap();
        let (u, w) = (random_profile(&g, 1.0, seed), random_profile(&g, 1.0, seed + 500));
        let q = move |xi: LatticePoint, eta: LatticePoint| ((xi.dot(eta) as f64) * k).sin() + 0.5;
        let s = trivial_resonance_sum(&q, Threshold::AboveZero, params(), i1, &u, &w).unwrap();
        prop_assert!(s.re.abs() <= 1e-13 * s.im.abs().max(1e-300));
    }

    #[test]
    fn nonlinearity_is_skew(seed in 0u64..1000, amp in 0.01f64..1.0) {
        let g = Grid::new(32).unwrap();
        let cfg = ModelConfig::new(2f64.sqrt(), g.clone(), amp, 1.0).unwrap();
        let u = random_profile(&g, 3.0, seed).scale(amp);
        let n = nonlinearity(&u, &cfg);
        let r = n.inner(&u).re;
        prop_assert!(r.abs() <= 1e-13 * n.l2_norm() * u.l2_norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn midpoint_conserves_l2(seed in 0u64..1000, eps in 0.01f64..0.2) {
        let g = Grid::new(16).unwrap();
        let cfg = ModelConfig::new(2f64.sqrt(), g.clone(), eps, 1.0).unwrap();
        let out = run(&cfg, &random_profile(&g, 5.0, seed).scale(eps)).unwrap();
        prop_assert!(out.report.aborted.is_none());
        prop_assert!(out.report.max_relative_l2_drift <= 1e-12);
    }
}
