use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// The fixed smooth bump: even, 1 on [-5/4, 5/4], 0 outside (-8/5, 8/5).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutoffProfile;

impl CutoffProfile {
    pub const PLATEAU: f64 = 1.25;
    pub const SUPPORT: f64 = 1.6;

    #[inline]
    pub fn eval<T: Real>(&self, r: T) -> T {
        phi(r)
    }
}

#[inline]
fn psi<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-t.recip()).exp()
    } else {
        T::zero()
    }
}

/// phi(r) = q((8/5 - |r|) / (8/5 - 5/4)), q(t) = psi(t) / (psi(t) + psi(1 - t)), psi(t) = exp(-1/t).
#[inline]
pub fn phi<T: Real>(r: T) -> T {
    let r = r.abs();
    if r <= T::lit(CutoffProfile::PLATEAU) {
        return T::one();
    }
    if r >= T::lit(CutoffProfile::SUPPORT) {
        return T::zero();
    }
    let t = (T::lit(CutoffProfile::SUPPORT) - r) / T::lit(CutoffProfile::SUPPORT - CutoffProfile::PLATEAU);
    let a = psi(t);
    let b = psi(T::one() - t);
    a / (a + b)
}

/// phi_k(r) = phi(r / 2^k) - phi(r / 2^{k-1}).
#[inline]
pub fn phi_k<T: Real>(k: i32, r: T) -> T {
    let s = T::lit(2.0).powi(k);
    phi(r / s) - phi(r * T::lit(2.0) / s)
}

/// phi_{<=B}(r) = phi(r / 2^B).
#[inline]
pub fn phi_leq<T: Real>(b: T, r: T) -> T {
    phi(r / T::lit(2.0).powf(b))
}

/// phi_{>B} = 1 - phi_{<=B}.
#[inline]
pub fn phi_gt<T: Real>(b: T, r: T) -> T {
    T::one() - phi_leq(b, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        for i in 0..=125 {
            let r = i as f64 / 100.0;
            assert_eq!(phi(r), 1.0);
            assert_eq!(phi(-r), 1.0);
        }
        for i in 160..400 {
            assert_eq!(phi(i as f64 / 100.0), 0.0);
        }
        let mut last = 1.0;
        for i in 0..=350 {
            let r = 1.25 + i as f64 * 1e-3;
            let v = phi(r);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn smooth_finite_differences_bounded() {
        let h = 1e-3;
        let mut worst: f64 = 0.0;
        for i in 1100..1700 {
            let r = i as f64 * 1e-3;
            let d2 = (phi(r + h) - 2.0 * phi(r) + phi(r - h)) / (h * h);
            worst = worst.max(d2.abs());
        }
        assert!(worst.is_finite() && worst < 1e3);
    }

    #[test]
    fn telescoping() {
        for i in 0..500 {
            let r = i as f64 * 0.37;
            let big_k = 7;
            let sum: f64 = (0..=big_k).map(|k| phi_k(k, r)).sum::<f64>() + phi_leq(-1.0, r);
            assert!((sum - phi_leq(big_k as f64, r)).abs() < 1e-15);
            assert!((phi_leq(2.5, r) + phi_gt(2.5, r) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_shells_vanish_on_lattice() {
        for n in 0..200i64 {
            let r = (n as f64).sqrt();
            for k in -6..0 {
                assert_eq!(phi_k(k, r), 0.0);
            }
        }
    }
}
