use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;

const ROOT_TOL: f64 = 1e-10;
// Band edges are resolved well below the band width, which can be tiny.
const EDGE_TOL: f64 = 1e-15;
const MAX_DOUBLINGS: usize = 400;

/// Admissible (a, b, c) with 1 <= a <= b <= c <= a + b.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileTriple<T> {
    a: T,
    b: T,
    c: T,
}

impl<T: Real> ProfileTriple<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(invalid("a,b,c", "must be finite"));
        }
        if !(a >= T::one()) {
            return Err(invalid("a", format!("must be at least 1, got {a}")));
        }
        if !(a <= b && b <= c) {
            return Err(invalid("a,b,c", format!("need a <= b <= c, got ({a}, {b}, {c})")));
        }
        if !(c <= a + b) {
            return Err(invalid("c", format!("need c <= a + b, got c = {c}, a + b = {}", a + b)));
        }
        Ok(Self { a, b, c })
    }

    #[inline]
    fn leg(k: T, x: T) -> T {
        (k * x + k * k * k).sqrt()
    }

    /// F(x) = sqrt(ax + a^3) + sqrt(bx + b^3) - sqrt(cx + c^3).
    #[inline]
    pub fn f(&self, x: T) -> T {
        Self::leg(self.a, x) + Self::leg(self.b, x) - Self::leg(self.c, x)
    }

    /// F'(x) in closed form.
    #[inline]
    pub fn df(&self, x: T) -> T {
        let half = T::lit(0.5);
        half * (self.a / Self::leg(self.a, x) + self.b / Self::leg(self.b, x) - self.c / Self::leg(self.c, x))
    }

    /// Lower bound a / (10 sqrt(ax + a^3)) on F' wherever |F| <= 1/10.
    pub fn derivative_floor(&self, x: T) -> T {
        self.a / (T::lit(10.0) * Self::leg(self.a, x))
    }

    pub fn a(&self) -> T {
        self.a
    }

    /// First point of [0, inf) where F reaches `level`, given F(0) < level.
    fn upward_crossing(&self, level: T, tol: T) -> T {
        let mut lo = T::zero();
        let mut hi = T::one();
        let mut n = 0;
        while self.f(hi) < level && n < MAX_DOUBLINGS {
            lo = hi;
            hi = hi + hi;
            n += 1;
        }
        let mut iters = 0;
        while hi - lo > tol * (T::one() + hi) && iters < 300 {
            iters += 1;
            let mid = (lo + hi) * T::lit(0.5);
            if self.f(mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }
}

/// Root and sublevel interval of the profile on (0, B).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport<T> {
    pub f_at_zero: T,
    pub root: Option<T>,
    /// {x in (0,B) : |F(x)| < delta} as an open interval.
    pub interval: Option<(T, T)>,
    pub length: T,
    /// 20 delta sqrt(a + B).
    pub length_bound: T,
    /// The crude upper estimate of F already rules out the band on (0, B).
    pub forced_empty: bool,
}

/// Root of F and the set X_{B,delta} = {x in (0,B) : |F(x)| < delta}.
pub fn lemma1_profile<T: Real>(triple: &ProfileTriple<T>, big_b: T, delta: T) -> Result<ProfileReport<T>> {
    if !(big_b >= T::one()) || !big_b.is_finite() {
        return Err(invalid("B", format!("must be finite and at least 1, got {big_b}")));
    }
    if !(delta > T::zero() && delta <= T::lit(0.05)) {
        return Err(invalid("delta", format!("must lie in (0, 1/20], got {delta}")));
    }
    let f0 = triple.f(T::zero());
    let root = if f0 < T::zero() {
        Some(triple.upward_crossing(T::zero(), T::lit(ROOT_TOL)))
    } else if f0 == T::zero() {
        Some(T::zero())
    } else {
        None
    };

    let interval = if f0 >= delta {
        None
    } else {
        let lo = if f0 > -delta {
            T::zero()
        } else {
            triple.upward_crossing(-delta, T::lit(EDGE_TOL))
        };
        let hi = triple.upward_crossing(delta, T::lit(EDGE_TOL));
        let lo = lo.max(T::zero());
        let hi = hi.min(big_b);
        (hi > lo).then_some((lo, hi))
    };
    let length = interval.map_or(T::zero(), |(l, h)| h - l);

    let (a, b, c) = (triple.a, triple.b, triple.c);
    let upper = ProfileTriple::leg(a, big_b) - (c * c * c - b * b * b) / (T::lit(2.0) * ProfileTriple::leg(c, big_b));
    Ok(ProfileReport {
        f_at_zero: f0,
        root,
        interval,
        length,
        length_bound: T::lit(20.0) * delta * (a + big_b).sqrt(),
        forced_empty: upper <= -delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_root() {
        let t = ProfileTriple::new(1.0f64, 1.0, 2.0).unwrap();
        let r = lemma1_profile(&t, 10.0, 0.05).unwrap();
        assert!((r.root.unwrap() - 2.0).abs() < 1e-9);
        let (lo, hi) = r.interval.unwrap();
        assert!(lo < 2.0 && hi > 2.0);
        assert!(r.length <= r.length_bound);
        assert!(!r.forced_empty);
    }

    #[test]
    fn equal_sides_have_no_root() {
        let t = ProfileTriple::new(1.0, 1.0, 1.0).unwrap();
        let r = lemma1_profile(&t, 10.0, 0.05).unwrap();
        assert_eq!(r.root, None);
        assert_eq!(r.interval, None);
        assert_eq!(r.length, 0.0);
    }

    #[test]
    fn constraint_violations() {
        assert!(ProfileTriple::new(0.5, 1.0, 1.0).is_err());
        assert!(ProfileTriple::new(2.0, 1.0, 2.0).is_err());
        assert!(ProfileTriple::new(1.0, 1.0, 2.5).is_err());
        let t = ProfileTriple::new(1.0, 1.0, 2.0).unwrap();
        assert!(lemma1_profile(&t, 0.5, 0.05).is_err());
        assert!(lemma1_profile(&t, 5.0, 0.0).is_err());
        assert!(lemma1_profile(&t, 5.0, 0.06).is_err());
    }

    #[test]
    fn forced_empty_implies_empty() {
        // Large c - b relative to a forces F well below zero on (0, B).
        let t = ProfileTriple::new(1.0, 10.0, 10.9).unwrap();
        let r = lemma1_profile(&t, 5.0, 0.01).unwrap();
        assert!(r.forced_empty);
        assert_eq!(r.interval, None);
    }

    #[test]
    fn interval_clipped_at_zero() {
        // F(0) slightly negative, root near 0.
        let a: f64 = 1.0;
        let b: f64 = 1.0;
        let c = (a.powf(1.5) + b.powf(1.5)).powf(2.0 / 3.0) + 1e-4;
        let t = ProfileTriple::new(a, b, c).unwrap();
        let r = lemma1_profile(&t, 5.0, 0.05).unwrap();
        let (lo, hi) = r.interval.unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > r.root.unwrap());
    }
}
