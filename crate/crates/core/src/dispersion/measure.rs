use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{lemma1_profile, ProfileTriple};
use super::{weight_k_unchecked, WeightParams};
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::Real;

/// Summed lengths of the exceptional intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub total: f64,
    pub contributing_pairs: u64,
    pub pairs_scanned: u64,
    pub j: i32,
    pub big_b: f64,
    pub cutoff: i64,
}

/// Total length of the intervals {y in (0,B) : |F_{a,b,c}(y)| < 2^{-j} K_kappa(xi, eta, -xi-eta)}
/// with a = |eta|, b = |xi|, c = |xi + eta| over 1 <= |eta| <= |xi| <= |xi + eta|, |xi| <= cutoff.
pub fn exceptional_measure_bound<T: Real>(
    big_b: T,
    j: i32,
    wp: &WeightParams,
    cutoff: i64,
    max_pairs: u64,
) -> Result<MeasureBound> {
    if j < 5 {
        return Err(invalid("j", format!("must be at least 5, got {j}")));
    }
    if !(big_b >= T::lit(5.0)) || !big_b.is_finite() {
        return Err(invalid("B", format!("must be finite and at least 5, got {big_b}")));
    }
    if cutoff < 1 {
        return Err(invalid("cutoff", "must be at least 1"));
    }
    let xis = LatticePoint::disk(cutoff);
    let estimate = xis.len() as u64 * xis.len() as u64;
    if estimate > max_pairs {
        return Err(Error::ResourceBudget {
            what: "frequency pairs",
            requested: estimate,
            budget: max_pairs,
        });
    }
    let scale = T::lit(2.0).powi(-j);
    let partial: Vec<(T, u64, u64)> = xis
        .par_chunks(64)
        .map(|chunk| {
            let mut sum = T::zero();
            let mut hits = 0u64;
            let mut scanned = 0u64;
            for &xi in chunk {
                let nx = xi.norm_sq();
                let r = (nx as f64).sqrt().floor() as i64;
                for ex in -r..=r {
                    for ey in -r..=r {
                        let eta = LatticePoint::new(ex, ey);
                        let ne = eta.norm_sq();
                        if ne == 0 || ne > nx {
                            continue;
                        }
                        let s = xi + eta;
                        if s.norm_sq() < nx {
                            continue;
                        }
                        scanned += 1;
                        let a: T = eta.norm();
                        let b: T = xi.norm();
                        let c: T = s.norm();
                        let delta = scale * weight_k_unchecked::<T>(wp, xi, eta, -s);
                        let t = match ProfileTriple::new(a, b, c) {
                            Ok(t) => t,
                            Err(_) => continue,
                        };
                        // An interval can only exist if F(0) < delta and F(B) > -delta.
                        if t.f(T::zero()) >= delta || t.f(big_b) <= -delta {
                            continue;
                        }
                        let rep = match lemma1_profile(&t, big_b, delta) {
                            Ok(r) => r,
                            Err(_) => continue,
                        };
                        if rep.length > T::zero() {
                            sum = sum + rep.length;
                            hits += 1;
                        }
                    }
                }
            }
            (sum, hits, scanned)
        })
        .collect();
    let mut total = T::zero();
    let mut hits = 0;
    let mut scanned = 0;
    for (s, h, n) in partial {
        total = total + s;
        hits += h;
        scanned += n;
    }
    Ok(MeasureBound {
        total: total.as_f64(),
        contributing_pairs: hits,
        pairs_scanned: scanned,
        j,
        big_b: big_b.as_f64(),
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cutoff_matches_hand_enumeration() {
        // Only xi = eta unit vectors contribute (c = 2, root y = 2); the perpendicular
        // pairs have F(0) = 2 - 2^{3/4} far above delta.
        let wp = WeightParams::new(0.5).unwrap();
        let j = 5;
        let got = exceptional_measure_bound(5.0f64, j, &wp, 1, u64::MAX).unwrap();
        assert_eq!(got.pairs_scanned, 12);
        assert_eq!(got.contributing_pairs, 4);
        let k: f64 = 0.058750447858700695;
        let d = k / 32.0;
        let one = d * (768.0 + 128.0 * d * d).sqrt() / 4.0;
        assert!((got.total - 4.0 * one).abs() < 1e-9, "{} vs {}", got.total, 4.0 * one);
    }

    #[test]
    fn monotone_in_j() {
        let wp = WeightParams::new(1.0).unwrap();
        let mut last = f64::INFINITY;
        for j in 5..12 {
            let b = exceptional_measure_bound(5.0f64, j, &wp, 6, u64::MAX).unwrap().total;
            assert!(b <= last);
            last = b;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let wp = WeightParams::new(1.0).unwrap();
        assert!(exceptional_measure_bound(5.0f64, 4, &wp, 4, u64::MAX).is_err());
        assert!(exceptional_measure_bound(4.0f64, 5, &wp, 4, u64::MAX).is_err());
        assert!(exceptional_measure_bound(5.0f64, 5, &wp, 0, u64::MAX).is_err());
        assert!(matches!(
            exceptional_measure_bound(5.0f64, 5, &wp, 40, 100),
            Err(Error::ResourceBudget { .. })
        ));
    }
}
