use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::DispersionParams;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::Real;

/// One interior lattice point on the segment from 0 to xi.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollinearEntry {
    pub eta: LatticePoint,
    /// |Lambda(xi)/|xi| - Lambda(eta)/|eta||.
    pub gap: f64,
    /// gap * |xi|^6.
    pub normalized_gap: f64,
}

/// Gaps between the slopes Lambda(v)/|v| along the segment from 0 to xi.
pub fn collinear_gap<T: Real>(params: &DispersionParams<T>, xi: LatticePoint) -> Result<Vec<CollinearEntry>> {
    if xi.is_zero() {
        return Err(Error::ZeroVector { context: "collinear_gap" });
    }
    let g = xi.x.abs().gcd(&xi.y.abs());
    let step = LatticePoint::new(xi.x / g, xi.y / g);
    let slope = |v: LatticePoint| params.lambda(v) / v.norm::<T>();
    let sx = slope(xi);
    let n6 = T::from_int(xi.norm_sq()).powi(3);
    Ok((1..g)
        .map(|k| {
            let eta = step.scale(k);
            let gap = (sx - slope(eta)).abs();
            CollinearEntry {
                eta,
                gap: gap.as_f64(),
                normalized_gap: (gap * n6).as_f64(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_pair() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let out = collinear_gap(&p, LatticePoint::new(2, 0)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].eta, LatticePoint::new(1, 0));
        let expected = 10f64.sqrt() / 2.0 - 2f64.sqrt();
        assert!((out[0].gap - expected).abs() < 1e-15);
        assert!((out[0].gap - 0.1669252).abs() < 1e-7);
        assert!((out[0].normalized_gap - expected * 64.0).abs() < 1e-12);
    }

    #[test]
    fn primitive_vectors_have_no_interior_points() {
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        assert!(collinear_gap(&p, LatticePoint::new(3, 5)).unwrap().is_empty());
        assert!(collinear_gap(&p, LatticePoint::new(0, -1)).unwrap().is_empty());
        assert!(collinear_gap(&p, LatticePoint::ZERO).is_err());
    }

    #[test]
    fn generic_gravity_has_positive_gaps() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        let out = collinear_gap(&p, LatticePoint::new(6, 0)).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|e| e.gap > 0.0));
        let neg = collinear_gap(&p, LatticePoint::new(-4, 8)).unwrap();
        assert_eq!(neg.len(), 3);
        assert_eq!(neg[0].eta, LatticePoint::new(-1, 2));
    }
}
