//! Points of the frequency lattice Z^2.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A frequency in Z^2.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ZERO: Self = Self { x: 0, y: 0 };

    #[inline]
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    #[inline]
    pub fn norm_sq(self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn dot(self, other: Self) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// Euclidean length |v|.
    #[inline]
    pub fn norm<T: Real>(self) -> T {
        T::from_int(self.norm_sq()).sqrt()
    }

    /// Japanese bracket (1 + |v|^2)^{1/2}.
    #[inline]
    pub fn bracket<T: Real>(self) -> T {
        T::from_int(1 + self.norm_sq()).sqrt()
    }

    /// Smallest k >= 0 with |v| <= 2^k.
    pub fn shell(self) -> u32 {
        let n = self.norm_sq();
        let mut k = 0u32;
        while (1i64 << (2 * k)) < n {
            k += 1;
        }
        k
    }

    /// Sup norm max(|x|, |y|).
    #[inline]
    pub fn max_abs(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    #[inline]
    pub fn scale(self, k: i64) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    #[inline]
    pub fn to_real<T: Real>(self) -> [T; 2] {
        [T::from_int(self.x), T::from_int(self.y)]
    }

    #[inline]
    pub fn tuple(self) -> (i64, i64) {
        (self.x, self.y)
    }

    /// All points with 1 <= |v| <= r, in lexicographic order.
    pub fn disk(r: i64) -> Vec<Self> {
        let mut out = Vec::new();
        let r2 = r * r;
        for x in -r..=r {
            for y in -r..=r {
                let p = Self::new(x, y);
                let n = p.norm_sq();
                if n >= 1 && n <= r2 {
                    out.push(p);
                }
            }
        }
        out
    }
}

impl Add for LatticePoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells() {
        assert_eq!(LatticePoint::new(1, 0).shell(), 0);
        assert_eq!(LatticePoint::new(2, 0).shell(), 1);
        assert_eq!(LatticePoint::new(2, 1).shell(), 2);
        assert_eq!(LatticePoint::new(16, 0).shell(), 4);
        assert_eq!(LatticePoint::new(16, 1).shell(), 5);
    }

    #[test]
    fn disk_counts() {
        assert_eq!(LatticePoint::disk(1).len(), 4);
        assert_eq!(LatticePoint::disk(2).len(), 12);
        assert!(LatticePoint::disk(0).is_empty());
    }
}
