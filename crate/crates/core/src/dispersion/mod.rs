//! Gravity-capillary dispersion relation on Z^2, phase functions, and
//! small-divisor censuses.

mod collinear;
mod measure;
mod profile;
mod scan;

pub use collinear::{collinear_gap, CollinearEntry};
pub use measure::{exceptional_measure_bound, MeasureBound};
pub use profile::{lemma1_profile, ProfileReport, ProfileTriple};
pub use scan::{
    scan_four_wave, scan_three_wave, scan_three_wave_with, FourWaveOptions, FourWaveScan,
    ResonanceRecord, ScanBudget, ScanOptions, ScanWindow, ShellMinimum, ThreeWaveScan,
    ThreeWaveWeight,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::Real;

/// Gravity and surface tension.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams<T> {
    g: T,
    sigma: T,
}

impl<T: Real> DispersionParams<T> {
    pub fn new(g: T, sigma: T) -> Result<Self> {
        if !(g > T::zero()) || !g.is_finite() {
            return Err(invalid("g", format!("must be positive and finite, got {g}")));
        }
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(invalid("sigma", format!("must be positive and finite, got {sigma}")));
        }
        Ok(Self { g, sigma })
    }

    #[inline]
    pub fn g(&self) -> T {
        self.g
    }

    #[inline]
    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// The ratio y = g / sigma fixing the resonance geometry.
    #[inline]
    pub fn y(&self) -> T {
        self.g / self.sigma
    }

    /// Lambda as a function of the radius r = |v|.
    #[inline]
    pub fn lambda_radial(&self, r: T) -> T {
        (self.g * r + self.sigma * r * r * r).sqrt()
    }

    /// Lambda(v) = sqrt(g|v| + sigma|v|^3).
    #[inline]
    pub fn lambda(&self, v: LatticePoint) -> T {
        self.lambda_radial(v.norm())
    }

    /// Lambda at a real frequency.
    #[inline]
    pub fn lambda_at(&self, zeta: [T; 2]) -> T {
        self.lambda_radial(zeta[0].hypot(zeta[1]))
    }

    /// sqrt(g + sigma |zeta|^2), the symbol of (g - sigma Laplacian)^{1/2}.
    #[inline]
    pub fn gravity_capillary_at(&self, zeta: [T; 2]) -> T {
        (self.g + self.sigma * (zeta[0] * zeta[0] + zeta[1] * zeta[1])).sqrt()
    }

    /// Same parameters in another scalar type.
    pub fn cast<U: Real>(&self) -> DispersionParams<U> {
        DispersionParams {
            g: U::lit(self.g.as_f64()),
            sigma: U::lit(self.sigma.as_f64()),
        }
    }
}

/// Lambda(v) = sqrt(g|v| + sigma|v|^3).
#[inline]
pub fn lambda<T: Real>(params: &DispersionParams<T>, v: LatticePoint) -> T {
    params.lambda(v)
}

/// One sign in a modulation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    #[inline]
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

/// Ordered list of 2, 3 or 4 signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Sign>", into = "Vec<Sign>")]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if !(2..=4).contains(&signs.len()) {
            return Err(invalid("signs", format!("length must be 2, 3 or 4, got {}", signs.len())));
        }
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// Parses strings like "+-" or "+,-,-".
    pub fn parse(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(invalid("signs", format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }
}

impl TryFrom<Vec<Sign>> for SignPattern {
    type Error = Error;
    fn try_from(v: Vec<Sign>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignPattern> for Vec<Sign> {
    fn from(p: SignPattern) -> Vec<Sign> {
        p.0
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// Three-wave modulation Lambda(xi) - i1 Lambda(xi - eta) - i2 Lambda(eta).
#[inline]
pub fn phase3<T: Real>(p: &DispersionParams<T>, signs: [Sign; 2], xi: LatticePoint, eta: LatticePoint) -> T {
    p.lambda(xi) - signs[0].value::<T>() * p.lambda(xi - eta) - signs[1].value::<T>() * p.lambda(eta)
}

/// Four-wave modulation Lambda(xi) - i_rho Lambda(rho) - i1 Lambda(xi - eta) - i3 Lambda(eta - rho).
///
/// Signs are `[i1, i3, i_rho]`.
#[inline]
pub fn phase4<T: Real>(
    p: &DispersionParams<T>,
    signs: [Sign; 3],
    xi: LatticePoint,
    eta: LatticePoint,
    rho: LatticePoint,
) -> T {
    let [i1, i3, ir] = signs;
    p.lambda(xi)
        - ir.value::<T>() * p.lambda(rho)
        - i1.value::<T>() * p.lambda(xi - eta)
        - i3.value::<T>() * p.lambda(eta - rho)
}

/// Five-wave modulation
/// Lambda(xi) - i_theta Lambda(theta) - i1 Lambda(xi - eta) - i3 Lambda(eta - rho) - i4 Lambda(rho - theta).
///
/// Signs are `[i1, i3, i4, i_theta]`.
#[inline]
pub fn phase5<T: Real>(
    p: &DispersionParams<T>,
    signs: [Sign; 4],
    xi: LatticePoint,
    eta: LatticePoint,
    rho: LatticePoint,
    theta: LatticePoint,
) -> T {
    let [i1, i3, i4, it] = signs;
    p.lambda(xi)
        - it.value::<T>() * p.lambda(theta)
        - i1.value::<T>() * p.lambda(xi - eta)
        - i3.value::<T>() * p.lambda(eta - rho)
        - i4.value::<T>() * p.lambda(rho - theta)
}

/// Symmetric form i1 Lambda(v1) + i2 Lambda(v2) + i3 Lambda(v3) for v1 + v2 + v3 = 0.
pub fn psi3<T: Real>(p: &DispersionParams<T>, signs: [Sign; 3], v: [LatticePoint; 3]) -> Result<T> {
    if !(v[0] + v[1] + v[2]).is_zero() {
        return Err(invalid("v", "frequencies must sum to zero"));
    }
    Ok(signs[0].value::<T>() * p.lambda(v[0])
        + signs[1].value::<T>() * p.lambda(v[1])
        + signs[2].value::<T>() * p.lambda(v[2]))
}

/// Maps a `phase3` query to its symmetric triple: the phase equals
/// `psi3(+, -i1, -i2; xi, eta - xi, -eta)`.
pub fn symmetric_form(signs: [Sign; 2], xi: LatticePoint, eta: LatticePoint) -> ([Sign; 3], [LatticePoint; 3]) {
    ([Sign::Plus, signs[0].flip(), signs[1].flip()], [xi, eta - xi, -eta])
}

/// Exponent kappa of the three-wave weight.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    kappa: f64,
}

impl WeightParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(invalid("kappa", format!("must lie in (0, 1], got {kappa}")));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// K_kappa(v1, v2, v3) = <v>_max^{-3/2} log(1 + <v>_max)^{-(1+kappa)} <v>_min^{-4}.
pub fn weight_k<T: Real>(wp: &WeightParams, v1: LatticePoint, v2: LatticePoint, v3: LatticePoint) -> Result<T> {
    if v1.is_zero() || v2.is_zero() || v3.is_zero() {
        return Err(Error::ZeroVector { context: "weight_k" });
    }
    Ok(weight_k_unchecked(wp, v1, v2, v3))
}

#[inline]
pub(crate) fn weight_k_unchecked<T: Real>(wp: &WeightParams, v1: LatticePoint, v2: LatticePoint, v3: LatticePoint) -> T {
    let n = [v1.norm_sq(), v2.norm_sq(), v3.norm_sq()];
    let hi = *n.iter().max().unwrap();
    let lo = *n.iter().min().unwrap();
    let bmax = T::from_int(1 + hi).sqrt();
    let bmin = T::from_int(1 + lo).sqrt();
    let kappa = T::lit(wp.kappa);
    bmax.powf(T::lit(-1.5)) * (T::one() + bmax).ln().powf(-(T::one() + kappa)) * bmin.powi(-4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Extended;

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn unit() -> DispersionParams<f64> {
        DispersionParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn lambda_values() {
        assert!((lambda(&unit(), lp(1, 0)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(lambda(&unit(), lp(0, 0)), 0.0);
        let p = DispersionParams::new(2.0f64, 1.0).unwrap();
        assert!((lambda(&p, lp(3, 4)) - 11.618950038622252).abs() < 1e-12);
    }

    #[test]
    fn lambda_generic_over_scalars() {
        let p32 = DispersionParams::new(1.0f32, 1.0).unwrap();
        assert!((p32.lambda(lp(1, 0)) - 2f32.sqrt()).abs() < 1e-6);
        let pe = DispersionParams::new(Extended::from(2.0), Extended::from(1.0)).unwrap();
        let d = pe.lambda(lp(2, 0)) - pe.lambda(lp(1, 0)) - pe.lambda(lp(1, 0));
        assert!(d.abs().as_f64() < 1e-30);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DispersionParams::new(0.0, 1.0).is_err());
        assert!(DispersionParams::new(1.0, -1.0).is_err());
        assert!(DispersionParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn phase3_values() {
        let p = unit();
        let pp = [Sign::Plus, Sign::Plus];
        let v = phase3(&p, pp, lp(2, 0), lp(1, 0));
        assert!((v - (10f64.sqrt() - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((v - 0.3338505).abs() < 1e-7);
        assert_eq!(phase3(&p, pp, lp(3, -2), lp(3, -2)), 0.0);
        let v = phase3(&p, pp, lp(1, 0), lp(0, 1));
        let expected = 2f64.sqrt() - (3.0 * 2f64.sqrt()).sqrt() - 2f64.sqrt();
        assert!((v - expected).abs() < 1e-15);
        assert!((v + 2.0598).abs() < 1e-4);
    }

    #[test]
    fn phase3_matches_symmetric_form() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        for s0 in Sign::BOTH {
            for s1 in Sign::BOTH {
                let (sym, v) = symmetric_form([s0, s1], lp(5, -3), lp(2, 7));
                let a = phase3(&p, [s0, s1], lp(5, -3), lp(2, 7));
                let b = psi3(&p, sym, v).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
        assert!(psi3(&p, [Sign::Plus; 3], [lp(1, 0), lp(1, 0), lp(1, 0)]).is_err());
    }

    #[test]
    fn phase4_values() {
        let p = unit();
        let v = phase4(&p, [Sign::Plus; 3], lp(2, 0), lp(1, 0), lp(0, 0));
        assert!((v - 0.3338505).abs() < 1e-7);
        let t = phase4(&p, [Sign::Plus, Sign::Minus, Sign::Plus], lp(4, 1), lp(-2, 3), lp(4, 1));
        assert_eq!(t, 0.0);
    }

    #[test]
    fn phase5_reduces_when_theta_equals_rho() {
        let p = unit();
        let s = [Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus];
        let a = phase5(&p, s, lp(3, 1), lp(1, 1), lp(-1, 2), lp(-1, 2));
        let b = phase4(&p, [s[0], s[1], Sign::Plus], lp(3, 1), lp(1, 1), lp(-1, 2));
        assert_eq!(a, b);
        let one = lp(1, 0);
        assert_eq!(phase5(&p, [Sign::Plus; 4], one, one, one, one), 0.0);
    }

    #[test]
    fn weight_oracle() {
        // Reference value from a 50-digit evaluation.
        let wp = WeightParams::new(0.5).unwrap();
        let k: f64 = weight_k(&wp, lp(1, 0), lp(1, 0), lp(-2, 0)).unwrap();
        assert!((k - WEIGHT_ORACLE).abs() < 1e-15, "{k}");
        assert!(weight_k::<f64>(&wp, lp(0, 0), lp(1, 0), lp(-1, 0)).is_err());
        assert!(WeightParams::new(0.0).is_err());
        assert!(WeightParams::new(1.5).is_err());
    }

    const WEIGHT_ORACLE: f64 = 0.058750447858700695;

    #[test]
    fn sign_pattern_parsing() {
        let p = SignPattern::parse("+,-,-").unwrap();
        assert_eq!(p.to_string(), "+--");
        assert!(SignPattern::parse("+").is_err());
        assert!(SignPattern::parse("+x").is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[1,-1,-1]");
        let back: SignPattern = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
