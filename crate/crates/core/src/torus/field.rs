use num_complex::Complex;

use super::cutoff::{phi_gt, phi_k, phi_leq};
use super::grid::Grid;
use super::multiplier::Multiplier;
use super::torus_area;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::FftReal;

/// Fourier coefficients f^(xi) = integral of f e^{-i xi.x} over T^2, one per grid frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierField<T: FftReal> {
    grid: Grid<T>,
    coeffs: Vec<Complex<T>>,
    real: bool,
}

#[inline]
fn czero<T: FftReal>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: FftReal> FourierField<T> {
    pub fn zeros(grid: &Grid<T>) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![czero(); grid.len()],
            real: true,
        }
    }

    /// Wraps coefficients in storage order. A real flag is checked against conjugate symmetry.
    pub fn from_coeffs(grid: &Grid<T>, coeffs: Vec<Complex<T>>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let f = Self {
            grid: grid.clone(),
            coeffs,
            real,
        };
        if real {
            let scale = f.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
            let tol = T::lit(1e-12) * (T::one() + scale);
            if f.conjugate_symmetry_defect() > tol {
                return Err(Error::NotReal("coefficients are not conjugate symmetric".into()));
            }
        }
        Ok(f)
    }

    /// Coefficients from a function of the frequency.
    pub fn from_fn(grid: &Grid<T>, f: impl FnMut(LatticePoint) -> Complex<T>) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: grid.frequencies().map(f).collect(),
            real: false,
        }
    }

    /// The field amplitude * e^{i xi.x}.
    pub fn mode(grid: &Grid<T>, xi: LatticePoint, amplitude: Complex<T>) -> Result<Self> {
        let idx = grid
            .index(xi)
            .ok_or_else(|| crate::error::invalid("xi", format!("{xi:?} is not on the grid")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[idx] = amplitude * torus_area::<T>();
        f.real = xi.is_zero() && amplitude.im == T::zero();
        Ok(f)
    }

    /// Samples a real function of (x1, x2) and transforms it.
    pub fn from_spatial_real(grid: &Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let m = grid.size();
        let mut samples = Vec::with_capacity(grid.len());
        for i in 0..m {
            let x = grid.coordinate(i);
            for j in 0..m {
                samples.push(f(x, grid.coordinate(j)));
            }
        }
        Self::analyze_real(grid, &samples).expect("sample count matches grid")
    }

    /// Transforms M^2 complex samples (row index = x1).
    pub fn analyze(grid: &Grid<T>, samples: &[Complex<T>]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let mut data = samples.to_vec();
        grid.dft_forward(&mut data);
        let s = torus_area::<T>() / T::from_usize(grid.len()).unwrap();
        for c in &mut data {
            *c = *c * s;
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs: data,
            real: false,
        })
    }

    /// Transforms real samples and enforces exact conjugate symmetry.
    pub fn analyze_real(grid: &Grid<T>, samples: &[T]) -> Result<Self> {
        let c: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        let mut f = Self::analyze(grid, &c)?;
        f.symmetrize();
        Ok(f)
    }

    /// Spatial samples f(x_i, x_j) in row-major order.
    pub fn synthesize(&self) -> Vec<Complex<T>> {
        let mut data = self.coeffs.clone();
        self.grid.dft_inverse(&mut data);
        let s = torus_area::<T>().recip();
        for c in &mut data {
            *c = *c * s;
        }
        data
    }

    /// Real parts of the spatial samples.
    pub fn synthesize_real(&self) -> Vec<T> {
        self.synthesize().into_iter().map(|c| c.re).collect()
    }

    fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        let old = self.coeffs.clone();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            let j = self.grid.mirror_index(i);
            *c = (old[i] + old[j].conj()) * half;
        }
        self.real = true;
    }

    /// max |f^(xi) - conj f^(-xi)|.
    pub fn conjugate_symmetry_defect(&self) -> T {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[i] - self.coeffs[self.grid.mirror_index(i)].conj()).norm())
            .fold(T::zero(), T::max)
    }

    #[inline]
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        self.real = false;
        &mut self.coeffs
    }

    #[inline]
    pub fn is_real_valued(&self) -> bool {
        self.real
    }

    /// Marks the field as complex valued.
    pub fn forget_reality(mut self) -> Self {
        self.real = false;
        self
    }

    /// f^(xi), zero off the grid.
    #[inline]
    pub fn coeff(&self, xi: LatticePoint) -> Complex<T> {
        self.grid.index(xi).map_or(czero(), |i| self.coeffs[i])
    }

    /// Nonzero coefficients with their frequencies.
    pub fn support(&self) -> Vec<(LatticePoint, Complex<T>)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != T::zero() || c.im != T::zero())
            .map(|(i, &c)| (self.grid.freq(i), c))
            .collect()
    }

    fn check_grid(&self, other: &Self) {
        assert!(
            self.grid == other.grid,
            "fields live on different grids ({} vs {})",
            self.grid.size(),
            other.grid.size()
        );
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        self.check_grid(other);
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
            real: self.real && other.real,
        }
    }

    /// Sum of two fields on the same grid. Panics if the grids differ.
    pub fn plus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    /// Difference of two fields on the same grid. Panics if the grids differ.
    pub fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            real: self.real,
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            real: self.real && s.im == T::zero(),
        }
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| Complex::new(-c.im, c.re)).collect(),
            real: false,
        }
    }

    /// Coefficients of the complex conjugate function: conj f^(-xi).
    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: (0..self.coeffs.len())
                .map(|i| self.coeffs[self.grid.mirror_index(i)].conj())
                .collect(),
            real: self.real,
        }
    }

    /// (f + conj f) / 2.
    pub fn real_part(&self) -> Self {
        let mut f = self.plus(&self.conj()).scale(T::lit(0.5));
        f.real = true;
        f
    }

    /// (f - conj f) / (2i).
    pub fn imag_part(&self) -> Self {
        let d = self.minus(&self.conj());
        Self {
            grid: self.grid.clone(),
            coeffs: d.coeffs.iter().map(|c| Complex::new(c.im, -c.re) * T::lit(0.5)).collect(),
            real: true,
        }
    }

    /// Zeroes every frequency with max(|xi_1|, |xi_2|) beyond the dealiasing cutoff.
    pub fn dealias(&self) -> Self {
        let k = self.grid.dealias_cutoff();
        self.mask(|xi| xi.max_abs() <= k)
    }

    fn mask(&self, keep: impl Fn(LatticePoint) -> bool) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if keep(self.grid.freq(i)) { c } else { czero() })
                .collect(),
            real: self.real,
        }
    }

    /// Pointwise product followed by dealiasing.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_grid(other);
        let a = self.synthesize();
        let b = other.synthesize();
        let p: Vec<Complex<T>> = a.iter().zip(&b).map(|(&x, &y)| x * y).collect();
        let mut f = Self::analyze(&self.grid, &p).expect("same grid").dealias();
        if self.real && other.real {
            f.symmetrize();
        }
        f
    }

    /// Pointwise map of the spatial samples followed by dealiasing.
    pub fn map_spatial(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let s: Vec<Complex<T>> = self.synthesize().into_iter().map(f).collect();
        Self::analyze(&self.grid, &s).expect("same grid").dealias()
    }

    /// L^2 inner product, integral of f conj(g) = (2 pi)^{-2} sum f^ conj(g^).
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.check_grid(other);
        let s = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(czero::<T>(), |acc, (&a, &b)| acc + a * b.conj());
        s / torus_area::<T>()
    }

    pub fn l2_norm(&self) -> T {
        self.sobolev_norm(T::zero())
    }

    /// ((2 pi)^{-2} sum <xi>^{2s} |f^(xi)|^2)^{1/2}.
    pub fn sobolev_norm(&self, s: T) -> T {
        let sum = self
            .coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, c)| {
                let w = T::from_i64(1 + self.grid.freq(i).norm_sq()).unwrap().powf(s);
                acc + w * c.norm_sqr()
            });
        (sum / torus_area::<T>()).sqrt()
    }

    /// Average (2 pi)^{-2} f^(0).
    pub fn mean(&self) -> Complex<T> {
        self.coeffs[0] / torus_area::<T>()
    }

    /// f minus its mean.
    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = czero();
        f
    }

    /// Applies a Fourier multiplier.
    pub fn apply(&self, m: &dyn Multiplier<T>) -> Result<Self> {
        if m.singular_at_zero() {
            let c0 = self.coeffs[0];
            if c0.re != T::zero() || c0.im != T::zero() {
                return Err(Error::SingularMultiplier {
                    mean_abs: self.mean().norm().as_f64(),
                });
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let xi = self.grid.freq(i);
                if xi.is_zero() && m.singular_at_zero() {
                    czero()
                } else {
                    m.eval(xi) * c
                }
            })
            .collect();
        let mut f = Self {
            grid: self.grid.clone(),
            coeffs,
            real: false,
        };
        if self.real && m.conj_symmetric() {
            f.symmetrize();
        }
        Ok(f)
    }

    /// Applies a multiplier known to be regular at zero.
    pub fn apply_regular(&self, m: &dyn Multiplier<T>) -> Self {
        debug_assert!(!m.singular_at_zero());
        self.apply(m).expect("regular multiplier")
    }

    /// P_k f.
    pub fn lp_project(&self, k: i32) -> Self {
        self.radial_map(|r| phi_k(k, r))
    }

    /// P_{<=B} f.
    pub fn lp_leq(&self, b: T) -> Self {
        self.radial_map(|r| phi_leq(b, r))
    }

    /// P_{>B} f.
    pub fn lp_gt(&self, b: T) -> Self {
        self.radial_map(|r| phi_gt(b, r))
    }

    fn radial_map(&self, w: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * w(self.grid.freq(i).norm()))
                .collect(),
            real: self.real,
        }
    }

    /// (d_1 f, d_2 f).
    pub fn gradient(&self) -> [Self; 2] {
        [self.partial(0), self.partial(1)]
    }

    /// d_j f; Nyquist rows are dropped so real fields stay real.
    pub fn partial(&self, axis: usize) -> Self {
        let h = self.grid.half();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let xi = self.grid.freq(i);
                let k = if axis == 0 { xi.x } else { xi.y };
                if k == -h {
                    czero()
                } else {
                    c * Complex::new(T::zero(), T::from_i64(k).unwrap())
                }
            })
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
            real: self.real,
        }
    }

    pub fn laplacian(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (-T::from_i64(self.grid.freq(i).norm_sq()).unwrap()))
                .collect(),
            real: self.real,
        }
    }

    /// sup over samples of |f(x)|.
    pub fn sup_norm(&self) -> T {
        self.synthesize().iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Largest |xi| carrying a nonzero coefficient.
    pub fn max_frequency(&self) -> T {
        self.support()
            .iter()
            .map(|(xi, _)| xi.norm::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::multiplier::{AbsGrad, Dispersion};
    use crate::DispersionParams;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Grid<f64>, seed: u64) -> FourierField<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FourierField::from_fn(grid, |_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn roundtrip_and_parseval() {
        let g = Grid::<f64>::new(16).unwrap();
        let f = random_field(&g, 1);
        let back = FourierField::analyze(&g, &f.synthesize()).unwrap();
        let err = back.minus(&f).l2_norm() / f.l2_norm();
        assert!(err < 1e-12);
        let s = f.synthesize();
        let spatial: f64 = s.iter().map(|c| c.norm_sqr()).sum::<f64>() * torus_area::<f64>() / g.len() as f64;
        assert!((spatial.sqrt() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn single_mode_norm() {
        let g = Grid::<f64>::new(8).unwrap();
        let f = FourierField::mode(&g, LatticePoint::new(1, 0), Complex::new(1.0, 0.0)).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((f.l2_norm() - two_pi).abs() < 1e-12);
        for s in [0.0, 0.5, 1.0, 3.0] {
            assert!((f.sobolev_norm(s) - two_pi * 2f64.powf(s / 2.0)).abs() < 1e-10);
        }
        let s = f.synthesize();
        assert!((s[g.size()].re - (two_pi / 8.0).cos()).abs() < 1e-14);
    }

    #[test]
    fn real_flag() {
        let g = Grid::<f64>::new(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.random::<f64>()).collect();
        let f = FourierField::analyze_real(&g, &samples).unwrap();
        assert!(f.is_real_valued());
        assert_eq!(f.conjugate_symmetry_defect(), 0.0);
        let back = f.synthesize();
        for (a, b) in back.iter().zip(&samples) {
            assert!((a.re - b).abs() < 1e-13 && a.im.abs() < 1e-13);
        }
        let bad = random_field(&g, 4);
        assert!(FourierField::from_coeffs(&g, bad.coeffs().to_vec(), true).is_err());
        assert!(FourierField::from_coeffs(&g, vec![Complex::new(0.0, 0.0); 3], false).is_err());
    }

    #[test]
    fn multipliers() {
        let g = Grid::<f64>::new(8).unwrap();
        let e1 = FourierField::mode(&g, LatticePoint::new(1, 0), Complex::new(1.0, 0.0)).unwrap();
        let out = e1.apply(&AbsGrad::new(0.5)).unwrap();
        assert!(out.minus(&e1).l2_norm() < 1e-14);
        let p = DispersionParams::new(1.0, 1.0).unwrap();
        let m2 = FourierField::mode(&g, LatticePoint::new(2, 0), Complex::new(1.0, 0.0)).unwrap();
        let out = m2.apply(&Dispersion::new(p)).unwrap();
        assert!(out.minus(&m2.scale(10f64.sqrt())).l2_norm() < 1e-12);
        let c = FourierField::mode(&g, LatticePoint::ZERO, Complex::new(1.0, 0.0)).unwrap();
        assert!(matches!(c.apply(&AbsGrad::new(-0.5)), Err(Error::SingularMultiplier { .. })));
    }

    #[test]
    fn mean_and_projections() {
        let g = Grid::<f64>::new(16).unwrap();
        let f = random_field(&g, 5);
        assert_eq!(f.mean(), f.coeff(LatticePoint::ZERO) / torus_area::<f64>());
        for k in -5..0 {
            assert_eq!(f.lp_project(k).l2_norm(), 0.0);
        }
        let total = (0..=4).fold(FourierField::zeros(&g), |acc, k| acc.plus(&f.lp_project(k)));
        let leq = f.lp_leq(4.0).without_mean();
        assert!(total.minus(&leq).l2_norm() < 1e-12);
    }

    #[test]
    fn product_of_real_modes() {
        let g = Grid::<f64>::new(16).unwrap();
        let c = FourierField::from_spatial_real(&g, |x, _| x.cos());
        let s = FourierField::from_spatial_real(&g, |x, _| x.sin());
        let p = c.mul(&s);
        let expected = FourierField::from_spatial_real(&g, |x, _| 0.5 * (2.0 * x).sin());
        assert!(p.minus(&expected).l2_norm() < 1e-12);
        assert!(p.is_real_valued());
    }

    #[test]
    fn real_and_imaginary_parts() {
        let g = Grid::<f64>::new(8).unwrap();
        let f = random_field(&g, 7);
        let recombined = f.real_part().plus(&f.imag_part().times_i());
        assert!(recombined.minus(&f).l2_norm() < 1e-13);
        assert!(f.real_part().conjugate_symmetry_defect() < 1e-15);
    }
}
