use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::lattice::LatticePoint;
use crate::scalar::FftReal;

/// Uniform M x M grid on T^2, frequencies Z^2 cap [-M/2, M/2)^2 in FFT order.
#[derive(Clone)]
pub struct Grid<T: FftReal> {
    size: usize,
    dealias_fraction: f64,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: FftReal> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("size", &self.size)
            .field("dealias_fraction", &self.dealias_fraction)
            .finish()
    }
}

impl<T: FftReal> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.dealias_fraction == other.dealias_fraction
    }
}

impl<T: FftReal> Grid<T> {
    pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

    pub fn new(size: usize) -> Result<Self> {
        Self::with_dealias(size, Self::DEFAULT_DEALIAS)
    }

    pub fn with_dealias(size: usize, dealias_fraction: f64) -> Result<Self> {
        if size < 4 || size % 2 != 0 {
            return Err(invalid("grid", format!("size must be even and at least 4, got {size}")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(invalid("dealias_fraction", format!("must lie in (0, 1], got {dealias_fraction}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            size,
            dealias_fraction,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of samples M^2.
    #[inline]
    pub fn len(&self) -> usize {
        self.size * self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn half(&self) -> i64 {
        (self.size / 2) as i64
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Largest retained |xi_j| after dealiasing.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.dealias_fraction * self.half() as f64 + 1e-9).floor() as i64
    }

    #[inline]
    fn wrap(&self, i: usize) -> i64 {
        let m = self.size as i64;
        let i = i as i64;
        if i < m / 2 {
            i
        } else {
            i - m
        }
    }

    #[inline]
    pub fn freq(&self, index: usize) -> LatticePoint {
        LatticePoint::new(self.wrap(index / self.size), self.wrap(index % self.size))
    }

    #[inline]
    fn slot(&self, k: i64) -> Option<usize> {
        let h = self.half();
        if k < -h || k >= h {
            return None;
        }
        let m = self.size as i64;
        Some(if k >= 0 { k as usize } else { (k + m) as usize })
    }

    /// Storage index of a frequency, if it lies on the grid.
    #[inline]
    pub fn index(&self, xi: LatticePoint) -> Option<usize> {
        Some(self.slot(xi.x)? * self.size + self.slot(xi.y)?)
    }

    /// Storage index of a frequency whose mirror image is also on the grid (no Nyquist coordinate).
    #[inline]
    pub fn symmetric_index(&self, xi: LatticePoint) -> Option<usize> {
        if xi.max_abs() >= self.half() {
            return None;
        }
        self.index(xi)
    }

    /// Index of -xi modulo the grid.
    #[inline]
    pub fn mirror_index(&self, index: usize) -> usize {
        let m = self.size;
        let (i, j) = (index / m, index % m);
        ((m - i) % m) * m + (m - j) % m
    }

    #[inline]
    pub fn contains(&self, xi: LatticePoint) -> bool {
        self.index(xi).is_some()
    }

    #[inline]
    pub fn is_dealiased(&self, xi: LatticePoint) -> bool {
        xi.max_abs() <= self.dealias_cutoff()
    }

    /// All frequencies in storage order.
    pub fn frequencies(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.len()).map(move |i| self.freq(i))
    }

    /// Sample point x_j = 2 pi j / M.
    #[inline]
    pub fn coordinate(&self, j: usize) -> T {
        T::lit(2.0) * T::PI() * T::from_usize(j).unwrap() / T::from_usize(self.size).unwrap()
    }

    fn transpose(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        let m = self.size;
        for i in 0..m {
            for j in 0..m {
                scratch[j * m + i] = data[i * m + j];
            }
        }
        data.copy_from_slice(scratch);
    }

    fn fft2(&self, plan: &Arc<dyn Fft<T>>, data: &mut [Complex<T>]) {
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); data.len()];
        plan.process(data);
        self.transpose(data, &mut scratch);
        plan.process(data);
        self.transpose(data, &mut scratch);
    }

    /// Unnormalized forward DFT over both axes.
    pub fn dft_forward(&self, data: &mut [Complex<T>]) {
        self.fft2(&self.forward, data);
    }

    /// Unnormalized inverse DFT over both axes.
    pub fn dft_inverse(&self, data: &mut [Complex<T>]) {
        self.fft2(&self.inverse, data);
    }
}
