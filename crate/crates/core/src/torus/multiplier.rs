use num_complex::Complex;

use super::cutoff::{phi_gt, phi_k, phi_leq};
use crate::dispersion::DispersionParams;
use crate::lattice::LatticePoint;
use crate::scalar::Real;

/// A Fourier multiplier xi -> m(xi).
pub trait Multiplier<T>: Sync {
    fn eval(&self, xi: LatticePoint) -> Complex<T>;

    /// The multiplier is undefined at xi = 0; inputs must have zero mean.
    fn singular_at_zero(&self) -> bool {
        false
    }

    /// m(-xi) = conj m(xi), so real fields stay real.
    fn conj_symmetric(&self) -> bool {
        false
    }
}

#[inline]
fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// |xi|^s.
#[derive(Copy, Clone, Debug)]
pub struct AbsGrad<T> {
    pub s: T,
}

impl<T: Real> AbsGrad<T> {
    pub fn new(s: T) -> Self {
        Self { s }
    }
}

impl<T: Real> Multiplier<T> for AbsGrad<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        if xi.is_zero() {
            return re(if self.s == T::zero() { T::one() } else { T::zero() });
        }
        re(T::from_int(xi.norm_sq()).powf(self.s * T::lit(0.5)))
    }
    fn singular_at_zero(&self) -> bool {
        self.s < T::zero()
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// <xi>^s.
#[derive(Copy, Clone, Debug)]
pub struct Bracket<T> {
    pub s: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(s: T) -> Self {
        Self { s }
    }
}

impl<T: Real> Multiplier<T> for Bracket<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        re(T::from_int(1 + xi.norm_sq()).powf(self.s * T::lit(0.5)))
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// Lambda(xi)^power.
#[derive(Copy, Clone, Debug)]
pub struct Dispersion<T> {
    pub params: DispersionParams<T>,
    pub power: i32,
}

impl<T: Real> Dispersion<T> {
    pub fn new(params: DispersionParams<T>) -> Self {
        Self { params, power: 1 }
    }

    pub fn power(params: DispersionParams<T>, power: i32) -> Self {
        Self { params, power }
    }
}

impl<T: Real> Multiplier<T> for Dispersion<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        if xi.is_zero() {
            return re(if self.power == 0 { T::one() } else { T::zero() });
        }
        re(self.params.lambda(xi).powi(self.power))
    }
    fn singular_at_zero(&self) -> bool {
        self.power < 0
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// (g + sigma |xi|^2)^power.
#[derive(Copy, Clone, Debug)]
pub struct GravityCapillary<T> {
    pub params: DispersionParams<T>,
    pub power: T,
}

impl<T: Real> GravityCapillary<T> {
    pub fn new(params: DispersionParams<T>, power: T) -> Self {
        Self { params, power }
    }
}

impl<T: Real> Multiplier<T> for GravityCapillary<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        let v = self.params.g() + self.params.sigma() * T::from_int(xi.norm_sq());
        re(v.powf(self.power))
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// i xi_j.
#[derive(Copy, Clone, Debug)]
pub struct Partial {
    pub axis: usize,
}

impl<T: Real> Multiplier<T> for Partial {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        let k = if self.axis == 0 { xi.x } else { xi.y };
        Complex::new(T::zero(), T::from_int(k))
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// -|xi|^2.
#[derive(Copy, Clone, Debug)]
pub struct Laplacian;

impl<T: Real> Multiplier<T> for Laplacian {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        re(-T::from_int(xi.norm_sq()))
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// e^{-i tau Lambda(xi)}, the linear flow over time tau.
#[derive(Copy, Clone, Debug)]
pub struct LinearFlow<T> {
    pub params: DispersionParams<T>,
    pub tau: T,
}

impl<T: Real> Multiplier<T> for LinearFlow<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        let a = -self.tau * self.params.lambda(xi);
        Complex::new(a.cos(), a.sin())
    }
}

/// Littlewood-Paley multipliers phi_k, phi_{<=B}, phi_{>B}.
#[derive(Copy, Clone, Debug)]
pub enum ShellProjector<T> {
    Shell(i32),
    AtMost(T),
    Above(T),
}

impl<T: Real> Multiplier<T> for ShellProjector<T> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        let r: T = xi.norm();
        re(match *self {
            ShellProjector::Shell(k) => phi_k(k, r),
            ShellProjector::AtMost(b) => phi_leq(b, r),
            ShellProjector::Above(b) => phi_gt(b, r),
        })
    }
    fn conj_symmetric(&self) -> bool {
        true
    }
}

/// Multiplier from a closure.
pub struct FnMultiplier<F> {
    f: F,
    singular: bool,
    conj_symmetric: bool,
}

impl<F> FnMultiplier<F> {
    pub fn new(f: F) -> Self {
        Self {
            f,
            singular: false,
            conj_symmetric: false,
        }
    }

    pub fn singular(mut self) -> Self {
        self.singular = true;
        self
    }

    pub fn conj_symmetric(mut self) -> Self {
        self.conj_symmetric = true;
        self
    }
}

impl<T: Real, F: Fn(LatticePoint) -> Complex<T> + Sync> Multiplier<T> for FnMultiplier<F> {
    fn eval(&self, xi: LatticePoint) -> Complex<T> {
        (self.f)(xi)
    }
    fn singular_at_zero(&self) -> bool {
        self.singular
    }
    fn conj_symmetric(&self) -> bool {
        self.conj_symmetric
    }
}
