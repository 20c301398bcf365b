use std::sync::Arc;

use num_complex::Complex;

use crate::dispersion::DispersionParams;
use crate::scalar::Real;

/// Step of the central differences in zeta, compatible with the half-integer lattice.
pub const FD_STEP: f64 = 0.25;

type Value<T> = Arc<dyn Fn([T; 2]) -> Complex<T> + Send + Sync>;
type Gradient<T> = Arc<dyn Fn([T; 2]) -> [Complex<T>; 2] + Send + Sync>;

/// A function of the frequency variable zeta, optionally with an exact gradient.
#[derive(Clone)]
pub struct ZetaFn<T> {
    value: Value<T>,
    gradient: Option<Gradient<T>>,
}

impl<T> std::fmt::Debug for ZetaFn<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ZetaFn")
            .field("exact_gradient", &self.gradient.is_some())
            .finish()
    }
}

#[inline]
fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
fn norm2<T: Real>(z: [T; 2]) -> T {
    z[0] * z[0] + z[1] * z[1]
}

impl<T: Real> ZetaFn<T> {
    pub fn new(f: impl Fn([T; 2]) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(f),
            gradient: None,
        }
    }

    /// Real-valued function.
    pub fn real(f: impl Fn([T; 2]) -> T + Send + Sync + 'static) -> Self {
        Self::new(move |z| re(f(z)))
    }

    pub fn with_gradient(mut self, g: impl Fn([T; 2]) -> [Complex<T>; 2] + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_real_gradient(self, g: impl Fn([T; 2]) -> [T; 2] + Send + Sync + 'static) -> Self {
        self.with_gradient(move |z| {
            let [a, b] = g(z);
            [re(a), re(b)]
        })
    }

    #[inline]
    pub fn eval(&self, z: [T; 2]) -> Complex<T> {
        (self.value)(z)
    }

    pub fn has_exact_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    /// Exact gradient if supplied, otherwise central differences with step 1/4.
    pub fn gradient(&self, z: [T; 2]) -> [Complex<T>; 2] {
        match &self.gradient {
            Some(g) => g(z),
            None => {
                let h = T::lit(FD_STEP);
                let d = |j: usize| {
                    let mut p = z;
                    let mut m = z;
                    p[j] = p[j] + h;
                    m[j] = m[j] - h;
                    (self.eval(p) - self.eval(m)) / (h + h)
                };
                [d(0), d(1)]
            }
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        let zero = re(T::zero());
        Self::new(move |_| c).with_gradient(move |_| [zero, zero])
    }

    pub fn one() -> Self {
        Self::constant(re(T::one()))
    }

    /// |zeta|^p.
    pub fn abs_power(p: T) -> Self {
        Self::real(move |z| norm2(z).powf(p * T::lit(0.5))).with_real_gradient(move |z| {
            let n2 = norm2(z);
            let c = p * n2.powf(p * T::lit(0.5) - T::one());
            [c * z[0], c * z[1]]
        })
    }

    /// zeta_j.
    pub fn component(j: usize) -> Self {
        Self::real(move |z| z[j]).with_real_gradient(move |_| {
            let mut g = [T::zero(); 2];
            g[j] = T::one();
            g
        })
    }

    /// zeta_i zeta_j / |zeta|^2.
    pub fn angular(i: usize, j: usize) -> Self {
        Self::real(move |z| z[i] * z[j] / norm2(z)).with_real_gradient(move |z| {
            let n2 = norm2(z);
            let mut g = [T::zero(); 2];
            for (k, gk) in g.iter_mut().enumerate() {
                let mut v = T::zero();
                if k == i {
                    v = v + z[j];
                }
                if k == j {
                    v = v + z[i];
                }
                *gk = v / n2 - T::lit(2.0) * z[i] * z[j] * z[k] / (n2 * n2);
            }
            g
        })
    }

    /// Lambda(zeta)^p for real p.
    pub fn dispersion_power(params: DispersionParams<T>, p: T) -> Self {
        Self::real(move |z| params.lambda_at(z).powf(p)).with_real_gradient(move |z| {
            let r = z[0].hypot(z[1]);
            let lam = params.lambda_at(z);
            // dLambda/dr = (g + 3 sigma r^2) / (2 Lambda).
            let dl = (params.g() + T::lit(3.0) * params.sigma() * r * r) / (T::lit(2.0) * lam);
            let c = p * lam.powf(p - T::one()) * dl / r;
            [c * z[0], c * z[1]]
        })
    }

    pub fn dispersion(params: DispersionParams<T>) -> Self {
        Self::dispersion_power(params, T::one())
    }

    /// (g + sigma |zeta|^2)^p.
    pub fn gravity_capillary(params: DispersionParams<T>, p: T) -> Self {
        Self::real(move |z| (params.g() + params.sigma() * norm2(z)).powf(p)).with_real_gradient(move |z| {
            let base = params.g() + params.sigma() * norm2(z);
            let c = T::lit(2.0) * p * params.sigma() * base.powf(p - T::one());
            [c * z[0], c * z[1]]
        })
    }

    /// Pointwise product, exact gradient when both factors have one.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let f = Self::new(move |z| a.eval(z) * b.eval(z));
        if self.has_exact_gradient() && other.has_exact_gradient() {
            let (a, b) = (self.clone(), other.clone());
            f.with_gradient(move |z| {
                let (va, vb) = (a.eval(z), b.eval(z));
                let (ga, gb) = (a.gradient(z), b.gradient(z));
                [ga[0] * vb + va * gb[0], ga[1] * vb + va * gb[1]]
            })
        } else {
            f
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let f = Self::new(move |z| a.eval(z) + b.eval(z));
        if self.has_exact_gradient() && other.has_exact_gradient() {
            let (a, b) = (self.clone(), other.clone());
            f.with_gradient(move |z| {
                let (ga, gb) = (a.gradient(z), b.gradient(z));
                [ga[0] + gb[0], ga[1] + gb[1]]
            })
        } else {
            f
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let a = self.clone();
        let f = Self::new(move |z| a.eval(z) * c);
        if self.has_exact_gradient() {
            let a = self.clone();
            f.with_gradient(move |z| {
                let g = a.gradient(z);
                [g[0] * c, g[1] * c]
            })
        } else {
            f
        }
    }

    /// d/d zeta_j as a new function (gradient by differencing).
    pub fn partial(&self, j: usize) -> Self {
        let a = self.clone();
        Self::new(move |z| a.gradient(z)[j])
    }

    /// zeta -> conj p(-zeta).
    pub fn reflect_conj(&self) -> Self {
        let a = self.clone();
        let f = Self::new(move |z| a.eval([-z[0], -z[1]]).conj());
        if self.has_exact_gradient() {
            let a = self.clone();
            f.with_gradient(move |z| {
                let g = a.gradient([-z[0], -z[1]]);
                [-g[0].conj(), -g[1].conj()]
            })
        } else {
            f
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_gradient(f: &ZetaFn<f64>, z: [f64; 2]) {
        let exact = f.gradient(z);
        let h = 1e-6;
        for j in 0..2 {
            let mut p = z;
            let mut m = z;
            p[j] += h;
            m[j] -= h;
            let fd = (f.eval(p) - f.eval(m)) / (2.0 * h);
            assert!((fd - exact[j]).norm() < 1e-6 * (1.0 + fd.norm()), "{fd} vs {}", exact[j]);
        }
    }

    #[test]
    fn exact_gradients_match_differences() {
        let p = DispersionParams::new(2f64.sqrt(), 1.0).unwrap();
        let z = [1.5, -2.0];
        for f in [
            ZetaFn::abs_power(0.5),
            ZetaFn::abs_power(-1.0),
            ZetaFn::component(1),
            ZetaFn::angular(0, 1),
            ZetaFn::angular(0, 0),
            ZetaFn::dispersion(p),
            ZetaFn::dispersion_power(p, -0.5),
            ZetaFn::gravity_capillary(p, 0.5),
            ZetaFn::abs_power(2.0).mul(&ZetaFn::component(0)),
            ZetaFn::dispersion(p).reflect_conj(),
        ] {
            check_gradient(&f, z);
        }
    }

    #[test]
    fn differenced_gradient_of_quadratic_is_exact() {
        let f: ZetaFn<f64> = ZetaFn::real(|z| z[0] * z[0] + 3.0 * z[0] * z[1]);
        let g = f.gradient([1.0, 2.0]);
        assert!((g[0].re - 8.0).abs() < 1e-14 && (g[1].re - 3.0).abs() < 1e-14);
    }
}
