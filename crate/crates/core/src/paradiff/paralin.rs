use super::symbol::Symbol;
use super::weyl::weyl_apply;
use super::ParadiffConfig;
use crate::error::{invalid, Error, Result};
use crate::lattice::LatticePoint;
use crate::scalar::{FftReal, Real};
use crate::torus::{AbsGrad, FourierField};

/// H(f, g) = fg - T_f g - T_g f with the product dealiased.
pub fn paralin_remainder<T: FftReal>(f: &FourierField<T>, g: &FourierField<T>, cfg: &ParadiffConfig) -> Result<FourierField<T>> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch {
            left: f.grid().size(),
            right: g.grid().size(),
        });
    }
    let tfg = weyl_apply(&Symbol::function(f), g, cfg)?;
    let tgf = weyl_apply(&Symbol::function(g), f, cfg)?;
    Ok(f.mul(g).minus(&tfg).minus(&tgf).dealias())
}

/// Kernel a_p(v, w) of H: the coefficient of f^(v) g^(w) at output v + w, divided by (4 pi^2)^{-1}.
pub fn paralin_kernel<T: Real>(v: LatticePoint, w: LatticePoint, cfg: &ParadiffConfig) -> T {
    if (v + w).is_zero() {
        return T::one();
    }
    let part = |p: LatticePoint, q: LatticePoint| {
        let s = p + q + q;
        if s.is_zero() {
            T::zero()
        } else {
            cfg.chi(p.norm::<T>() / s.norm::<T>())
        }
    };
    T::one() - part(v, w) - part(w, v)
}

/// Omega_2 = H(|grad| w, |grad| w)/2 - sum_i H(d_i w, d_i w)/2.
pub fn omega2<T: FftReal>(omega: &FourierField<T>, cfg: &ParadiffConfig) -> Result<FourierField<T>> {
    let a = omega.apply_regular(&AbsGrad::new(T::one()));
    let [d1, d2] = omega.gradient();
    let h = T::lit(0.5);
    Ok(paralin_remainder(&a, &a, cfg)?
        .minus(&paralin_remainder(&d1, &d1, cfg)?)
        .minus(&paralin_remainder(&d2, &d2, cfg)?)
        .scale(h))
}

fn polyval<T: FftReal>(c: &[T], z: num_complex::Complex<T>) -> num_complex::Complex<T> {
    c.iter().rev().fold(num_complex::Complex::new(T::zero(), T::zero()), |acc, &ck| acc * z + ck)
}

/// E(u) = F(u) - T_{F'(u)} u for F(z) = sum_k c_k z^k with F(z) = z + O(z^3).
pub fn paracomposition_remainder<T: FftReal>(coeffs: &[T], u: &FourierField<T>, cfg: &ParadiffConfig) -> Result<FourierField<T>> {
    let c = |k: usize| coeffs.get(k).copied().unwrap_or(T::zero());
    if c(0) != T::zero() || c(1) != T::one() || c(2) != T::zero() {
        return Err(invalid("coeffs", "F must be z + O(z^3)"));
    }
    let deriv: Vec<T> = coeffs.iter().enumerate().skip(1).map(|(k, &ck)| ck * T::from_usize(k).unwrap()).collect();
    let owned = coeffs.to_vec();
    let fu = u.map_spatial(move |z| polyval(&owned, z));
    let dfu = u.map_spatial(move |z| polyval(&deriv, z));
    Ok(fu.minus(&weyl_apply(&Symbol::function(&dfu), u, cfg)?).dealias())
}
