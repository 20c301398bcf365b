//! Fourier representation of functions on T^2.

mod cutoff;
mod field;
mod grid;
mod multiplier;
mod snapshot;

pub use cutoff::{phi, phi_gt, phi_k, phi_leq, CutoffProfile};
pub use field::FourierField;
pub use grid::Grid;
pub use multiplier::{
    AbsGrad, Bracket, Dispersion, FnMultiplier, GravityCapillary, Laplacian, LinearFlow, Multiplier, Partial,
    ShellProjector,
};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotHeader};

/// 4 pi^2, the measure of T^2.
#[inline]
pub fn torus_area<T: crate::Real>() -> T {
    T::lit(4.0) * T::PI() * T::PI()
}
