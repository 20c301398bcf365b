//! Numerical laboratory for gravity-capillary water waves on the torus T^2.

pub mod dispersion;
pub mod energy;
pub mod paradiff;
pub mod torus;
pub mod error;
pub mod fit;
pub mod goodvariable;
pub mod lattice;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use lattice::LatticePoint;
pub use scalar::{Extended, FftReal, Real};

/// Dispersion parameters in double precision.
pub type Params = dispersion::DispersionParams<f64>;
/// Grid in double precision.
pub type Grid = torus::Grid<f64>;
/// Field in double precision.
pub type Field = torus::FourierField<f64>;

pub use dispersion::DispersionParams;
