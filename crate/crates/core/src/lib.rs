//! Pseudospectral simulation of the damped driven Maxwell-Schrodinger system in a
//! rectangular conducting cavity, with numerical checks of its a priori estimates.
//!
//! Field, operator and dynamics code is generic over [`Real`]; the aliases below
//! fix the scalar to `f64`. Eigenvalue estimates always run in `f64`.

pub mod drive;
pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod gauge;
pub mod matter;
pub mod num;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use num::Real;

pub type Domain = spectral::BoxDomain<f64>;
pub type Scalar = spectral::SpectralScalar<f64>;
pub type Vector = spectral::SpectralVector<f64>;
pub type Grid = spectral::Collocation<f64>;
pub type Potentials = matter::PotentialSet<f64>;
pub type Pump = drive::PumpSpec<f64>;
pub type Params = dynamics::Params<f64>;
pub type State = dynamics::State<f64>;
pub type System = dynamics::System<f64>;
pub type Row = dynamics::DiagnosticsRow<f64>;
