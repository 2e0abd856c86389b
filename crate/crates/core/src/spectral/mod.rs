//! Box geometry, basis families, transforms, and spectral operators.

pub mod domain;
pub mod field;
pub mod ops;
pub mod transform;

pub use domain::{AxisBasis, BasisFamily, BoxDomain, Parity};
pub use field::{Collocation, ScalarKind, SpectralScalar, SpectralVector};
pub use ops::NormKind;
pub use transform::Direction;

/// Builds a box domain with edge lengths `lengths` and `modes` per axis.
pub fn make_domain<T: crate::num::Real>(
    lengths: [T; 3],
    modes: [usize; 3],
) -> crate::error::Result<BoxDomain<T>> {
    BoxDomain::new(lengths, modes)
}
