//! Coulomb gauge: Leray projection, the Dirichlet Poisson solve for the scalar
//! potential, and boundary-condition diagnostics.

use crate::error::Result;
use crate::num::Real;
use crate::spectral::domain::{flat_index, AxisBasis, BasisFamily, BoxDomain, Parity};
use crate::spectral::field::{for_each_mode, SpectralScalar, SpectralVector};
use crate::spectral::transform::evaluate_on;

/// Visits every wave index with all three components present (`k_i >= 1`),
/// handing over the flat storage index of each `MaxwellVector` component.
pub(crate) fn for_each_full_mode<T: Real>(
    domain: &BoxDomain<T>,
    mut f: impl FnMut([usize; 3], [T; 3]),
) {
    let n = domain.modes();
    let shapes = [0, 1, 2].map(|c| domain.coeff_shape(BasisFamily::MaxwellVector.parity(c)));
    let kap = [0, 1, 2].map(|i| &domain.axis(i).kappa);
    for k0 in 1..=n[0] {
        for k1 in 1..=n[1] {
            for k2 in 1..=n[2] {
                let k = [k0, k1, k2];
                let idx = [0, 1, 2].map(|c| {
                    let s = [0, 1, 2].map(|ax| if ax == c { k[ax] } else { k[ax] - 1 });
                    flat_index(shapes[c], s)
                });
                f(idx, [kap[0][k0], kap[1][k1], kap[2][k2]]);
            }
        }
    }
}

/// In-place projection of raw `MaxwellVector` component arrays.
pub(crate) fn leray_in_place<T: Real>(domain: &BoxDomain<T>, comps: &mut [Vec<T>; 3]) {
    // modes with a zero index carry a single component and are already solenoidal
    for_each_full_mode(domain, |idx, kv| {
        let dot = kv[0] * comps[0][idx[0]] + kv[1] * comps[1][idx[1]] + kv[2] * comps[2][idx[2]];
        let s = dot / (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
        for c in 0..3 {
            comps[c][idx[c]] -= s * kv[c];
        }
    });
}

/// Orthogonal projection onto divergence-free `MaxwellVector` fields.
pub fn leray_project<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
) -> Result<SpectralVector<T>> {
    v.check_family(BasisFamily::MaxwellVector)?;
    v.check_domain(domain)?;
    let mut out = v.clone();
    leray_in_place(domain, &mut out.comps);
    Ok(out)
}

fn inverse_laplacian<T: Real>(domain: &BoxDomain<T>, c: &[T]) -> Vec<T> {
    let mut out = c.to_vec();
    for_each_mode(domain, SpectralScalar::<T>::parity(), |i, _, kv| {
        out[i] = c[i] / (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
    });
    out
}

/// Solves `-Laplace A0 = rho` with `A0 = 0` on the walls.
pub fn solve_a0<T: Real>(domain: &BoxDomain<T>, rho: &SpectralScalar<T>) -> Result<SpectralScalar<T>> {
    rho.check_domain(domain)?;
    SpectralScalar::from_parts(
        domain,
        inverse_laplacian(domain, &rho.re),
        rho.im.as_ref().map(|im| inverse_laplacian(domain, im)),
    )
}

/// `<rho, (-Laplace)^{-1} rho> = sum_k |c_k|^2 / |kappa|^2`.
pub fn coulomb_energy<T: Real>(domain: &BoxDomain<T>, rho: &SpectralScalar<T>) -> Result<T> {
    rho.check_domain(domain)?;
    let im = rho.im_or_zeros();
    let mut s = T::zero();
    for_each_mode(domain, SpectralScalar::<T>::parity(), |i, _, kv| {
        s += (rho.re[i] * rho.re[i] + im[i] * im[i]) / (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
    });
    Ok(s)
}

/// Fields whose boundary values can be checked face by face.
pub trait BoundaryField<T: Real> {
    /// `(coefficients, declared parity)` per component.
    fn components(&self) -> Vec<(&[T], Parity)>;
}

impl<T: Real> BoundaryField<T> for SpectralScalar<T> {
    fn components(&self) -> Vec<(&[T], Parity)> {
        let p = SpectralScalar::<T>::parity();
        let mut out = vec![(self.re.as_slice(), p)];
        if let Some(im) = &self.im {
            out.push((im.as_slice(), p));
        }
        out
    }
}

impl<T: Real> BoundaryField<T> for SpectralVector<T> {
    fn components(&self) -> Vec<(&[T], Parity)> {
        let fam = self.family();
        (0..3).map(|c| (self.comps[c].as_slice(), fam.parity(c))).collect()
    }
}

/// Points per face direction used by the residual check.
fn surface_points<T: Real>(length: T, n: usize) -> Vec<T> {
    let m = 4 * n + 1;
    (0..m)
        .map(|i| length * T::from_usize_lossy(i) / T::from_usize_lossy(m - 1))
        .collect()
}

/// Max boundary value of one component evaluated with `eval` parity, over the
/// faces where the `declared` parity demands a zero (sine axes).
pub fn component_boundary_residual<T: Real>(
    domain: &BoxDomain<T>,
    coeffs: &[T],
    declared: Parity,
    eval: Parity,
) -> T {
    let lengths = domain.lengths();
    let n = domain.modes();
    let mut worst = T::zero();
    for axis in 0..3 {
        if declared[axis] != AxisBasis::Sine {
            continue;
        }
        for wall in [T::zero(), lengths[axis]] {
            let wall_pt = [wall];
            let grids: [Vec<T>; 3] = [0, 1, 2].map(|i| {
                if i == axis {
                    wall_pt.to_vec()
                } else {
                    surface_points(lengths[i], n[i])
                }
            });
            let vals = evaluate_on(domain, coeffs, eval, [&grids[0], &grids[1], &grids[2]]);
            for v in vals {
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// Max violation of the wall conditions: the full value for scalar fields,
/// tangential components for `MaxwellVector` fields, the normal component for
/// `CurlDualVector` fields.
pub fn boundary_residual<T: Real>(domain: &BoxDomain<T>, f: &impl BoundaryField<T>) -> T {
    f.components()
        .into_iter()
        .map(|(c, p)| component_boundary_residual(domain, c, p, p))
        .fold(T::zero(), T::max)
}
