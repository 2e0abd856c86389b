//! External potential presets and the trigonometric pumping field `A_p(x, t)`.

use crate::error::{Error, Result};
use crate::gauge::leray_project;
use crate::matter::PotentialSet;
use crate::num::Real;
use crate::spectral::domain::{BasisFamily, BoxDomain};
use crate::spectral::field::{Collocation, SpectralVector};
use crate::spectral::ops::jacobian_nodal;

/// Static potential shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiPreset<T> {
    /// `phi = value`.
    Constant { value: T },
    /// `phi = offset + scale * prod_i x_i (L_i - x_i)`; the minimum `offset` sits on the walls.
    Well { offset: T, scale: T },
    /// `phi = offset - charge / sqrt(|x - center|^2 + softening^2)`.
    SoftCoulomb {
        offset: T,
        charge: T,
        softening: T,
        center: [T; 3],
    },
}

/// Samples a preset on the collocation grid and validates `min phi > 0`.
pub fn phi_preset<T: Real>(
    domain: &BoxDomain<T>,
    preset: PhiPreset<T>,
    coulomb: bool,
) -> Result<PotentialSet<T>> {
    let l = domain.lengths();
    let phi = match preset {
        PhiPreset::Constant { value } => Collocation::constant(domain, value),
        PhiPreset::Well { offset, scale } => Collocation::from_fn(domain, |x| {
            offset + scale * (0..3).map(|i| x[i] * (l[i] - x[i])).fold(T::one(), |a, b| a * b)
        }),
        PhiPreset::SoftCoulomb {
            offset,
            charge,
            softening,
            center,
        } => {
            if softening <= T::zero() {
                return Err(Error::InvalidPotential("softening length must be > 0".into()));
            }
            Collocation::from_fn(domain, |x| {
                let r2: T = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum();
                offset - charge / (r2 + softening * softening).sqrt()
            })
        }
    };
    PotentialSet::new(domain, phi, coulomb)
}

/// One pumping term `c cos(omega t + theta) e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpTerm<T> {
    /// Wave indices of the `MaxwellVector` mode.
    pub mode: [usize; 3],
    /// Component pattern before projection and normalization.
    pub pattern: [T; 3],
    pub amplitude: T,
    pub omega: T,
    pub phase: T,
}

/// A finite trigonometric sum of solenoidal, unit-`L^2` profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpec<T> {
    terms: Vec<PumpTerm<T>>,
    profiles: Vec<SpectralVector<T>>,
    zero: SpectralVector<T>,
}

impl<T: Real> PumpSpec<T> {
    pub fn new(domain: &BoxDomain<T>, terms: Vec<PumpTerm<T>>) -> Result<Self> {
        let n = domain.modes();
        let mut profiles = Vec::with_capacity(terms.len());
        for (m, term) in terms.iter().enumerate() {
            if term.mode.iter().zip(n).any(|(&k, n)| k > n) {
                return Err(Error::InvalidPump(format!(
                    "term {m}: mode {:?} exceeds the grid {:?}",
                    term.mode, n
                )));
            }
            if ![term.amplitude, term.omega, term.phase].iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidPump(format!("term {m}: non-finite value")));
            }
            let raw = SpectralVector::mode(domain, BasisFamily::MaxwellVector, term.mode, term.pattern);
            let e = leray_project(domain, &raw)?;
            let norm = e.norm_sq().sqrt();
            if norm <= T::lit(1e-12) {
                return Err(Error::InvalidPump(format!(
                    "term {m}: mode {:?} with pattern {:?} has no solenoidal part",
                    term.mode, term.pattern
                )));
            }
            profiles.push(e.scaled(T::one() / norm));
        }
        Ok(Self {
            terms,
            profiles,
            zero: SpectralVector::zeros(domain, BasisFamily::MaxwellVector),
        })
    }

    /// No pumping.
    pub fn none(domain: &BoxDomain<T>) -> Self {
        Self::new(domain, Vec::new()).expect("empty pump is valid")
    }

    pub fn terms(&self) -> &[PumpTerm<T>] {
        &self.terms
    }

    pub fn profiles(&self) -> &[SpectralVector<T>] {
        &self.profiles
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when `A_p` does not depend on time.
    pub fn is_static(&self) -> bool {
        self.terms.iter().all(|t| t.omega == T::zero())
    }

    /// Same spec with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.amplitude = t.amplitude * factor;
        }
        out
    }

    /// `A_p(t)` alone.
    pub fn field(&self, t: T) -> SpectralVector<T> {
        let mut a = self.zero.clone();
        for (term, e) in self.terms.iter().zip(&self.profiles) {
            a.add_scaled(term.amplitude * (term.omega * t + term.phase).cos(), e);
        }
        a
    }
}

/// `(A_p(t), dA_p/dt(t))` with exact trigonometric time dependence.
pub fn pump_eval<T: Real>(spec: &PumpSpec<T>, t: T) -> (SpectralVector<T>, SpectralVector<T>) {
    let mut a = spec.zero.clone();
    let mut da = spec.zero.clone();
    for (term, e) in spec.terms.iter().zip(&spec.profiles) {
        let arg = term.omega * t + term.phase;
        a.add_scaled(term.amplitude * arg.cos(), e);
        da.add_scaled(-term.amplitude * term.omega * arg.sin(), e);
    }
    (a, da)
}

/// Nodal sup norms of `A_p`, `grad A_p`, and `dA_p/dt` over a time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpBounds<T> {
    pub sup_field: T,
    pub sup_gradient: T,
    pub sup_rate: T,
}

impl<T: Real> PumpBounds<T> {
    pub fn total(&self) -> T {
        self.sup_field + self.sup_gradient + self.sup_rate
    }
}

fn sup_modulus<T: Real>(comps: &[&[T]]) -> T {
    let n = comps[0].len();
    (0..n)
        .map(|i| comps.iter().map(|c| c[i] * c[i]).sum::<T>().sqrt())
        .fold(T::zero(), T::max)
}

pub fn pump_bounds<T: Real>(domain: &BoxDomain<T>, spec: &PumpSpec<T>, times: &[T]) -> PumpBounds<T> {
    let mut b = PumpBounds {
        sup_field: T::zero(),
        sup_gradient: T::zero(),
        sup_rate: T::zero(),
    };
    for &t in times {
        let (a, da) = pump_eval(spec, t);
        let an = a.to_nodal(domain);
        let dn = da.to_nodal(domain);
        b.sup_field = b.sup_field.max(sup_modulus(&[&an[0].data, &an[1].data, &an[2].data]));
        b.sup_rate = b.sup_rate.max(sup_modulus(&[&dn[0].data, &dn[1].data, &dn[2].data]));
        let jac = jacobian_nodal(domain, &a);
        let parts: Vec<&[T]> = jac.iter().flatten().map(|c| c.data.as_slice()).collect();
        b.sup_gradient = b.sup_gradient.max(sup_modulus(&parts));
    }
    b
}
