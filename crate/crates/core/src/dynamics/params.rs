use crate::error::{Error, Result};
use crate::num::Real;
use crate::spectral::domain::BoxDomain;

/// Which energy functional anchors the Lyapunov functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyBase {
    #[default]
    Canonical,
    Paper,
}

/// Physical constants and integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params<T> {
    /// Conductance damping of the field.
    pub sigma: T,
    /// Linear absorption.
    pub epsilon: T,
    /// Nonlinear absorption.
    pub gamma: T,
    /// Mixing weight of `<Pi, A>` in the Lyapunov functional.
    pub eta: T,
    pub coulomb: bool,
    pub dt: T,
    pub t_final: T,
    pub dealias: bool,
    pub seed: u64,
    pub energy_base: EnergyBase,
}

impl<T: Real> Default for Params<T> {
    fn default() -> Self {
        Self {
            sigma: T::zero(),
            epsilon: T::zero(),
            gamma: T::zero(),
            eta: T::zero(),
            coulomb: false,
            dt: T::lit(1e-3),
            t_final: T::one(),
            dealias: false,
            seed: 0,
            energy_base: EnergyBase::Canonical,
        }
    }
}

/// Largest admissible RK4 step: `0.5 * 2.8 / max(|kappa|^2_max (1 + eps) / 2, |kappa|_max)`.
pub fn stability_bound<T: Real>(domain: &BoxDomain<T>, epsilon: T) -> T {
    let k2 = domain.max_kappa_sq();
    let fastest = (T::lit(0.5) * k2 * (T::one() + epsilon)).max(k2.sqrt());
    T::lit(0.5 * 2.8) / fastest
}

impl<T: Real> Params<T> {
    /// Number of steps covering `[0, t_final]`.
    pub fn steps(&self) -> usize {
        if self.t_final <= T::zero() {
            return 0;
        }
        (self.t_final / self.dt).round().to_usize().unwrap_or(0)
    }

    pub fn validate(&self, domain: &BoxDomain<T>) -> Result<()> {
        let named = [
            ("sigma", self.sigma),
            ("epsilon", self.epsilon),
            ("gamma", self.gamma),
            ("eta", self.eta),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::InvalidParams(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final >= T::zero()) {
            return Err(Error::InvalidParams(format!(
                "t_final must be >= 0, got {}",
                self.t_final
            )));
        }
        let bound = stability_bound(domain, self.epsilon);
        if self.dt > bound {
            return Err(Error::InvalidParams(format!(
                "dt = {} exceeds the RK4 stability bound {bound}",
                self.dt
            )));
        }
        Ok(())
    }
}
