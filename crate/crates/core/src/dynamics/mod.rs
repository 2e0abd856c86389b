//! Evolution law, RK4 integrator, energy and Lyapunov functionals, diagnostics,
//! and finite-difference checks of the Hamiltonian structure.

mod functionals;
mod gradcheck;
mod initial;
mod integrator;
mod params;
mod rhs;
mod state;

pub use functionals::{
    canonical_energy, diagnostics, hamiltonian_paper, lyapunov_phi, x_norm_sq, DiagnosticsRow,
    Energies,
};
pub use gradcheck::{grad_check, GradCheckReport};
pub use initial::{make_initial, InitialKind, InitialSpec};
pub use integrator::{run, run_observed, step_rk4, step_rk4_dt, RunOutput};
pub use params::{stability_bound, EnergyBase, Params};
pub use rhs::rhs;
pub use state::{State, Tangent};

use crate::drive::{pump_eval, PumpSpec};
use crate::error::{Error, Result};
use crate::matter::{vector_nodal, MatterEval, PotentialSet, ScalarPotential};
use crate::num::Real;
use crate::spectral::domain::BoxDomain;

/// Everything fixed along a trajectory: geometry, constants, drive, and potentials.
#[derive(Debug, Clone)]
pub struct System<T> {
    pub domain: BoxDomain<T>,
    pub params: Params<T>,
    pub pump: PumpSpec<T>,
    pub potentials: PotentialSet<T>,
}

impl<T: Real> System<T> {
    pub fn new(
        domain: BoxDomain<T>,
        params: Params<T>,
        pump: PumpSpec<T>,
        potentials: PotentialSet<T>,
    ) -> Result<Self> {
        params.validate(&domain)?;
        potentials.phi.check_grid(&domain)?;
        if params.coulomb != potentials.coulomb {
            return Err(Error::InvalidParams(
                "coulomb switch differs between params and potentials".into(),
            ));
        }
        if let Some(p) = pump.profiles().first() {
            p.check_domain(&domain)?;
        }
        Ok(Self {
            domain,
            params,
            pump,
            potentials,
        })
    }

    /// Matter quantities at `state`, with `A + A_p(t)` as the total vector potential.
    pub(crate) fn matter(&self, state: &State<T>) -> MatterEval<'_, T> {
        let mut atot = state.a.clone();
        if !self.pump.is_empty() {
            atot.add_scaled(T::one(), &pump_eval(&self.pump, state.t).0);
        }
        let nodal = vector_nodal(&self.domain, &atot).expect("state fields share the domain");
        MatterEval::from_nodal_potential(
            &self.domain,
            &state.psi,
            nodal,
            &self.potentials,
            ScalarPotential::from_switch(self.potentials.coulomb),
        )
    }
}
