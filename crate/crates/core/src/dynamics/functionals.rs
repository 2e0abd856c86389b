use super::{EnergyBase, State, System};
use crate::gauge::boundary_residual;
use crate::matter::MatterEval;
use crate::num::Real;
use crate::spectral::ops::{curl, divergence, gradient_norm_sq, norm_scalar, norm_vector, NormKind};

/// Energy-type functionals at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies<T> {
    pub charge: T,
    /// `E = <psi, H psi>`.
    pub energy_e: T,
    pub canonical: T,
    /// Alternate energy with the matter terms halved (`hamiltonian_paper`).
    pub variant: T,
    pub phi: T,
}

fn field_parts<T: Real>(system: &System<T>, state: &State<T>) -> (T, T) {
    let curl_a = curl(&system.domain, &state.a).expect("A is a MaxwellVector field");
    (state.pi.norm_sq(), curl_a.norm_sq())
}

fn energies_from<T: Real>(system: &System<T>, state: &State<T>, ev: &MatterEval<'_, T>) -> Energies<T> {
    let half = T::lit(0.5);
    let (pi2, curl2) = field_parts(system, state);
    let field = half * (pi2 + curl2);
    let canonical = field + half * ev.kinetic + ev.external + half * ev.coulomb;
    let variant = field + half * (half * ev.kinetic + ev.external + half * ev.coulomb);
    let base = match system.params.energy_base {
        EnergyBase::Canonical => canonical,
        EnergyBase::Paper => variant,
    };
    Energies {
        charge: ev.charge,
        energy_e: ev.energy(),
        canonical,
        variant,
        phi: base + system.params.eta * state.pi.inner(&state.a),
    }
}

impl<T: Real> System<T> {
    pub fn energies(&self, state: &State<T>) -> Energies<T> {
        let ev = self.matter(state);
        energies_from(self, state, &ev)
    }
}

/// `1/2 ||Pi||^2 + 1/2 ||curl A||^2 + 1/2 ||D psi||^2 + <phi, rho> + 1/2 <rho, (-Laplace)^{-1} rho>`.
pub fn canonical_energy<T: Real>(system: &System<T>, state: &State<T>) -> T {
    system.energies(state).canonical
}

/// `1/2 [||Pi||^2 + ||curl A||^2] + 1/2 <psi, (1/2 D^2 + phi + 1/2 A0) psi>`, taken literally.
pub fn hamiltonian_paper<T: Real>(system: &System<T>, state: &State<T>) -> T {
    system.energies(state).variant
}

/// `Phi = base energy + eta <Pi, A>`.
pub fn lyapunov_phi<T: Real>(system: &System<T>, state: &State<T>) -> T {
    system.energies(state).phi
}

/// `||A||_{H^1}^2 + ||Pi||^2 + ||psi||_{H^1}^2`.
pub fn x_norm_sq<T: Real>(system: &System<T>, state: &State<T>) -> T {
    let d = &system.domain;
    let a = norm_vector(d, &state.a, NormKind::H1).expect("same domain");
    let psi = norm_scalar(d, &state.psi, NormKind::H1).expect("same domain");
    a * a + state.pi.norm_sq() + psi * psi
}

/// One recorded sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow<T> {
    pub t: T,
    pub charge: T,
    pub energy_e: T,
    pub canonical_energy: T,
    pub hamiltonian_paper: T,
    pub phi: T,
    pub grad_a_norm: T,
    pub pi_norm: T,
    pub psi_h1_norm: T,
    pub div_a_norm: T,
    pub boundary_residual: T,
    pub x_norm_sq: T,
}

impl<T: Real> DiagnosticsRow<T> {
    pub const COLUMNS: [&'static str; 12] = [
        "t",
        "Q",
        "E",
        "canonical_energy",
        "hamiltonian_paper",
        "phi",
        "grad_a_norm",
        "pi_norm",
        "psi_h1_norm",
        "div_a_norm",
        "boundary_residual",
        "x_norm_sq",
    ];

    pub fn values(&self) -> [T; 12] {
        [
            self.t,
            self.charge,
            self.energy_e,
            self.canonical_energy,
            self.hamiltonian_paper,
            self.phi,
            self.grad_a_norm,
            self.pi_norm,
            self.psi_h1_norm,
            self.div_a_norm,
            self.boundary_residual,
            self.x_norm_sq,
        ]
    }

    pub fn from_values(v: [T; 12]) -> Self {
        Self {
            t: v[0],
            charge: v[1],
            energy_e: v[2],
            canonical_energy: v[3],
            hamiltonian_paper: v[4],
            phi: v[5],
            grad_a_norm: v[6],
            pi_norm: v[7],
            psi_h1_norm: v[8],
            div_a_norm: v[9],
            boundary_residual: v[10],
            x_norm_sq: v[11],
        }
    }
}

/// Full diagnostics row for `state`.
pub fn diagnostics<T: Real>(system: &System<T>, state: &State<T>) -> DiagnosticsRow<T> {
    let d = &system.domain;
    let e = system.energies(state);
    let psi_h1 = norm_scalar(d, &state.psi, NormKind::H1).expect("same domain");
    let div = divergence(d, &state.a).expect("A is a MaxwellVector field");
    let residual = boundary_residual(d, &state.a)
        .max(boundary_residual(d, &state.pi))
        .max(boundary_residual(d, &state.psi));
    DiagnosticsRow {
        t: state.t,
        charge: e.charge,
        energy_e: e.energy_e,
        canonical_energy: e.canonical,
        hamiltonian_paper: e.variant,
        phi: e.phi,
        grad_a_norm: gradient_norm_sq(d, &state.a).sqrt(),
        pi_norm: state.pi.norm_sq().sqrt(),
        psi_h1_norm: psi_h1,
        div_a_norm: div.norm_sq().sqrt(),
        boundary_residual: residual,
        x_norm_sq: x_norm_sq(system, state),
    }
}
