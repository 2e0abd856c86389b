//! Closed-form charge decay for an invariant mode and the discrete charge balance.

use crate::dynamics::{DiagnosticsRow, State, System};
use crate::error::{Error, Result};

/// `Q(t)` solving `Q' = -2 mu Q (eps + gamma Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeOracle {
    pub mu: f64,
    pub q0: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl ChargeOracle {
    pub fn q(&self, t: f64) -> f64 {
        let (mu, q0, eps, g) = (self.mu, self.q0, self.epsilon, self.gamma);
        if eps == 0.0 {
            return q0 / (1.0 + 2.0 * mu * g * q0 * t);
        }
        let x = -2.0 * mu * eps * t;
        eps * q0 * x.exp() / (eps - g * q0 * x.exp_m1())
    }
}

/// Oracle for the ground sine mode under a constant potential, zero field, no
/// pumping, and no Coulomb term; `mu = 1/2 sum_i (pi / L_i)^2 + kappa`.
pub fn charge_ode_oracle(system: &System<f64>, initial: &State<f64>) -> Result<ChargeOracle> {
    let d = &system.domain;
    let fail = |why: &str| Err(Error::OracleInvalid(why.into()));
    if initial.a.max_abs() != 0.0 || initial.pi.max_abs() != 0.0 {
        return fail("A and Pi must vanish");
    }
    if !system.pump.is_empty() {
        return fail("pumping must be off");
    }
    if system.potentials.coulomb {
        return fail("Coulomb term must be off");
    }
    let phi = &system.potentials.phi.data;
    if phi.iter().any(|v| *v != phi[0]) {
        return fail("phi must be constant");
    }
    let im = initial.psi.im_or_zeros();
    let others = initial.psi.re[1..]
        .iter()
        .chain(im[1..].iter())
        .any(|v| *v != 0.0);
    if others {
        return fail("psi must be the ground sine mode");
    }
    let l = d.lengths();
    let mu = 0.5
        * (0..3)
            .map(|i| (std::f64::consts::PI / l[i]).powi(2))
            .sum::<f64>()
        + system.potentials.kappa;
    Ok(ChargeOracle {
        mu,
        q0: initial.psi.norm_sq(),
        epsilon: system.params.epsilon,
        gamma: system.params.gamma,
    })
}

/// Largest Simpson-rule residual of `Q' = -2 eps E - 2 gamma E Q` over
/// consecutive triples of uniformly spaced rows.
pub fn charge_residual(rows: &[DiagnosticsRow<f64>], epsilon: f64, gamma: f64) -> Result<f64> {
    if rows.len() < 3 {
        return Err(Error::InsufficientData("need at least 3 rows".into()));
    }
    let f = |r: &DiagnosticsRow<f64>| -2.0 * epsilon * r.energy_e - 2.0 * gamma * r.energy_e * r.charge;
    let mut worst: f64 = 0.0;
    for w in rows.windows(3) {
        let h = w[2].t - w[0].t;
        let lhs = (w[2].charge - w[0].charge) / h;
        let rhs = (f(&w[0]) + 4.0 * f(&w[1]) + f(&w[2])) / 6.0;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// `log2(coarse / fine)`.
pub fn measured_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Largest per-step increase of `Q` (0 when nonincreasing).
pub fn max_charge_increase(rows: &[DiagnosticsRow<f64>]) -> f64 {
    rows.windows(2)
        .map(|w| (w[1].charge - w[0].charge).max(0.0))
        .fold(0.0, f64::max)
}
