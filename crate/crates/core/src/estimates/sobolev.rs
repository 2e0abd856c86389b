//! Embedding ratios, the current-term constant, and the Lyapunov parameter condition.

use crate::dynamics::{make_initial, InitialKind, InitialSpec, State, System};
use crate::error::Result;
use crate::matter::{MatterEval, ScalarPotential};
use crate::spectral::field::SpectralVector;
use crate::spectral::ops::{gradient_norm_sq, norm_scalar, NormKind};

/// Max over random `psi` of `||psi||_{L^p}^2 / E` at fixed magnetic potential `a`.
pub fn sobolev_ratio(
    system: &System<f64>,
    a: &SpectralVector<f64>,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let d = &system.domain;
    let spec = InitialSpec {
        kind: InitialKind::Random,
        charge: 1.0,
        band: d.modes().into_iter().min().unwrap_or(1),
        ..InitialSpec::default()
    };
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let psi = make_initial(d, &spec, seed.wrapping_add(s as u64)).psi;
        let ev = MatterEval::new(
            d,
            &psi,
            a,
            &system.potentials,
            ScalarPotential::from_switch(system.potentials.coulomb),
        )?;
        let lp = norm_scalar(d, &psi, NormKind::Lp(p))?;
        worst = worst.max(lp * lp / ev.energy());
    }
    Ok(worst)
}

/// `|<j, A>| / (||grad A|| E^{1/2} ||D psi||)` at one state; `None` when a factor vanishes.
pub fn current_ratio(system: &System<f64>, state: &State<f64>) -> Option<f64> {
    let ev = system.matter(state);
    let j = ev.current_coeffs();
    let ja: f64 = (0..3)
        .map(|c| j[c].iter().zip(&state.a.comps[c]).map(|(x, y)| x * y).sum::<f64>())
        .sum();
    let denom = gradient_norm_sq(&system.domain, &state.a).sqrt() * ev.energy().sqrt() * ev.kinetic.sqrt();
    (denom > 0.0).then(|| ja.abs() / denom)
}

/// An admissible `(eta, delta)` for
/// `min(eta (1 - 3 delta), sigma - eta - eta/delta, gamma - C2 eta/delta) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub eta: f64,
    pub delta: f64,
    /// The minimum of the three terms at `(eta, delta)`.
    pub margin: f64,
    pub feasible: bool,
}

/// Scans `delta` in `(0, 1/3)`; for each, the best `eta` balances the increasing
/// first term against the two decreasing ones.
pub fn lyapunov_feasibility(sigma: f64, gamma: f64, c2: f64) -> Feasibility {
    let mut best = Feasibility {
        eta: 0.0,
        delta: 0.0,
        margin: f64::NEG_INFINITY,
        feasible: false,
    };
    let steps = 2000;
    for i in 1..steps {
        let delta = i as f64 / (3.0 * steps as f64);
        let a = 1.0 - 3.0 * delta;
        let eta_sigma = sigma / (a + 1.0 + 1.0 / delta);
        let eta_gamma = gamma / (a + c2 / delta);
        let eta = eta_sigma.min(eta_gamma);
        let margin = (eta * a)
            .min(sigma - eta - eta / delta)
            .min(gamma - c2 * eta / delta);
        if margin > best.margin {
            best = Feasibility {
                eta,
                delta,
                margin,
                feasible: margin > 0.0,
            };
        }
    }
    best
}
