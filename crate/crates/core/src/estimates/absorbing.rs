//! Ensemble experiment for a radius-independent absorbing ball.

use crate::dynamics::{run_observed, x_norm_sq, State, System};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingTrajectory {
    /// `||X(0)||`.
    pub radius: f64,
    pub times: Vec<f64>,
    /// `||X(t)||^2` at each recorded time.
    pub x_norm_sq: Vec<f64>,
    /// Max of `||X||^2` over the tail window `t >= T/2`.
    pub terminal: f64,
    /// First recorded time inside the ball of radius `2 B`.
    pub entry_time: Option<f64>,
    /// Never leaves the ball after entry.
    pub stays_inside: bool,
    /// Halting error of a divergent run.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingReport {
    pub trajectories: Vec<AbsorbingTrajectory>,
    /// Common terminal bound: max of the per-trajectory terminal values.
    pub b_hat: f64,
    /// `(max - min) / max` of the terminal values.
    pub spread: f64,
    /// Entry times are nondecreasing in the radius.
    pub entry_monotone: bool,
    pub all_stay: bool,
}

/// Runs one trajectory per radius from `direction` rescaled to `||X(0)|| = R`.
pub fn absorbing_experiment(
    system: &System<f64>,
    direction: &State<f64>,
    radii: &[f64],
    record_every: usize,
) -> Result<AbsorbingReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(Error::Range("radii must be finite and >= 0".into()));
    }
    let base = x_norm_sq(system, direction).sqrt();
    let mut trajectories = Vec::with_capacity(radii.len());
    for &r in radii {
        let f = if base > 0.0 { r / base } else { 0.0 };
        let init = State {
            a: direction.a.scaled(f),
            pi: direction.pi.scaled(f),
            psi: direction.psi.scaled(f),
            t: 0.0,
        };
        let (obs, _, err) = run_observed(system, &init, record_every, |_, s| {
            (s.t, x_norm_sq(system, s))
        });
        let (times, xs): (Vec<f64>, Vec<f64>) = obs.into_iter().unzip();
        let t_end = *times.last().unwrap_or(&0.0);
        let terminal = times
            .iter()
            .zip(&xs)
            .filter(|(t, _)| **t >= 0.5 * t_end)
            .map(|(_, x)| *x)
            .fold(0.0, f64::max);
        trajectories.push(AbsorbingTrajectory {
            radius: r,
            times,
            x_norm_sq: xs,
            terminal,
            entry_time: None,
            stays_inside: false,
            error: err.map(|e| e.to_string()),
        });
    }
    let good: Vec<&AbsorbingTrajectory> = trajectories.iter().filter(|t| t.error.is_none()).collect();
    let b_hat = good.iter().map(|t| t.terminal).fold(0.0, f64::max);
    let b_min = good.iter().map(|t| t.terminal).fold(f64::INFINITY, f64::min);
    let spread = if b_hat > 0.0 { (b_hat - b_min) / b_hat } else { 0.0 };
    let ball = 2.0 * b_hat;
    for tr in &mut trajectories {
        let entry = tr.x_norm_sq.iter().position(|x| *x <= ball);
        tr.entry_time = entry.map(|i| tr.times[i]);
        tr.stays_inside = tr.error.is_none()
            && entry.is_some_and(|i| tr.x_norm_sq[i..].iter().all(|x| *x <= ball));
    }
    let mut order: Vec<&AbsorbingTrajectory> = trajectories.iter().collect();
    order.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    let entry_monotone = order.windows(2).all(|w| match (w[0].entry_time, w[1].entry_time) {
        (Some(a), Some(b)) => a <= b,
        _ => false,
    });
    let all_stay = trajectories.iter().all(|t| t.stays_inside);
    Ok(AbsorbingReport {
        trajectories,
        b_hat,
        spread,
        entry_monotone,
        all_stay,
    })
}
