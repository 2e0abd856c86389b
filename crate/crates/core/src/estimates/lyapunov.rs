//! Exponential-envelope fit `Phi(t) <= Phi(0) e^{-beta t} + C_p / beta`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovFit {
    pub beta: f64,
    pub c_p: f64,
    /// `C_p / beta`, or the plateau level of a degenerate fit.
    pub plateau: f64,
    /// Envelope dominates every sample.
    pub envelope_ok: bool,
    /// No decay was detected; `beta` is reported as 0.
    pub degenerate: bool,
}

impl LyapunovFit {
    pub fn envelope(&self, phi0: f64, t: f64) -> f64 {
        phi0 * (-self.beta * t).exp() + self.plateau
    }
}

/// Largest admissible `beta`, relative to the series duration.
const MAX_BETA_TIMES_SPAN: f64 = 1e4;

fn excess(times: &[f64], phi: &[f64], beta: f64) -> f64 {
    let p0 = phi[0];
    times
        .iter()
        .zip(phi)
        .map(|(t, p)| p - p0 * (-beta * (t - times[0])).exp())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fits the fastest decay rate whose envelope plateau stays within 5% of the
/// observed tail level (max of the last half of the series).
pub fn lyapunov_fit(times: &[f64], phi: &[f64]) -> Result<LyapunovFit> {
    if times.len() != phi.len() {
        return Err(Error::Dimension(format!(
            "{} times for {} values",
            times.len(),
            phi.len()
        )));
    }
    if phi.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "need at least 10 rows, got {}",
            phi.len()
        )));
    }
    let n = phi.len();
    let tail = phi[n / 2..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_all = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let p0 = phi[0];
    let span = times[n - 1] - times[0];
    let target = tail + 0.05 * tail.abs();
    if !(p0 > target) || span <= 0.0 {
        return Ok(LyapunovFit {
            beta: 0.0,
            c_p: 0.0,
            plateau: max_all,
            envelope_ok: phi.iter().all(|p| *p <= max_all),
            degenerate: true,
        });
    }
    let mut lo = 0.0;
    let mut hi = MAX_BETA_TIMES_SPAN / span;
    if excess(times, phi, hi) <= target {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if excess(times, phi, mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let beta = lo;
    let plateau = excess(times, phi, beta).max(0.0);
    let fit = LyapunovFit {
        beta,
        c_p: beta * plateau,
        plateau,
        envelope_ok: true,
        degenerate: beta == 0.0,
    };
    let ok = times.iter().zip(phi).all(|(t, p)| {
        *p <= fit.envelope(p0, t - times[0]) + 1e-12 * p0.abs().max(plateau.abs())
    });
    Ok(LyapunovFit {
        envelope_ok: ok,
        ..fit
    })
}
