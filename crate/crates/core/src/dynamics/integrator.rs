use super::functionals::{diagnostics, DiagnosticsRow};
use super::rhs::rhs;
use super::{State, System};
use crate::error::{Error, Result};
use crate::gauge::leray_in_place;
use crate::num::Real;

/// One classical RK4 step of size `dt`, followed by re-projection of `A` and `Pi`.
pub fn step_rk4_dt<T: Real>(system: &System<T>, state: &State<T>, dt: T) -> Result<State<T>> {
    if dt == T::zero() {
        return Ok(state.clone());
    }
    let half = T::lit(0.5) * dt;
    let k1 = rhs(system, state)?;
    let k2 = rhs(system, &state.advanced(half, &k1))?;
    let k3 = rhs(system, &state.advanced(half, &k2))?;
    let k4 = rhs(system, &state.advanced(dt, &k3))?;
    let w = dt / T::lit(6.0);
    let two = T::lit(2.0);
    let mut next = state.advanced(w, &k1);
    for (k, s) in [(&k2, two), (&k3, two), (&k4, T::one())] {
        next = next.advanced(w * s, k);
    }
    next.t = state.t + dt;
    leray_in_place(&system.domain, &mut next.a.comps);
    leray_in_place(&system.domain, &mut next.pi.comps);
    if !next.finite_max().is_finite() {
        return Err(Error::Divergence {
            t: next.t.as_f64(),
            what: "non-finite state after step".into(),
        });
    }
    Ok(next)
}

/// One RK4 step of the configured size.
pub fn step_rk4<T: Real>(system: &System<T>, state: &State<T>) -> Result<State<T>> {
    step_rk4_dt(system, state, system.params.dt)
}

/// Integrates to `t_final`, calling `observe` at step 0 and every `record_every` steps.
/// Returns the observations, the last good state, and the error that halted the run.
pub fn run_observed<T: Real, R>(
    system: &System<T>,
    initial: &State<T>,
    record_every: usize,
    mut observe: impl FnMut(usize, &State<T>) -> R,
) -> (Vec<R>, State<T>, Option<Error>) {
    let every = record_every.max(1);
    let steps = system.params.steps();
    let mut out = vec![observe(0, initial)];
    let mut state = initial.clone();
    for n in 1..=steps {
        match step_rk4(system, &state) {
            Ok(s) => state = s,
            Err(e) => return (out, state, Some(e)),
        }
        if n % every == 0 {
            out.push(observe(n, &state));
        }
    }
    (out, state, None)
}

/// Diagnostics series, snapshots, and the halting error if any.
#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub rows: Vec<DiagnosticsRow<T>>,
    pub snapshots: Vec<State<T>>,
    pub final_state: State<T>,
    pub error: Option<Error>,
}

pub fn run<T: Real>(
    system: &System<T>,
    initial: &State<T>,
    record_every: usize,
    snapshot_every: Option<usize>,
) -> RunOutput<T> {
    let every = record_every.max(1);
    let snap_every = snapshot_every.map(|s| s.max(1));
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let (_, final_state, error) = run_observed(system, initial, 1, |n, s| {
        if n % every == 0 {
            rows.push(diagnostics(system, s));
        }
        if snap_every.is_some_and(|k| n % k == 0) {
            snapshots.push(s.clone());
        }
    });
    RunOutput {
        rows,
        snapshots,
        final_state,
        error,
    }
}
