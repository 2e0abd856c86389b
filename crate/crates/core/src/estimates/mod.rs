//! Numerical checks of the a priori estimates, operator bounds, Lyapunov decay,
//! and the absorbing set. Eigenvalue work is done in `f64`.

pub mod absorbing;
pub mod charge;
pub mod eigen;
pub mod lyapunov;
pub mod sobolev;
pub mod spectrum;

pub use absorbing::{absorbing_experiment, AbsorbingReport, AbsorbingTrajectory};
pub use charge::{
    charge_ode_oracle, charge_residual, max_charge_increase, measured_order, ChargeOracle,
};
pub use lyapunov::{lyapunov_fit, LyapunovFit};
pub use sobolev::{current_ratio, lyapunov_feasibility, sobolev_ratio, Feasibility};
pub use spectrum::{
    lambda_min, lambda_min_lanczos, rayleigh_equivalence, relative_bound_t, EquivalenceOrder,
    LambdaMin, RayleighReport, RelativeBound,
};
