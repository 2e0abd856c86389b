mod common;

use msdd_core::drive::{phi_preset, PhiPreset, PumpSpec, PumpTerm};
use msdd_core::dynamics::{
    canonical_energy, diagnostics, grad_check, hamiltonian_paper, lyapunov_phi, make_initial, rhs,
    run, stability_bound, step_rk4_dt, InitialKind, InitialSpec, Params, State, System,
};
use msdd_core::estimates::lambda_min;
use msdd_core::spectral::ops::divergence;
use msdd_core::spectral::{BasisFamily, BoxDomain, SpectralScalar, SpectralVector};
use msdd_core::Error;
use nalgebra::Matrix2;
use num_complex::Complex64;
use std::f64::consts::PI;

fn system(d: &BoxDomain<f64>, params: Params<f64>, pump: PumpSpec<f64>) -> System<f64> {
    let pot = phi_preset(d, PhiPreset::Constant { value: 1.0 }, params.coulomb).unwrap();
    System::new(d.clone(), params, pump, pot).unwrap()
}

fn driven(d: &BoxDomain<f64>, omega: f64) -> PumpSpec<f64> {
    PumpSpec::new(
        d,
        vec![PumpTerm {
            mode: [1, 1, 1],
            pattern: [1.0, -1.0, 0.0],
            amplitude: 0.5,
            omega,
            phase: 0.2,
        }],
    )
    .unwrap()
}

fn random_state(d: &BoxDomain<f64>, seed: u64) -> State<f64> {
    let spec = InitialSpec {
        kind: InitialKind::Random,
        a_norm: 1.0,
        pi_norm: 0.5,
        charge: 1.0,
        band: 3,
    };
    make_initial(d, &spec, seed)
}

#[test]
fn damped_wave_matches_matrix_exponential() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let sigma = 0.7;
    let k2 = 2.0 * PI * PI;
    let mut s0 = State::zeros(&d);
    s0.a = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [0, 1, 1], [1.0, 0.0, 0.0]);
    let t_final = 1.0;
    let exact = (Matrix2::new(0.0, 1.0, -k2, -sigma) * t_final).exp() * nalgebra::Vector2::new(1.0, 0.0);
    let mut errs = Vec::new();
    for dt in [0.005, 0.0025] {
        let params = Params { sigma, dt, t_final, ..Params::default() };
        let sys = system(&d, params, PumpSpec::none(&d));
        let out = run(&sys, &s0, 1_000_000, None);
        assert!(out.error.is_none());
        let s = out.final_state;
        assert!(s.psi.norm_sq() == 0.0);
        let a = s.a.comps[0][0];
        let p = s.pi.comps[0][0];
        errs.push(((a - exact[0]).powi(2) + (p - exact[1]).powi(2)).sqrt());
        // all other modes stay at rest
        assert!((s.a.norm_sq() - a * a).abs() < 1e-20);
    }
    let ratio = errs[0] / errs[1];
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}, errors {errs:?}");
}

#[test]
fn schroedinger_mode_rotates_at_its_eigenvalue() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let s0 = make_initial(&d, &InitialSpec::default(), 0);
    let omega = 1.5 * PI * PI + 1.0;
    let mut errs = Vec::new();
    for dt in [0.004, 0.002] {
        let params = Params { dt, t_final: 0.4, ..Params::default() };
        let sys = system(&d, params, PumpSpec::none(&d));
        let s = run(&sys, &s0, 1_000_000, None).final_state;
        let want = Complex64::new(0.0, -omega * s.t).exp();
        errs.push((s.psi.coeff(0) - want).norm());
    }
    let ratio = errs[0] / errs[1];
    assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn zero_step_is_identity_and_zero_horizon_gives_one_row() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let sys = system(&d, Params { t_final: 0.0, ..Params::default() }, driven(&d, 1.0));
    let s = random_state(&d, 3);
    assert_eq!(step_rk4_dt(&sys, &s, 0.0).unwrap(), s);
    let out = run(&sys, &s, 1, None);
    assert_eq!(out.rows.len(), 1);
    assert_eq!(out.rows[0].t, 0.0);
}

#[test]
fn charge_is_nonincreasing_and_gauge_is_preserved() {
    let d = BoxDomain::new([1.0, 1.2, 0.9], [5; 3]).unwrap();
    let params = Params {
        sigma: 0.2,
        epsilon: 0.1,
        gamma: 0.3,
        coulomb: true,
        dt: 0.5 * stability_bound(&d, 0.1),
        t_final: 0.5,
        ..Params::default()
    };
    let pot = phi_preset(&d, PhiPreset::Well { offset: 1.0, scale: 1.0 }, true).unwrap();
    let sys = System::new(d.clone(), params, driven(&d, 3.0), pot).unwrap();
    let out = run(&sys, &random_state(&d, 5), 1, None);
    assert!(out.error.is_none());
    for w in out.rows.windows(2) {
        assert!(w[1].charge <= w[0].charge + 1e-10);
    }
    for r in &out.rows {
        assert!(r.div_a_norm <= 1e-10);
        assert!(r.boundary_residual <= 1e-10);
    }
    let s = &out.final_state;
    assert!(divergence(&d, &s.pi).unwrap().norm_sq().sqrt() < 1e-10);
}

#[test]
fn diagnostics_are_phase_invariant() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let params = Params { sigma: 0.1, epsilon: 0.05, gamma: 0.05, coulomb: true, dt: 2e-3, t_final: 0.2, ..Params::default() };
    let sys = system(&d, params, driven(&d, 2.0));
    let s0 = random_state(&d, 9);
    let mut s1 = s0.clone();
    s1.psi = s0.psi.mul_complex(Complex64::from_polar(1.0, 2.1));
    let a = run(&sys, &s0, 10, None).rows;
    let b = run(&sys, &s1, 10, None).rows;
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        for (u, v) in x.values().iter().zip(y.values()) {
            assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0), "{u} vs {v}");
        }
    }
}

#[test]
fn energy_stays_below_a_linear_envelope_under_damping() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let params = Params { sigma: 0.5, epsilon: 0.1, gamma: 0.1, dt: 2e-3, t_final: 4.0, ..Params::default() };
    let sys = system(&d, params, driven(&d, 2.3));
    let rows = run(&sys, &random_state(&d, 1), 50, None).rows;
    let c = rows
        .iter()
        .map(|r| r.canonical_energy / (r.t + 1.0))
        .fold(0.0, f64::max);
    assert!(c.is_finite() && c > 0.0);
    // the envelope is not saturated at late times: growth is sublinear
    let last = rows.last().unwrap();
    assert!(last.canonical_energy < c * (last.t + 1.0));
}

#[test]
fn canonical_energy_examples() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let sys = system(&d, Params::default(), PumpSpec::none(&d));
    let vacuum = State::zeros(&d);
    assert_eq!(canonical_energy(&sys, &vacuum), 0.0);
    assert_eq!(hamiltonian_paper(&sys, &vacuum), 0.0);
    let mut s = State::zeros(&d);
    s.a = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [0, 1, 2], [0.3, 0.0, 0.0]);
    let want = 0.5 * PI * PI * 5.0 * 0.09;
    assert!((canonical_energy(&sys, &s) - want).abs() < 1e-12);
    assert!((hamiltonian_paper(&sys, &s) - want).abs() < 1e-12);
}

#[test]
fn lyapunov_functional_is_sandwiched_by_energy() {
    let d = BoxDomain::new([1.0, 1.4, 0.8], [4, 4, 4]).unwrap();
    let lm = lambda_min(&d).value;
    let eta = 0.1 * lm.sqrt();
    let c_lambda = 1.0 / lm.sqrt();
    let (lo, hi) = (1.0 - eta * c_lambda, 1.0 + eta * c_lambda);
    let params = Params { eta, coulomb: true, ..Params::default() };
    let pot = phi_preset(&d, PhiPreset::Well { offset: 0.5, scale: 1.0 }, true).unwrap();
    let sys = System::new(d.clone(), params, driven(&d, 1.0), pot).unwrap();
    for seed in 0..100 {
        let s = random_state(&d, seed);
        let e = canonical_energy(&sys, &s);
        let phi = lyapunov_phi(&sys, &s);
        assert!(lo * e <= phi + 1e-12 && phi <= hi * e + 1e-12, "seed {seed}");
    }
    let mut still = random_state(&d, 1);
    still.pi = SpectralVector::zeros(&d, BasisFamily::MaxwellVector);
    assert_eq!(lyapunov_phi(&sys, &still), canonical_energy(&sys, &still));
}

#[test]
fn gradient_check_on_quadratic_and_coupled_states() {
    let d = BoxDomain::new([1.0, 1.2, 0.9], [5, 4, 5]).unwrap();
    let params = Params { sigma: 0.3, epsilon: 0.1, gamma: 0.2, coulomb: true, dt: 1e-4, ..Params::default() };
    let pot = phi_preset(&d, PhiPreset::Well { offset: 1.0, scale: 2.0 }, true).unwrap();
    let sys = System::new(d.clone(), params, driven(&d, 0.0), pot).unwrap();
    let mut quad = random_state(&d, 2);
    quad.psi = SpectralScalar::zeros(&d, msdd_core::spectral::ScalarKind::Complex);
    let r = grad_check(&sys, &quad, 1e-5, 3, 1).unwrap();
    assert!(r.a < 1e-9 && r.pi < 1e-9, "{r:?}");
    let r = grad_check(&sys, &random_state(&d, 3), 1e-5, 3, 2).unwrap();
    assert!(r.max_rel_err < 1e-6, "{r:?}");
    assert!(r.rhs_consistency < 1e-10);
    assert!(r.field_gradient < 1e-8);
}

#[test]
fn initial_states() {
    let d = BoxDomain::<f64>::new([1.0; 3], [5; 3]).unwrap();
    let g = make_initial(&d, &InitialSpec::default(), 0);
    assert_eq!(g.a.max_abs(), 0.0);
    assert!((g.psi.norm_sq() - 1.0).abs() < 1e-14);
    assert_eq!(g.psi.coeff(0), Complex64::new(1.0, 0.0));

    let spec = InitialSpec { kind: InitialKind::Random, a_norm: 0.7, pi_norm: 0.3, charge: 2.0, band: 3 };
    let a = make_initial(&d, &spec, 42);
    assert_eq!(a, make_initial(&d, &spec, 42));
    assert_ne!(a, make_initial(&d, &spec, 43));
    assert!(divergence(&d, &a.a).unwrap().norm_sq().sqrt() < 1e-12);
    assert!((a.psi.norm_sq() - 2.0).abs() < 1e-12);

    let big = make_initial(&d, &InitialSpec { kind: InitialKind::Scaled(10.0), ..spec }, 42);
    assert!((big.a.norm_sq() - 100.0 * a.a.norm_sq()).abs() < 1e-10 * big.a.norm_sq());
    assert!((big.pi.norm_sq() - 100.0 * a.pi.norm_sq()).abs() < 1e-10 * big.pi.norm_sq());
    assert!((big.psi.norm_sq() - 100.0 * a.psi.norm_sq()).abs() < 1e-10 * big.psi.norm_sq());
}

#[test]
fn invalid_params_are_rejected() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let pot = phi_preset(&d, PhiPreset::Constant { value: 1.0 }, false).unwrap();
    let bad = [
        Params { sigma: -1.0, ..Params::default() },
        Params { dt: 0.0, ..Params::default() },
        Params { dt: 2.0 * stability_bound(&d, 0.0), ..Params::default() },
        Params { coulomb: true, ..Params::default() },
    ];
    for p in bad {
        assert!(matches!(
            System::new(d.clone(), p, PumpSpec::none(&d), pot.clone()),
            Err(Error::InvalidParams(_))
        ));
    }
}

#[test]
fn non_finite_state_reports_divergence() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let sys = system(&d, Params::default(), PumpSpec::none(&d));
    let mut s = random_state(&d, 1);
    s.t = 0.25;
    s.psi.re[2] = f64::NAN;
    match rhs(&sys, &s) {
        Err(Error::Divergence { t, .. }) => assert_eq!(t, 0.25),
        other => panic!("expected divergence, got {other:?}"),
    }
    let out = run(&sys, &s, 1, None);
    assert!(out.error.is_some());
    assert_eq!(out.rows.len(), 1);
}

#[test]
fn diagnostics_row_round_trips_through_values() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let sys = system(&d, Params::default(), driven(&d, 1.0));
    let row = diagnostics(&sys, &random_state(&d, 2));
    let back = msdd_core::dynamics::DiagnosticsRow::from_values(row.values());
    assert_eq!(row, back);
}

#[test]
fn single_precision_steps() {
    let d = BoxDomain::<f32>::new([1.0; 3], [4; 3]).unwrap();
    let pot = phi_preset(&d, PhiPreset::Constant { value: 1.0f32 }, false).unwrap();
    let params = Params::<f32> { epsilon: 0.1, gamma: 0.1, dt: 1e-3, t_final: 0.05, ..Params::default() };
    let sys = System::new(d.clone(), params, PumpSpec::none(&d), pot).unwrap();
    let s0 = make_initial(&d, &InitialSpec::default(), 0);
    let out = run(&sys, &s0, 10, None);
    assert!(out.error.is_none());
    let q: Vec<f32> = out.rows.iter().map(|r| r.charge).collect();
    assert!(q.windows(2).all(|w| w[1] <= w[0] + 1e-6));
}
