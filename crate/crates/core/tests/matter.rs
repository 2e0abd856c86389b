mod common;

use msdd_core::drive::{phi_preset, PhiPreset};
use msdd_core::gauge::solve_a0;
use msdd_core::matter::{
    apply_h, charge, covariant_derivative, densities, energy_e, PotentialSet,
};
use msdd_core::spectral::ops::{gradient, quadrature};
use msdd_core::spectral::{BasisFamily, BoxDomain, Collocation, SpectralScalar, SpectralVector};
use num_complex::Complex;
use std::f64::consts::PI;

fn well(d: &BoxDomain<f64>, coulomb: bool) -> PotentialSet<f64> {
    phi_preset(d, PhiPreset::Well { offset: 1.0, scale: 2.0 }, coulomb).unwrap()
}

fn real_part(f: &SpectralScalar<f64>) -> SpectralScalar<f64> {
    let mut g = f.clone();
    g.im = None;
    g
}

fn imag_part(f: &SpectralScalar<f64>) -> SpectralScalar<f64> {
    let mut g = f.clone();
    g.re = f.im_or_zeros().into_owned();
    g.im = None;
    g
}

#[test]
fn covariant_norm_matches_expanded_form() {
    let d = BoxDomain::new([1.0; 3], [8; 3]).unwrap();
    let mut r = common::rng(21);
    for _ in 0..5 {
        let psi = common::scalar(&d, &mut r);
        let a = common::solenoidal(&d, &mut r, 3.0);
        let dpsi = covariant_derivative(&d, &psi, &a).unwrap().norm_sq(&d);

        // |grad psi|^2 + |A|^2 |psi|^2 + 2 A . (Re psi grad Im psi - Im psi grad Re psi)
        let (pr, pi) = psi.to_nodal(&d);
        let pi = pi.unwrap();
        let gr = gradient(&d, &real_part(&psi)).unwrap().to_nodal(&d);
        let gi = gradient(&d, &imag_part(&psi)).unwrap().to_nodal(&d);
        let an = a.to_nodal(&d);
        let dens: Vec<f64> = (0..d.node_count())
            .map(|n| {
                let rho = pr.data[n].powi(2) + pi.data[n].powi(2);
                (0..3)
                    .map(|c| {
                        gr[c].data[n].powi(2)
                            + gi[c].data[n].powi(2)
                            + an[c].data[n].powi(2) * rho
                            + 2.0 * an[c].data[n] * (pr.data[n] * gi[c].data[n] - pi.data[n] * gr[c].data[n])
                    })
                    .sum()
            })
            .collect();
        let want = quadrature(&d, &dens);
        assert!((dpsi - want).abs() < 1e-10 * want, "{dpsi} vs {want}");
    }
}

#[test]
fn hamiltonian_is_symmetric() {
    let d = BoxDomain::new([1.0, 1.3, 0.9], [6, 5, 6]).unwrap();
    let pot = well(&d, true);
    let mut r = common::rng(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let chi = common::scalar(&d, &mut r);
        let psi = common::scalar(&d, &mut r);
        let a = common::solenoidal(&d, &mut r, 2.0);
        let mut rho = common::scalar(&d, &mut r);
        rho.im = None;
        let a0 = solve_a0(&d, &rho).unwrap();
        let h_psi = apply_h(&d, &psi, &a, Some(&a0), &pot).unwrap();
        let h_chi = apply_h(&d, &chi, &a, Some(&a0), &pot).unwrap();
        let lhs = chi.inner(&h_psi);
        let rhs = psi.inner(&h_chi).conj();
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn energy_is_the_expectation_of_h() {
    let d = BoxDomain::new([1.0; 3], [6; 3]).unwrap();
    let pot = well(&d, false);
    let mut r = common::rng(6);
    for _ in 0..10 {
        let psi = common::scalar(&d, &mut r);
        let a = common::solenoidal(&d, &mut r, 1.0);
        let e = energy_e(&d, &psi, &a, None, &pot).unwrap();
        let ev = psi.inner(&apply_h(&d, &psi, &a, None, &pot).unwrap());
        assert!(ev.im.abs() < 1e-10 * e);
        assert!((ev.re - e).abs() < 1e-10 * e);
    }
}

#[test]
fn energy_bounded_below_by_charge() {
    let d = BoxDomain::new([1.0, 1.2, 0.8], [5, 5, 5]).unwrap();
    let pot = well(&d, true);
    assert_eq!(pot.kappa, 1.0);
    let mut r = common::rng(7);
    for _ in 0..100 {
        let psi = common::scalar(&d, &mut r);
        let a = common::solenoidal(&d, &mut r, 2.0);
        let mut rho = SpectralScalar::zeros(&d, msdd_core::spectral::ScalarKind::Real);
        let (rn, _) = densities(&d, &psi, &a).unwrap();
        rho.re = rn.re;
        let a0 = solve_a0(&d, &rho).unwrap();
        let e = energy_e(&d, &psi, &a, Some(&a0), &pot).unwrap();
        let q = charge(&psi);
        let kin = covariant_derivative(&d, &psi, &a).unwrap().norm_sq(&d);
        let coul = msdd_core::gauge::coulomb_energy(&d, &rho).unwrap();
        assert!(e >= pot.kappa * q);
        assert!(e >= 0.5 * kin + pot.kappa * q + coul - 1e-10 * e);
    }
}

#[test]
fn unhalved_kinetic_bound_fails_on_ground_mode() {
    // E = 3 pi^2 / 2 + kappa while ||D psi||^2 + kappa Q = 3 pi^2 + kappa
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    let pot = PotentialSet::new(&d, Collocation::constant(&d, 1.0), false).unwrap();
    let psi = SpectralScalar::mode(&d, [1, 1, 1], Complex::new(1.0, 0.0));
    let a = SpectralVector::zeros(&d, BasisFamily::MaxwellVector);
    let e = energy_e(&d, &psi, &a, None, &pot).unwrap();
    let kin = covariant_derivative(&d, &psi, &a).unwrap().norm_sq(&d);
    assert!((e - (1.5 * PI * PI + 1.0)).abs() < 1e-12);
    assert!(e < kin + pot.kappa);
    assert!(e >= 0.5 * kin + pot.kappa - 1e-12);
}

#[test]
fn global_phase_leaves_observables_unchanged() {
    let d = BoxDomain::new([1.0; 3], [6; 3]).unwrap();
    let pot = well(&d, false);
    let mut r = common::rng(8);
    let psi = common::scalar(&d, &mut r);
    let a = common::solenoidal(&d, &mut r, 1.0);
    let rot = psi.mul_complex(Complex::from_polar(1.0, 0.7));
    let (rho0, j0) = densities(&d, &psi, &a).unwrap();
    let (rho1, j1) = densities(&d, &rot, &a).unwrap();
    assert!(rho0.re.iter().zip(&rho1.re).all(|(x, y)| (x - y).abs() < 1e-12));
    assert!(j0.axpy(-1.0, &j1).max_abs() < 1e-12);
    let e0 = energy_e(&d, &psi, &a, None, &pot).unwrap();
    let e1 = energy_e(&d, &rot, &a, None, &pot).unwrap();
    assert!((e0 - e1).abs() < 1e-12 * e0);
}

#[test]
fn densities_of_real_states() {
    let d = BoxDomain::new([1.0; 3], [6; 3]).unwrap();
    let mut r = common::rng(9);
    let psi = real_part(&common::scalar(&d, &mut r)).mul_complex(Complex::from_polar(1.0, 1.1));
    let a = SpectralVector::zeros(&d, BasisFamily::MaxwellVector);
    let (rho, j) = densities(&d, &psi, &a).unwrap();
    assert!(j.max_abs() < 1e-12);
    // the integral of rho is the constant-mode-free quadrature of |psi|^2
    let (rn, _) = rho.to_nodal(&d);
    let (pr, pi) = psi.to_nodal(&d);
    let pi = pi.unwrap();
    let dens: Vec<f64> = pr.data.iter().zip(&pi.data).map(|(a, b)| a * a + b * b).collect();
    let err = rn.data.iter().zip(&dens).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    // rho is the sine-basis projection of |psi|^2, exact only away from aliasing
    assert!(err < 0.5 * dens.iter().cloned().fold(0.0, f64::max));
    assert!((quadrature(&d, &dens) - charge(&psi)).abs() < 1e-12);
}

#[test]
fn nonpositive_potentials_are_rejected() {
    let d = BoxDomain::new([1.0; 3], [4; 3]).unwrap();
    assert!(PotentialSet::new(&d, Collocation::constant(&d, 0.0), false).is_err());
    assert!(PotentialSet::new(&d, Collocation::constant(&d, -1.0), true).is_err());
    let mut phi = Collocation::constant(&d, 1.0);
    phi.data[3] = f64::NAN;
    assert!(PotentialSet::new(&d, phi, false).is_err());
}

#[test]
fn single_precision_energy() {
    let d = BoxDomain::<f32>::new([1.0; 3], [4; 3]).unwrap();
    let pot = PotentialSet::new(&d, Collocation::constant(&d, 1.0f32), false).unwrap();
    let psi = SpectralScalar::mode(&d, [1, 1, 1], Complex::new(1.0f32, 0.0));
    let a = SpectralVector::zeros(&d, BasisFamily::MaxwellVector);
    let e = energy_e(&d, &psi, &a, None, &pot).unwrap();
    assert!((e - (1.5 * std::f32::consts::PI.powi(2) + 1.0)).abs() < 1e-4);
}
