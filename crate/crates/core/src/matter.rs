//! Magnetic Schrödinger operator, covariant derivative, densities, and the
//! scalar observables `Q` and `E`.
//!
//! Every functional is the trapezoid quadrature of nodal values on the wall-inclusive
//! grid, and every operator is the exact adjoint gradient of such a functional:
//! `D psi = -i G c + A . S c` with `S` the scalar synthesis and `G` its gradient,
//! and `H = 1/2 D^* W D + S^* W (phi + A0) S`. `H` is Hermitian by construction.

use crate::error::{Error, Result};
use crate::gauge::solve_a0;
use crate::num::Real;
use crate::spectral::domain::{BasisFamily, BoxDomain};
use crate::spectral::field::{Collocation, SpectralScalar, SpectralVector};
use crate::spectral::ops::{gradient_adjoint_coeffs, gradient_coeffs, quadrature};
use crate::spectral::transform::{analyze, synthesize};

/// Static potential and the Coulomb switch.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSet<T> {
    pub phi: Collocation<T>,
    /// Grid minimum of `phi`.
    pub kappa: T,
    pub coulomb: bool,
}

impl<T: Real> PotentialSet<T> {
    pub fn new(domain: &BoxDomain<T>, phi: Collocation<T>, coulomb: bool) -> Result<Self> {
        phi.check_grid(domain)?;
        if phi.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("phi must be finite at every node".into()));
        }
        let kappa = phi.min();
        if kappa <= T::zero() {
            return Err(Error::InvalidPotential(format!(
                "min phi must be > 0, grid minimum is {kappa}"
            )));
        }
        Ok(Self { phi, kappa, coulomb })
    }
}

/// Nodal samples of `D psi`, split into real and imaginary parts per component.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantField<T> {
    pub re: [Vec<T>; 3],
    pub im: [Vec<T>; 3],
}

impl<T: Real> CovariantField<T> {
    /// Quadrature of `|D psi|^2`.
    pub fn norm_sq(&self, domain: &BoxDomain<T>) -> T {
        let n = self.re[0].len();
        let mut dens = vec![T::zero(); n];
        for c in 0..3 {
            for i in 0..n {
                dens[i] += self.re[c][i] * self.re[c][i] + self.im[c][i] * self.im[c][i];
            }
        }
        quadrature(domain, &dens)
    }
}

fn psi_family() -> [crate::spectral::AxisBasis; 3] {
    BasisFamily::DirichletScalar.parity(0)
}

fn maxwell(c: usize) -> [crate::spectral::AxisBasis; 3] {
    BasisFamily::MaxwellVector.parity(c)
}

/// Nodal samples of a `MaxwellVector` field.
pub fn vector_nodal<T: Real>(domain: &BoxDomain<T>, v: &SpectralVector<T>) -> Result<[Vec<T>; 3]> {
    v.check_family(BasisFamily::MaxwellVector)?;
    v.check_domain(domain)?;
    Ok([0, 1, 2].map(|c| synthesize(domain, &v.comps[c], maxwell(c))))
}

/// `G c`: nodal gradient of a real sine-family coefficient array.
pub(crate) fn nodal_gradient<T: Real>(domain: &BoxDomain<T>, c: &[T]) -> [Vec<T>; 3] {
    let g = gradient_coeffs(domain, c);
    [0, 1, 2].map(|i| synthesize(domain, &g[i], maxwell(i)))
}

/// `G^* W v`: weighted adjoint of [`nodal_gradient`].
pub(crate) fn nodal_gradient_adjoint<T: Real>(domain: &BoxDomain<T>, v: &[Vec<T>; 3]) -> Vec<T> {
    let a = [0, 1, 2].map(|i| analyze(domain, &v[i], maxwell(i)));
    gradient_adjoint_coeffs(domain, [&a[0], &a[1], &a[2]])
}

/// `H = 1/2 D^* W D + V` for a fixed nodal vector potential and nodal scalar potential.
#[derive(Debug, Clone)]
pub struct MagneticOperator<'d, T> {
    domain: &'d BoxDomain<T>,
    atot: [Vec<T>; 3],
    potential: Option<Vec<T>>,
}

impl<'d, T: Real> MagneticOperator<'d, T> {
    /// `atot` and `potential` are nodal samples; `potential = None` drops the scalar part.
    pub fn new(domain: &'d BoxDomain<T>, atot: [Vec<T>; 3], potential: Option<Vec<T>>) -> Self {
        Self {
            domain,
            atot,
            potential,
        }
    }

    pub fn domain(&self) -> &'d BoxDomain<T> {
        self.domain
    }

    pub fn atot(&self) -> &[Vec<T>; 3] {
        &self.atot
    }

    /// `D psi` from nodal `psi` and its nodal gradient.
    pub fn covariant_nodal(
        &self,
        psi: (&[T], &[T]),
        grad_re: &[Vec<T>; 3],
        grad_im: &[Vec<T>; 3],
    ) -> CovariantField<T> {
        let n = psi.0.len();
        let mut re: [Vec<T>; 3] = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
        let mut im = re.clone();
        for c in 0..3 {
            let a = &self.atot[c];
            for i in 0..n {
                // -i (gr + i gi) + a (pr + i pi)
                re[c][i] = grad_im[c][i] + a[i] * psi.0[i];
                im[c][i] = -grad_re[c][i] + a[i] * psi.1[i];
            }
        }
        CovariantField { re, im }
    }

    /// `D c` for coefficient arrays.
    pub fn covariant(&self, c_re: &[T], c_im: &[T]) -> CovariantField<T> {
        let p = psi_family();
        let pr = synthesize(self.domain, c_re, p);
        let pi = synthesize(self.domain, c_im, p);
        let gr = nodal_gradient(self.domain, c_re);
        let gi = nodal_gradient(self.domain, c_im);
        self.covariant_nodal((&pr, &pi), &gr, &gi)
    }

    /// `H c` given the nodal quantities of `c`; returns coefficient arrays.
    pub fn apply_nodal(&self, psi: (&[T], &[T]), dpsi: &CovariantField<T>) -> (Vec<T>, Vec<T>) {
        let d = self.domain;
        let n = psi.0.len();
        let half = T::lit(0.5);
        let g_r = nodal_gradient_adjoint(d, &dpsi.re);
        let g_i = nodal_gradient_adjoint(d, &dpsi.im);
        let mut sr = vec![T::zero(); n];
        let mut si = vec![T::zero(); n];
        for c in 0..3 {
            let a = &self.atot[c];
            for i in 0..n {
                sr[i] += half * a[i] * dpsi.re[c][i];
                si[i] += half * a[i] * dpsi.im[c][i];
            }
        }
        if let Some(v) = &self.potential {
            for i in 0..n {
                sr[i] += v[i] * psi.0[i];
                si[i] += v[i] * psi.1[i];
            }
        }
        let p = psi_family();
        let mut re = analyze(d, &sr, p);
        let mut im = analyze(d, &si, p);
        for i in 0..re.len() {
            // 1/2 i G^* W (D psi)
            re[i] -= half * g_i[i];
            im[i] += half * g_r[i];
        }
        (re, im)
    }

    /// `H c` for coefficient arrays.
    pub fn apply(&self, c_re: &[T], c_im: &[T]) -> (Vec<T>, Vec<T>) {
        let p = psi_family();
        let pr = synthesize(self.domain, c_re, p);
        let pi = synthesize(self.domain, c_im, p);
        let dpsi = self.covariant(c_re, c_im);
        self.apply_nodal((&pr, &pi), &dpsi)
    }
}

/// How the instantaneous scalar potential `A0` enters.
#[derive(Debug, Clone, Copy)]
pub enum ScalarPotential<'a, T> {
    /// No Coulomb interaction.
    Off,
    /// `A0 = (-Laplace)^{-1} rho` from the current density.
    SelfConsistent,
    /// A prescribed `A0`.
    Given(&'a SpectralScalar<T>),
}

impl<'a, T> ScalarPotential<'a, T> {
    pub fn from_switch(coulomb: bool) -> Self {
        if coulomb {
            ScalarPotential::SelfConsistent
        } else {
            ScalarPotential::Off
        }
    }
}

/// Every nodal quantity of the matter field at one instant.
#[derive(Debug, Clone)]
pub struct MatterEval<'d, T> {
    pub op: MagneticOperator<'d, T>,
    pub psi_re: Vec<T>,
    pub psi_im: Vec<T>,
    pub dpsi: CovariantField<T>,
    /// Coefficients of `A0`, if present.
    pub a0: Option<Vec<T>>,
    /// `Q = ||psi||^2`.
    pub charge: T,
    /// `||D psi||^2`.
    pub kinetic: T,
    /// Quadrature of `phi |psi|^2`.
    pub external: T,
    /// `<rho, A0>`.
    pub coulomb: T,
}

impl<'d, T: Real> MatterEval<'d, T> {
    pub fn new(
        domain: &'d BoxDomain<T>,
        psi: &SpectralScalar<T>,
        atot: &SpectralVector<T>,
        pot: &PotentialSet<T>,
        a0: ScalarPotential<'_, T>,
    ) -> Result<Self> {
        psi.check_domain(domain)?;
        pot.phi.check_grid(domain)?;
        let atot = vector_nodal(domain, atot)?;
        Ok(Self::from_nodal_potential(domain, psi, atot, pot, a0))
    }

    pub(crate) fn from_nodal_potential(
        domain: &'d BoxDomain<T>,
        psi: &SpectralScalar<T>,
        atot: [Vec<T>; 3],
        pot: &PotentialSet<T>,
        a0: ScalarPotential<'_, T>,
    ) -> Self {
        let p = psi_family();
        let im_c = psi.im_or_zeros();
        let psi_re = synthesize(domain, &psi.re, p);
        let psi_im = synthesize(domain, &im_c, p);
        let n = psi_re.len();
        let dens: Vec<T> = (0..n)
            .map(|i| psi_re[i] * psi_re[i] + psi_im[i] * psi_im[i])
            .collect();
        let a0_hat = match a0 {
            ScalarPotential::Off => None,
            ScalarPotential::Given(f) => Some(f.re.clone()),
            ScalarPotential::SelfConsistent => {
                let rho = SpectralScalar::from_parts(domain, analyze(domain, &dens, p), None)
                    .expect("density has scalar layout");
                Some(solve_a0(domain, &rho).expect("same domain").re)
            }
        };
        let mut v = pot.phi.data.clone();
        let mut coulomb = T::zero();
        if let Some(a) = &a0_hat {
            let a0n = synthesize(domain, a, p);
            let w: Vec<T> = (0..n).map(|i| a0n[i] * dens[i]).collect();
            coulomb = quadrature(domain, &w);
            for i in 0..n {
                v[i] += a0n[i];
            }
        }
        let ext: Vec<T> = (0..n).map(|i| pot.phi.data[i] * dens[i]).collect();
        let external = quadrature(domain, &ext);
        let op = MagneticOperator::new(domain, atot, Some(v));
        let gr = nodal_gradient(domain, &psi.re);
        let gi = nodal_gradient(domain, &im_c);
        let dpsi = op.covariant_nodal((&psi_re, &psi_im), &gr, &gi);
        let kinetic = dpsi.norm_sq(domain);
        Self {
            op,
            psi_re,
            psi_im,
            dpsi,
            a0: a0_hat,
            charge: psi.norm_sq(),
            kinetic,
            external,
            coulomb,
        }
    }

    /// `E = <psi, H psi> = 1/2 ||D psi||^2 + <phi, rho> + <A0, rho>`.
    pub fn energy(&self) -> T {
        T::lit(0.5) * self.kinetic + self.external + self.coulomb
    }

    /// Coefficients of `H psi`.
    pub fn h_psi(&self) -> (Vec<T>, Vec<T>) {
        self.op.apply_nodal((&self.psi_re, &self.psi_im), &self.dpsi)
    }

    /// Nodal current `Re[conj(psi) D psi]`.
    pub fn current_nodal(&self) -> [Vec<T>; 3] {
        let n = self.psi_re.len();
        [0, 1, 2].map(|c| {
            (0..n)
                .map(|i| self.psi_re[i] * self.dpsi.re[c][i] + self.psi_im[i] * self.dpsi.im[c][i])
                .collect()
        })
    }

    /// `MaxwellVector` coefficients of the current; also the gradient of
    /// `1/2 ||D psi||^2` with respect to the coefficients of `A`.
    pub fn current_coeffs(&self) -> [Vec<T>; 3] {
        let j = self.current_nodal();
        let d = self.op.domain();
        [0, 1, 2].map(|c| analyze(d, &j[c], maxwell(c)))
    }

    /// Coefficients of `rho = |psi|^2`.
    pub fn density_coeffs(&self) -> Vec<T> {
        let n = self.psi_re.len();
        let dens: Vec<T> = (0..n)
            .map(|i| self.psi_re[i] * self.psi_re[i] + self.psi_im[i] * self.psi_im[i])
            .collect();
        analyze(self.op.domain(), &dens, psi_family())
    }
}

fn a0_arg<T: Real>(a0: Option<&SpectralScalar<T>>) -> ScalarPotential<'_, T> {
    match a0 {
        Some(f) => ScalarPotential::Given(f),
        None => ScalarPotential::Off,
    }
}

/// `D psi = -i grad psi + Atot psi` at the collocation nodes.
pub fn covariant_derivative<T: Real>(
    domain: &BoxDomain<T>,
    psi: &SpectralScalar<T>,
    atot: &SpectralVector<T>,
) -> Result<CovariantField<T>> {
    psi.check_domain(domain)?;
    let op = MagneticOperator::new(domain, vector_nodal(domain, atot)?, None);
    Ok(op.covariant(&psi.re, &psi.im_or_zeros()))
}

/// `H psi = 1/2 D^2 psi + (phi + A0) psi`, back in the scalar basis.
pub fn apply_h<T: Real>(
    domain: &BoxDomain<T>,
    psi: &SpectralScalar<T>,
    atot: &SpectralVector<T>,
    a0: Option<&SpectralScalar<T>>,
    pot: &PotentialSet<T>,
) -> Result<SpectralScalar<T>> {
    if let Some(f) = a0 {
        f.check_domain(domain)?;
    }
    let ev = MatterEval::new(domain, psi, atot, pot, a0_arg(a0))?;
    let (re, im) = ev.h_psi();
    SpectralScalar::from_parts(domain, re, Some(im))
}

/// `(rho, j)` with `rho = |psi|^2` and `j = Re[conj(psi) D psi]`.
pub fn densities<T: Real>(
    domain: &BoxDomain<T>,
    psi: &SpectralScalar<T>,
    atot: &SpectralVector<T>,
) -> Result<(SpectralScalar<T>, SpectralVector<T>)> {
    let pot = PotentialSet {
        phi: Collocation::constant(domain, T::one()),
        kappa: T::one(),
        coulomb: false,
    };
    let ev = MatterEval::new(domain, psi, atot, &pot, ScalarPotential::Off)?;
    let rho = SpectralScalar::from_parts(domain, ev.density_coeffs(), None)?;
    let j = SpectralVector::from_comps(domain, BasisFamily::MaxwellVector, ev.current_coeffs())?;
    Ok((rho, j))
}

/// `Q = ||psi||^2`.
pub fn charge<T: Real>(psi: &SpectralScalar<T>) -> T {
    psi.norm_sq()
}

/// `E = <psi, H psi>`.
pub fn energy_e<T: Real>(
    domain: &BoxDomain<T>,
    psi: &SpectralScalar<T>,
    atot: &SpectralVector<T>,
    a0: Option<&SpectralScalar<T>>,
    pot: &PotentialSet<T>,
) -> Result<T> {
    Ok(MatterEval::new(domain, psi, atot, pot, a0_arg(a0))?.energy())
}
