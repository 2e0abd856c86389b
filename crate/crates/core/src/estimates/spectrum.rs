//! Spectral estimates: the Maxwell operator's lowest eigenvalue, magnetic norm
//! equivalence constants, and relative bounds for the magnetic perturbation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::{asymmetry, assemble, dense_extremes, hermitian_extremes, lanczos_extremes, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::gauge::leray_in_place;
use crate::matter::{vector_nodal, MagneticOperator};
use crate::spectral::domain::{BasisFamily, BoxDomain};
use crate::spectral::field::{for_each_mode, Collocation, SpectralScalar, SpectralVector};
use crate::spectral::ops::{derivative_coeffs, divergence, norm_vector, NormKind};
use crate::spectral::transform::{analyze, synthesize};

/// Lowest eigenvalue of `-Laplace` on solenoidal `MaxwellVector` fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMin {
    pub value: f64,
    /// Minimizing wave indices.
    pub mode: [usize; 3],
    /// A minimizing amplitude pattern.
    pub pattern: [f64; 3],
}

impl LambdaMin {
    /// `C` in `||A||^2 <= C ||grad A||^2`.
    pub fn poincare_constant(&self) -> f64 {
        1.0 / self.value
    }
}

/// Enumerates admissible modes: at most one zero wave index, since a tangential
/// sine factor vanishes whenever two indices are zero.
pub fn lambda_min(domain: &BoxDomain<f64>) -> LambdaMin {
    let n = domain.modes();
    let kap = [0, 1, 2].map(|i| &domain.axis(i).kappa);
    let mut best = LambdaMin {
        value: f64::INFINITY,
        mode: [0; 3],
        pattern: [0.0; 3],
    };
    for k0 in 0..=n[0] {
        for k1 in 0..=n[1] {
            for k2 in 0..=n[2] {
                let k = [k0, k1, k2];
                let zeros = k.iter().filter(|&&x| x == 0).count();
                if zeros > 1 {
                    continue;
                }
                let kv = [kap[0][k0], kap[1][k1], kap[2][k2]];
                let v = kv.iter().map(|x| x * x).sum::<f64>();
                if v < best.value {
                    let pattern = match k.iter().position(|&x| x == 0) {
                        Some(z) => {
                            let mut p = [0.0; 3];
                            p[z] = 1.0;
                            p
                        }
                        // any vector orthogonal to kappa
                        None => [kv[1], -kv[0], 0.0],
                    };
                    best = LambdaMin {
                        value: v,
                        mode: k,
                        pattern,
                    };
                }
            }
        }
    }
    best
}

fn split(domain: &BoxDomain<f64>, x: &[f64]) -> [Vec<f64>; 3] {
    let lens = [0, 1, 2].map(|c| domain.coeff_len(BasisFamily::MaxwellVector.parity(c)));
    [
        x[..lens[0]].to_vec(),
        x[lens[0]..lens[0] + lens[1]].to_vec(),
        x[lens[0] + lens[1]..].to_vec(),
    ]
}

/// `sum_k d_k^* W d_k` assembled from nodal derivative samples.
fn nodal_dirichlet_form(domain: &BoxDomain<f64>, comps: &[Vec<f64>; 3]) -> [Vec<f64>; 3] {
    let fam = BasisFamily::MaxwellVector;
    let mut out = [0, 1, 2].map(|c| vec![0.0; comps[c].len()]);
    for c in 0..3 {
        for ax in 0..3 {
            let (dv, p) = derivative_coeffs(domain, &comps[c], fam.parity(c), ax);
            let back = analyze(domain, &synthesize(domain, &dv, p), p);
            // the transpose of a derivative is minus the derivative in the other direction
            let (dt, _) = derivative_coeffs(domain, &back, p, ax);
            for (o, v) in out[c].iter_mut().zip(dt) {
                *o -= v;
            }
        }
    }
    out
}

/// `lambda_min` by Lanczos on `P Lambda P + c (I - P)`, with `Lambda` assembled by
/// nodal quadrature and `c` above the spectrum so the gradient part is pushed away.
pub fn lambda_min_lanczos(domain: &BoxDomain<f64>, tol: f64, seed: u64) -> Result<f64> {
    let fam = BasisFamily::MaxwellVector;
    let n: usize = (0..3).map(|c| domain.coeff_len(fam.parity(c))).sum();
    let shift = 2.0 * domain.max_kappa_sq();
    let apply = |x: &[f64]| {
        let mut v = split(domain, x);
        let mut pv = v.clone();
        leray_in_place(domain, &mut pv);
        let mut lp = nodal_dirichlet_form(domain, &pv);
        leray_in_place(domain, &mut lp);
        let mut out = Vec::with_capacity(n);
        for c in 0..3 {
            for i in 0..v[c].len() {
                v[c][i] = lp[c][i] + shift * (v[c][i] - pv[c][i]);
            }
            out.extend_from_slice(&v[c]);
        }
        out
    };
    Ok(lanczos_extremes(n, apply, tol, n, seed)?.0)
}

/// Which norm-equivalence pair to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceOrder {
    /// `(||D psi||^2 + ||psi||^2, ||psi||_{H^1}^2)`.
    H1,
    /// `(||H psi||^2 + ||psi||^2, ||psi||_{H^2}^2)`.
    H2,
}

/// Extreme generalized eigenvalues of a quadratic-form pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighReport {
    pub c1: f64,
    pub c2: f64,
    pub order: EquivalenceOrder,
    /// `||A||_{H^1}` of the field used.
    pub a_h1_norm: f64,
    pub modes: [usize; 3],
}

fn sobolev_weights(domain: &BoxDomain<f64>, power: i32) -> Vec<f64> {
    let p = SpectralScalar::<f64>::parity();
    let mut w = vec![0.0; domain.coeff_len(p)];
    for_each_mode(domain, p, |i, _, kv| {
        w[i] = (1.0 + kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]).powi(power);
    });
    w
}

fn apply_complex(op: &MagneticOperator<'_, f64>, x: &[Complex64], scale: f64) -> Vec<Complex64> {
    let re: Vec<f64> = x.iter().map(|z| z.re).collect();
    let im: Vec<f64> = x.iter().map(|z| z.im).collect();
    let (hr, hi) = op.apply(&re, &im);
    hr.into_iter()
        .zip(hi)
        .map(|(a, b)| Complex64::new(scale * a, scale * b))
        .collect()
}

/// Norm-equivalence constants for the magnetic potential `a` (a `MaxwellVector`
/// field). `potential` is the nodal `phi + A0` entering `H`; `None` means zero.
///
/// The bracket `[||D psi|| + ||psi||]^2` lies between this quadratic form and
/// twice it, so the reported constants bound it up to that factor.
pub fn rayleigh_equivalence(
    domain: &BoxDomain<f64>,
    a: &SpectralVector<f64>,
    potential: Option<&Collocation<f64>>,
    order: EquivalenceOrder,
) -> Result<RayleighReport> {
    let atot = vector_nodal(domain, a)?;
    if let Some(p) = potential {
        p.check_grid(domain)?;
    }
    let n = domain.coeff_len(SpectralScalar::<f64>::parity());
    let pot = potential.map(|p| p.data.clone());
    let (c1, c2) = match order {
        EquivalenceOrder::H1 => {
            let op = MagneticOperator::new(domain, atot, None);
            let w: Vec<f64> = sobolev_weights(domain, 1).iter().map(|x| 1.0 / x.sqrt()).collect();
            // W^{-1/2} (D^* D + I) W^{-1/2}
            let apply = |x: &[Complex64]| {
                let y: Vec<Complex64> = x.iter().zip(&w).map(|(z, s)| z * *s).collect();
                let k = apply_complex(&op, &y, 2.0);
                k.iter()
                    .zip(&y)
                    .zip(&w)
                    .map(|((kz, yz), s)| (kz + yz) * *s)
                    .collect()
            };
            hermitian_extremes(n, apply, 1e-10, 11)?
        }
        EquivalenceOrder::H2 => {
            let op = MagneticOperator::new(domain, atot, pot);
            let w: Vec<f64> = sobolev_weights(domain, 2).iter().map(|x| 1.0 / x.sqrt()).collect();
            if n <= DENSE_LIMIT {
                let h = assemble(n, |x| apply_complex(&op, x, 1.0));
                let s = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    n,
                    w.iter().map(|x| Complex64::new(*x, 0.0)),
                ));
                let k = h.adjoint() * &h + DMatrix::identity(n, n);
                dense_extremes(&(&s * k * &s))?
            } else {
                let apply = |x: &[Complex64]| {
                    let y: Vec<Complex64> = x.iter().zip(&w).map(|(z, s)| z * *s).collect();
                    let hy = apply_complex(&op, &y, 1.0);
                    let hhy = apply_complex(&op, &hy, 1.0);
                    hhy.iter()
                        .zip(&y)
                        .zip(&w)
                        .map(|((kz, yz), s)| (kz + yz) * *s)
                        .collect()
                };
                hermitian_extremes(n, apply, 1e-10, 12)?
            }
        }
    };
    Ok(RayleighReport {
        c1,
        c2,
        order,
        a_h1_norm: norm_vector(domain, a, NormKind::H1)?,
        modes: domain.modes(),
    })
}

/// Relative-bound estimate for `T = D^* D - (-Laplace)` at one `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeBound {
    pub delta: f64,
    /// `max(0, lambda_max(T - delta L), lambda_max(-T - delta L))`, `L = 1 - Laplace`.
    pub c_delta: f64,
    /// Largest entry of `|T - T^*|` (dense) or probe defect (iterative).
    pub asymmetry: f64,
}

/// Estimates the constant in `|<psi, T psi>| <= delta ||psi||_{H^1}^2 + C_delta ||psi||^2`.
pub fn relative_bound_t(
    domain: &BoxDomain<f64>,
    a: &SpectralVector<f64>,
    delta: f64,
) -> Result<RelativeBound> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Range(format!("delta must be > 0, got {delta}")));
    }
    let div = divergence(domain, a)?.norm_sq().sqrt();
    let scale = a.norm_sq().sqrt().max(1.0);
    if div > 1e-10 * scale {
        return Err(Error::Range(format!(
            "A must be divergence-free, ||div A|| = {div:e}"
        )));
    }
    let op = MagneticOperator::new(domain, vector_nodal(domain, a)?, None);
    let n = domain.coeff_len(SpectralScalar::<f64>::parity());
    let lap = sobolev_weights(domain, 1);
    let t_apply = |x: &[Complex64]| {
        let mut y = apply_complex(&op, x, 2.0);
        for i in 0..n {
            y[i] -= x[i] * (lap[i] - 1.0);
        }
        y
    };
    let lap_ref = &lap;
    let t_ref = &t_apply;
    let shifted = |sign: f64| {
        move |x: &[Complex64]| {
            let (t_apply, lap) = (t_ref, lap_ref);
            let t = t_apply(x);
            (0..n).map(|i| t[i] * sign - x[i] * (delta * lap[i])).collect::<Vec<_>>()
        }
    };
    let (asym, up, down) = if n <= DENSE_LIMIT {
        let t = assemble(n, &t_apply);
        let l = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            lap.iter().map(|x| Complex64::new(delta * x, 0.0)),
        ));
        let up = dense_extremes(&(&t - &l))?.1;
        let down = dense_extremes(&(-&t - &l))?.1;
        (asymmetry(&t), up, down)
    } else {
        let up = hermitian_extremes(n, shifted(1.0), 1e-10, 21)?.1;
        let down = hermitian_extremes(n, shifted(-1.0), 1e-10, 22)?.1;
        (probe_asymmetry(n, &t_apply), up, down)
    };
    Ok(RelativeBound {
        delta,
        c_delta: up.max(down).max(0.0),
        asymmetry: asym,
    })
}

fn probe_asymmetry(n: usize, apply: impl Fn(&[Complex64]) -> Vec<Complex64>) -> f64 {
    use rand::Rng;
    let mut rng = crate::rng::stream(5, "asymmetry-probe");
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let ty = apply(&y);
        let tx = apply(&x);
        let a: Complex64 = x.iter().zip(&ty).map(|(u, v)| u.conj() * v).sum();
        let b: Complex64 = tx.iter().zip(&y).map(|(u, v)| u.conj() * v).sum();
        worst = worst.max((a - b).norm());
    }
    worst
}
