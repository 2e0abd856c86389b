use rand::Rng;
use rand_distr::StandardNormal;

use super::functionals::canonical_energy;
use super::rhs::rhs;
use super::{State, System};
use crate::error::Result;
use crate::gauge::leray_in_place;
use crate::num::Real;
use crate::rng::stream;
use crate::spectral::domain::BasisFamily;
use crate::spectral::field::SpectralVector;
use crate::spectral::ops::{curl, curl_adjoint, gradient_norm_sq_nodal, laplacian_vector};

/// Max relative errors of analytic gradients against central differences.
///
/// Errors are scaled by `|grad| |direction|` of the block being probed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport<T> {
    pub a: T,
    pub pi: T,
    pub psi_re: T,
    pub psi_im: T,
    /// Largest of the four block errors.
    pub max_rel_err: T,
    /// Mismatch between `rhs` and the Hamiltonian form built from the gradients.
    pub rhs_consistency: T,
    /// `sum_k ||d_k A||^2` by quadrature against `-2 Laplace A`.
    pub field_gradient: T,
}

/// Flat analytic gradient of the canonical energy, in `State::to_flat` order.
fn analytic_gradient<T: Real>(system: &System<T>, state: &State<T>) -> Vec<T> {
    let d = &system.domain;
    let ev = system.matter(state);
    let cc = curl_adjoint(d, &curl(d, &state.a).expect("MaxwellVector")).expect("CurlDual");
    let j = ev.current_coeffs();
    let (hr, hi) = ev.h_psi();
    let two = T::lit(2.0);
    let mut g = Vec::with_capacity(State::<T>::flat_len(d));
    for c in 0..3 {
        g.extend(cc.comps[c].iter().zip(&j[c]).map(|(x, y)| *x + *y));
    }
    for c in 0..3 {
        g.extend_from_slice(&state.pi.comps[c]);
    }
    g.extend(hr.iter().map(|x| two * *x));
    g.extend(hi.iter().map(|x| two * *x));
    g
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Central difference of `f` along `dir` against `<grad, dir>`, scaled by `|grad| |dir|`.
fn directional_error<T: Real>(
    f: impl Fn(&[T]) -> T,
    x: &[T],
    grad: &[T],
    dir: &[T],
    h: T,
) -> T {
    let plus: Vec<T> = x.iter().zip(dir).map(|(a, b)| *a + h * *b).collect();
    let minus: Vec<T> = x.iter().zip(dir).map(|(a, b)| *a - h * *b).collect();
    let fd = (f(&plus) - f(&minus)) / (T::lit(2.0) * h);
    let scale = norm(grad) * norm(dir);
    if scale == T::zero() {
        return fd.abs();
    }
    (fd - dot(grad, dir)).abs() / scale
}

/// Compares analytic gradients of the canonical energy with central differences
/// of step `h` along `directions` random directions per block.
pub fn grad_check<T: Real>(
    system: &System<T>,
    state: &State<T>,
    h: T,
    directions: usize,
    seed: u64,
) -> Result<GradCheckReport<T>> {
    let d = &system.domain;
    state.check(d)?;
    let x = state.to_flat();
    let grad = analytic_gradient(system, state);
    let energy = |v: &[T]| {
        let s = State::from_flat(d, state.t, v).expect("flat layout");
        canonical_energy(system, &s)
    };
    let fam = BasisFamily::MaxwellVector;
    let vlen: usize = (0..3).map(|c| d.coeff_len(fam.parity(c))).sum();
    let slen = d.coeff_len(crate::spectral::SpectralScalar::<T>::parity());
    let blocks = [(0, vlen), (vlen, 2 * vlen), (2 * vlen, 2 * vlen + slen), (2 * vlen + slen, x.len())];
    let mut rng = stream(seed, "gradcheck");
    let mut errs = [T::zero(); 4];
    for (b, &(lo, hi)) in blocks.iter().enumerate() {
        let mut g_block = vec![T::zero(); x.len()];
        g_block[lo..hi].copy_from_slice(&grad[lo..hi]);
        for _ in 0..directions {
            let mut dir = vec![T::zero(); x.len()];
            for v in &mut dir[lo..hi] {
                *v = T::lit(rng.sample::<f64, _>(StandardNormal));
            }
            let e = directional_error(&energy, &x, &g_block, &dir, h);
            errs[b] = errs[b].max(e);
        }
    }

    // Hamiltonian form of the right-hand side
    let p = &system.params;
    let ev = system.matter(state);
    let energy_e = ev.energy();
    let mut ga = [0, 1, 2].map(|c| {
        let start: usize = (0..c).map(|i| d.coeff_len(fam.parity(i))).sum();
        grad[start..start + d.coeff_len(fam.parity(c))].to_vec()
    });
    leray_in_place(d, &mut ga);
    let r = rhs(system, state)?;
    let mut worst = T::zero();
    let mut scale = T::zero();
    for c in 0..3 {
        for i in 0..ga[c].len() {
            let want = -ga[c][i] - p.sigma * state.pi.comps[c][i];
            worst = worst.max((r.pi.comps[c][i] - want).abs());
            worst = worst.max((r.a.comps[c][i] - state.pi.comps[c][i]).abs());
            scale = scale.max(want.abs());
        }
    }
    let half = T::lit(0.5);
    let cim = state.psi.im_or_zeros();
    let rim = r.psi.im_or_zeros();
    for i in 0..slen {
        let hr = half * grad[2 * vlen + i];
        let hi = half * grad[2 * vlen + slen + i];
        let want_re = hi - p.epsilon * hr - p.gamma * energy_e * state.psi.re[i];
        let want_im = -hr - p.epsilon * hi - p.gamma * energy_e * cim[i];
        worst = worst.max((r.psi.re[i] - want_re).abs()).max((rim[i] - want_im).abs());
        scale = scale.max(want_re.abs()).max(want_im.abs());
    }
    let rhs_consistency = if scale > T::zero() { worst / scale } else { worst };

    // sum_k ||d_k A||^2 against -2 Laplace A
    let lap = laplacian_vector(d, &state.a)?;
    let mut g4 = Vec::with_capacity(vlen);
    for c in 0..3 {
        g4.extend(lap.comps[c].iter().map(|v| T::lit(-2.0) * *v));
    }
    let a_flat: Vec<T> = state.a.comps.iter().flatten().copied().collect();
    let lens = [0, 1, 2].map(|c| d.coeff_len(fam.parity(c)));
    let f4 = |v: &[T]| {
        let comps = [
            v[..lens[0]].to_vec(),
            v[lens[0]..lens[0] + lens[1]].to_vec(),
            v[lens[0] + lens[1]..].to_vec(),
        ];
        let a = SpectralVector::from_comps(d, fam, comps).expect("layout");
        gradient_norm_sq_nodal(d, &a)
    };
    let mut field_gradient = T::zero();
    for _ in 0..directions {
        let dir: Vec<T> = (0..vlen)
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        field_gradient = field_gradient.max(directional_error(&f4, &a_flat, &g4, &dir, h));
    }

    Ok(GradCheckReport {
        a: errs[0],
        pi: errs[1],
        psi_re: errs[2],
        psi_im: errs[3],
        max_rel_err: errs.iter().copied().fold(T::zero(), T::max),
        rhs_consistency,
        field_gradient,
    })
}
