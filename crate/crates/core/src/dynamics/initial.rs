use rand::Rng;

use super::State;
use crate::gauge::leray_in_place;
use crate::num::Real;
use crate::rng::stream;
use crate::spectral::domain::{BasisFamily, BoxDomain};
use crate::spectral::field::{for_each_mode, SpectralScalar, SpectralVector};
use num_complex::Complex;

/// Initial-data families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialKind<T> {
    /// `psi` on the lowest scalar mode; `A`, `Pi` on the lowest solenoidal mode.
    Ground,
    /// Random band-limited fields.
    Random,
    /// Random fields multiplied by a factor after normalization.
    Scaled(T),
}

/// Target norms for the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSpec<T> {
    pub kind: InitialKind<T>,
    /// `||A||`.
    pub a_norm: T,
    /// `||Pi||`.
    pub pi_norm: T,
    /// `Q = ||psi||^2`.
    pub charge: T,
    /// Largest wave index per axis that random data may excite.
    pub band: usize,
}

impl<T: Real> Default for InitialSpec<T> {
    fn default() -> Self {
        Self {
            kind: InitialKind::Ground,
            a_norm: T::zero(),
            pi_norm: T::zero(),
            charge: T::one(),
            band: 3,
        }
    }
}

fn normalized<T: Real>(v: SpectralVector<T>, target: T) -> SpectralVector<T> {
    let n = v.norm_sq().sqrt();
    if n == T::zero() {
        v
    } else {
        v.scaled(target / n)
    }
}

fn random_vector<T: Real>(
    domain: &BoxDomain<T>,
    rng: &mut impl Rng,
    band: usize,
    target: T,
) -> SpectralVector<T> {
    let fam = BasisFamily::MaxwellVector;
    let mut comps = [0, 1, 2].map(|c| vec![T::zero(); domain.coeff_len(fam.parity(c))]);
    for (c, comp) in comps.iter_mut().enumerate() {
        for_each_mode(domain, fam.parity(c), |i, k, kv| {
            if k.iter().all(|&ki| ki <= band) {
                let w = T::one() / (T::one() + kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
                comp[i] = w * T::lit(rng.gen_range(-1.0..1.0));
            }
        });
    }
    leray_in_place(domain, &mut comps);
    let v = SpectralVector::from_comps(domain, fam, comps).expect("layout");
    normalized(v, target)
}

fn random_scalar<T: Real>(
    domain: &BoxDomain<T>,
    rng: &mut impl Rng,
    band: usize,
    charge: T,
) -> SpectralScalar<T> {
    let p = SpectralScalar::<T>::parity();
    let n = domain.coeff_len(p);
    let mut re = vec![T::zero(); n];
    let mut im = vec![T::zero(); n];
    for_each_mode(domain, p, |i, k, kv| {
        if k.iter().all(|&ki| ki <= band) {
            let w = T::one() / (T::one() + kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
            re[i] = w * T::lit(rng.gen_range(-1.0..1.0));
            im[i] = w * T::lit(rng.gen_range(-1.0..1.0));
        }
    });
    let psi = SpectralScalar::from_parts(domain, re, Some(im)).expect("layout");
    let q = psi.norm_sq();
    if q == T::zero() {
        psi
    } else {
        psi.scaled((charge / q).sqrt())
    }
}

/// Deterministic initial state for a given seed.
pub fn make_initial<T: Real>(domain: &BoxDomain<T>, spec: &InitialSpec<T>, seed: u64) -> State<T> {
    match spec.kind {
        InitialKind::Ground => {
            let fam = BasisFamily::MaxwellVector;
            let e = SpectralVector::mode(domain, fam, [0, 1, 1], [T::one(), T::zero(), T::zero()]);
            State {
                a: e.scaled(spec.a_norm),
                pi: e.scaled(spec.pi_norm),
                psi: SpectralScalar::mode(domain, [1, 1, 1], Complex::new(spec.charge.sqrt(), T::zero()))
                    .into_complex(),
                t: T::zero(),
            }
        }
        InitialKind::Random | InitialKind::Scaled(_) => {
            let band = spec.band.max(1);
            let mut rng = stream(seed, "initial");
            let a = random_vector(domain, &mut rng, band, spec.a_norm);
            let pi = random_vector(domain, &mut rng, band, spec.pi_norm);
            let psi = random_scalar(domain, &mut rng, band, spec.charge);
            let f = match spec.kind {
                InitialKind::Scaled(f) => f,
                _ => T::one(),
            };
            State {
                a: a.scaled(f),
                pi: pi.scaled(f),
                psi: psi.scaled(f),
                t: T::zero(),
            }
        }
    }
}
