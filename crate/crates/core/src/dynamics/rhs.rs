use super::{State, System, Tangent};
use crate::error::{Error, Result};
use crate::gauge::leray_in_place;
use crate::num::Real;
use crate::spectral::domain::BasisFamily;
use crate::spectral::field::{for_each_mode, SpectralScalar, SpectralVector};
use crate::spectral::ops::dealias_coeffs;

fn check_finite<T: Real>(t: T, what: &str, data: &[T]) -> Result<()> {
    if data.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Divergence {
            t: t.as_f64(),
            what: format!("non-finite {what}"),
        })
    }
}

/// `(dA/dt, dPi/dt, dpsi/dt)`:
/// `A' = Pi`, `Pi' = Laplace A - sigma Pi - P j`, `psi' = -i (1 - i eps) H psi - gamma E psi`.
pub fn rhs<T: Real>(system: &System<T>, state: &State<T>) -> Result<Tangent<T>> {
    let d = &system.domain;
    let p = &system.params;
    state.check(d)?;
    for (name, f) in [("A", &state.a), ("Pi", &state.pi)] {
        for c in &f.comps {
            check_finite(state.t, name, c)?;
        }
    }
    check_finite(state.t, "psi", &state.psi.re)?;
    check_finite(state.t, "psi", &state.psi.im_or_zeros())?;

    let ev = system.matter(state);
    let energy = ev.energy();
    let (mut hr, mut hi) = ev.h_psi();
    let mut j = ev.current_coeffs();
    let cr = &state.psi.re;
    let ci = state.psi.im_or_zeros();
    let sp = SpectralScalar::<T>::parity();
    if p.dealias {
        // keep the free kinetic part exact, filter the rest
        let half = T::lit(0.5);
        let mut kin = vec![T::zero(); cr.len()];
        for_each_mode(d, sp, |i, _, kv| kin[i] = half * (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]));
        for i in 0..hr.len() {
            hr[i] -= kin[i] * cr[i];
            hi[i] -= kin[i] * ci[i];
        }
        dealias_coeffs(d, &mut hr, sp);
        dealias_coeffs(d, &mut hi, sp);
        for i in 0..hr.len() {
            hr[i] += kin[i] * cr[i];
            hi[i] += kin[i] * ci[i];
        }
        for (c, comp) in j.iter_mut().enumerate() {
            dealias_coeffs(d, comp, BasisFamily::MaxwellVector.parity(c));
        }
    }
    let damp = p.gamma * energy;
    let mut dre = Vec::with_capacity(hr.len());
    let mut dim = Vec::with_capacity(hr.len());
    for i in 0..hr.len() {
        // -i (1 - i eps)(hr + i hi) = (hi - eps hr) + i(-hr - eps hi)
        dre.push(hi[i] - p.epsilon * hr[i] - damp * cr[i]);
        dim.push(-hr[i] - p.epsilon * hi[i] - damp * ci[i]);
    }

    let fam = BasisFamily::MaxwellVector;
    let mut dpi: [Vec<T>; 3] = [0, 1, 2].map(|c| {
        let k2 = d.kappa_sq_table(fam.parity(c));
        (0..k2.len())
            .map(|i| -k2[i] * state.a.comps[c][i] - p.sigma * state.pi.comps[c][i] - j[c][i])
            .collect()
    });
    leray_in_place(d, &mut dpi);
    let out = Tangent {
        a: state.pi.clone(),
        pi: SpectralVector::from_comps(d, fam, dpi)?,
        psi: SpectralScalar::from_parts(d, dre, Some(dim))?,
    };
    for c in &out.pi.comps {
        check_finite(state.t, "dPi/dt", c)?;
    }
    check_finite(state.t, "dpsi/dt", &out.psi.re)?;
    Ok(out)
}
