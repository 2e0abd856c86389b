use crate::error::{Error, Result};
use crate::num::Real;
use crate::spectral::domain::{BasisFamily, BoxDomain};
use crate::spectral::field::{ScalarKind, SpectralScalar, SpectralVector};

/// The dynamical triple `(A, Pi, psi)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub a: SpectralVector<T>,
    pub pi: SpectralVector<T>,
    pub psi: SpectralScalar<T>,
    pub t: T,
}

/// Time derivative of a [`State`].
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent<T> {
    pub a: SpectralVector<T>,
    pub pi: SpectralVector<T>,
    pub psi: SpectralScalar<T>,
}

impl<T: Real> State<T> {
    pub fn zeros(domain: &BoxDomain<T>) -> Self {
        Self {
            a: SpectralVector::zeros(domain, BasisFamily::MaxwellVector),
            pi: SpectralVector::zeros(domain, BasisFamily::MaxwellVector),
            psi: SpectralScalar::zeros(domain, ScalarKind::Complex),
            t: T::zero(),
        }
    }

    pub fn check(&self, domain: &BoxDomain<T>) -> Result<()> {
        self.a.check_family(BasisFamily::MaxwellVector)?;
        self.pi.check_family(BasisFamily::MaxwellVector)?;
        self.a.check_domain(domain)?;
        self.pi.check_domain(domain)?;
        self.psi.check_domain(domain)
    }

    /// `self + h * d`, with time advanced by `h`.
    pub fn advanced(&self, h: T, d: &Tangent<T>) -> Self {
        let mut psi = self.psi.clone().into_complex();
        let dim = d.psi.im_or_zeros();
        for (x, y) in psi.re.iter_mut().zip(&d.psi.re) {
            *x += h * *y;
        }
        if let Some(im) = psi.im.as_mut() {
            for (x, y) in im.iter_mut().zip(dim.iter()) {
                *x += h * *y;
            }
        }
        Self {
            a: self.a.axpy(h, &d.a),
            pi: self.pi.axpy(h, &d.pi),
            psi,
            t: self.t + h,
        }
    }

    /// Every coefficient in storage order: `A` components, `Pi` components, `Re psi`, `Im psi`.
    pub fn to_flat(&self) -> Vec<T> {
        let mut out = Vec::new();
        for c in &self.a.comps {
            out.extend_from_slice(c);
        }
        for c in &self.pi.comps {
            out.extend_from_slice(c);
        }
        out.extend_from_slice(&self.psi.re);
        out.extend_from_slice(&self.psi.im_or_zeros());
        out
    }

    pub fn flat_len(domain: &BoxDomain<T>) -> usize {
        let v: usize = (0..3)
            .map(|c| domain.coeff_len(BasisFamily::MaxwellVector.parity(c)))
            .sum();
        2 * v + 2 * domain.coeff_len(SpectralScalar::<T>::parity())
    }

    /// Inverse of [`State::to_flat`].
    pub fn from_flat(domain: &BoxDomain<T>, t: T, data: &[T]) -> Result<Self> {
        if data.len() != Self::flat_len(domain) {
            return Err(Error::Dimension(format!(
                "state needs {} coefficients, got {}",
                Self::flat_len(domain),
                data.len()
            )));
        }
        let mut pos = 0;
        let mut take = |n: usize| {
            let s = data[pos..pos + n].to_vec();
            pos += n;
            s
        };
        let fam = BasisFamily::MaxwellVector;
        let lens = [0, 1, 2].map(|c| domain.coeff_len(fam.parity(c)));
        let a = [0, 1, 2].map(|c| take(lens[c]));
        let pi = [0, 1, 2].map(|c| take(lens[c]));
        let ns = domain.coeff_len(SpectralScalar::<T>::parity());
        let re = take(ns);
        let im = take(ns);
        Ok(Self {
            a: SpectralVector::from_comps(domain, fam, a)?,
            pi: SpectralVector::from_comps(domain, fam, pi)?,
            psi: SpectralScalar::from_parts(domain, re, Some(im))?,
            t,
        })
    }

    /// Largest coefficient magnitude, `NaN` if any coefficient is not finite.
    pub fn finite_max(&self) -> T {
        let mut m = T::zero();
        for v in self.to_flat() {
            if !v.is_finite() {
                return T::nan();
            }
            m = m.max(v.abs());
        }
        m
    }
}
