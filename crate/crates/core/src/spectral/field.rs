//! Coefficient-space and collocation-space field containers.

use num_complex::Complex;

use super::domain::{flat_index, BasisFamily, BoxDomain, Parity};
use super::transform::{analyze, synthesize};
use crate::error::{Error, Result};
use crate::num::Real;

/// Whether a scalar field carries an imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Real,
    Complex,
}

/// Samples of a real field on the collocation nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Collocation<T> {
    pub shape: [usize; 3],
    pub data: Vec<T>,
}

impl<T: Real> Collocation<T> {
    pub fn zeros(domain: &BoxDomain<T>) -> Self {
        Self {
            shape: domain.node_shape(),
            data: vec![T::zero(); domain.node_count()],
        }
    }

    pub fn constant(domain: &BoxDomain<T>, value: T) -> Self {
        Self {
            shape: domain.node_shape(),
            data: vec![value; domain.node_count()],
        }
    }

    pub fn from_fn(domain: &BoxDomain<T>, f: impl Fn([T; 3]) -> T) -> Self {
        Self {
            shape: domain.node_shape(),
            data: domain.node_positions().into_iter().map(f).collect(),
        }
    }

    pub fn check_grid(&self, domain: &BoxDomain<T>) -> Result<()> {
        if self.shape != domain.node_shape() || self.data.len() != domain.node_count() {
            return Err(Error::Dimension(format!(
                "collocation grid {:?} does not match domain nodes {:?}",
                self.shape,
                domain.node_shape()
            )));
        }
        Ok(())
    }

    pub fn min(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Scalar field in the `DirichletScalar` basis (sine in every axis).
///
/// Complex fields keep real and imaginary coefficients as two real arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalar<T> {
    modes: [usize; 3],
    pub re: Vec<T>,
    pub im: Option<Vec<T>>,
}

impl<T: Real> SpectralScalar<T> {
    pub fn family(&self) -> BasisFamily {
        BasisFamily::DirichletScalar
    }

    pub fn parity() -> Parity {
        BasisFamily::DirichletScalar.parity(0)
    }

    pub fn zeros(domain: &BoxDomain<T>, kind: ScalarKind) -> Self {
        let n = domain.coeff_len(Self::parity());
        Self {
            modes: domain.modes(),
            re: vec![T::zero(); n],
            im: match kind {
                ScalarKind::Real => None,
                ScalarKind::Complex => Some(vec![T::zero(); n]),
            },
        }
    }

    pub fn from_parts(domain: &BoxDomain<T>, re: Vec<T>, im: Option<Vec<T>>) -> Result<Self> {
        let n = domain.coeff_len(Self::parity());
        if re.len() != n || im.as_ref().is_some_and(|v| v.len() != n) {
            return Err(Error::Dimension(format!(
                "scalar coefficient arrays must have length {n}"
            )));
        }
        Ok(Self {
            modes: domain.modes(),
            re,
            im,
        })
    }

    /// Single normalized sine mode with wave indices `k` (all >= 1).
    pub fn mode(domain: &BoxDomain<T>, k: [usize; 3], value: Complex<T>) -> Self {
        let mut f = Self::zeros(domain, ScalarKind::Complex);
        let idx = flat_index(
            domain.coeff_shape(Self::parity()),
            [k[0] - 1, k[1] - 1, k[2] - 1],
        );
        f.re[idx] = value.re;
        f.im.as_mut().unwrap()[idx] = value.im;
        if value.im == T::zero() {
            f.im = None;
        }
        f
    }

    pub fn kind(&self) -> ScalarKind {
        if self.im.is_some() {
            ScalarKind::Complex
        } else {
            ScalarKind::Real
        }
    }

    pub fn modes(&self) -> [usize; 3] {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// Promotes a real field to complex storage.
    pub fn into_complex(mut self) -> Self {
        if self.im.is_none() {
            self.im = Some(vec![T::zero(); self.re.len()]);
        }
        self
    }

    pub fn im_or_zeros(&self) -> std::borrow::Cow<'_, [T]> {
        match &self.im {
            Some(v) => std::borrow::Cow::Borrowed(v.as_slice()),
            None => std::borrow::Cow::Owned(vec![T::zero(); self.re.len()]),
        }
    }

    pub fn check_domain(&self, domain: &BoxDomain<T>) -> Result<()> {
        if self.modes != domain.modes() || self.re.len() != domain.coeff_len(Self::parity()) {
            return Err(Error::Dimension(format!(
                "scalar field with modes {:?} used on domain with modes {:?}",
                self.modes,
                domain.modes()
            )));
        }
        Ok(())
    }

    pub fn coeff(&self, i: usize) -> Complex<T> {
        Complex::new(
            self.re[i],
            self.im.as_ref().map(|v| v[i]).unwrap_or_else(T::zero),
        )
    }

    /// Coefficient inner product `sum conj(a) b` (equals the L2 product).
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.re.len() {
            acc = acc + self.coeff(i).conj() * other.coeff(i);
        }
        acc
    }

    pub fn norm_sq(&self) -> T {
        let mut s: T = self.re.iter().map(|v| *v * *v).sum();
        if let Some(im) = &self.im {
            s += im.iter().map(|v| *v * *v).sum();
        }
        s
    }

    pub fn scaled(&self, a: T) -> Self {
        let mut out = self.clone();
        out.re.iter_mut().for_each(|v| *v *= a);
        if let Some(im) = out.im.as_mut() {
            im.iter_mut().for_each(|v| *v *= a);
        }
        out
    }

    /// Multiplies by a complex constant.
    pub fn mul_complex(&self, z: Complex<T>) -> Self {
        let im = self.im_or_zeros();
        let mut re_out = Vec::with_capacity(self.re.len());
        let mut im_out = Vec::with_capacity(self.re.len());
        for i in 0..self.re.len() {
            let v = Complex::new(self.re[i], im[i]) * z;
            re_out.push(v.re);
            im_out.push(v.im);
        }
        Self {
            modes: self.modes,
            re: re_out,
            im: Some(im_out),
        }
    }

    /// Collocation samples (real part, imaginary part if complex).
    pub fn to_nodal(&self, domain: &BoxDomain<T>) -> (Collocation<T>, Option<Collocation<T>>) {
        let p = Self::parity();
        let shape = domain.node_shape();
        let re = Collocation {
            shape,
            data: synthesize(domain, &self.re, p),
        };
        let im = self.im.as_ref().map(|v| Collocation {
            shape,
            data: synthesize(domain, v, p),
        });
        (re, im)
    }

    /// Quadrature projection of collocation samples onto the sine basis.
    pub fn from_nodal(
        domain: &BoxDomain<T>,
        re: &Collocation<T>,
        im: Option<&Collocation<T>>,
    ) -> Result<Self> {
        re.check_grid(domain)?;
        let p = Self::parity();
        let im = match im {
            Some(c) => {
                c.check_grid(domain)?;
                Some(analyze(domain, &c.data, p))
            }
            None => None,
        };
        Ok(Self {
            modes: domain.modes(),
            re: analyze(domain, &re.data, p),
            im,
        })
    }
}

/// Real three-component vector field in a vector basis family.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector<T> {
    family: BasisFamily,
    modes: [usize; 3],
    pub comps: [Vec<T>; 3],
}

impl<T: Real> SpectralVector<T> {
    pub fn zeros(domain: &BoxDomain<T>, family: BasisFamily) -> Self {
        assert!(family.is_vector(), "vector field needs a vector family");
        Self {
            family,
            modes: domain.modes(),
            comps: [0, 1, 2].map(|c| vec![T::zero(); domain.coeff_len(family.parity(c))]),
        }
    }

    pub fn from_comps(
        domain: &BoxDomain<T>,
        family: BasisFamily,
        comps: [Vec<T>; 3],
    ) -> Result<Self> {
        if !family.is_vector() {
            return Err(Error::Basis {
                expected: "a vector family".into(),
                found: family.name().into(),
            });
        }
        for (c, v) in comps.iter().enumerate() {
            if v.len() != domain.coeff_len(family.parity(c)) {
                return Err(Error::Dimension(format!(
                    "component {} has {} coefficients, expected {}",
                    c,
                    v.len(),
                    domain.coeff_len(family.parity(c))
                )));
            }
        }
        Ok(Self {
            family,
            modes: domain.modes(),
            comps,
        })
    }

    /// Field with the 3-vector `a` placed on wave indices `k` (components whose
    /// parity cannot represent `k` are dropped).
    pub fn mode(domain: &BoxDomain<T>, family: BasisFamily, k: [usize; 3], a: [T; 3]) -> Self {
        let mut v = Self::zeros(domain, family);
        let n = domain.modes();
        for c in 0..3 {
            let p = family.parity(c);
            let idx = (0..3)
                .map(|ax| p[ax].storage_index(k[ax], n[ax]))
                .collect::<Option<Vec<_>>>();
            if let Some(idx) = idx {
                let shape = domain.coeff_shape(p);
                v.comps[c][flat_index(shape, [idx[0], idx[1], idx[2]])] = a[c];
            }
        }
        v
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn modes(&self) -> [usize; 3] {
        self.modes
    }

    pub fn check_family(&self, family: BasisFamily) -> Result<()> {
        if self.family != family {
            return Err(Error::Basis {
                expected: family.name().into(),
                found: self.family.name().into(),
            });
        }
        Ok(())
    }

    pub fn check_domain(&self, domain: &BoxDomain<T>) -> Result<()> {
        if self.modes != domain.modes() {
            return Err(Error::Dimension(format!(
                "vector field with modes {:?} used on domain with modes {:?}",
                self.modes,
                domain.modes()
            )));
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> T {
        debug_assert_eq!(self.family, other.family);
        let mut s = T::zero();
        for c in 0..3 {
            for (a, b) in self.comps[c].iter().zip(&other.comps[c]) {
                s += *a * *b;
            }
        }
        s
    }

    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    pub fn scaled(&self, a: T) -> Self {
        let mut out = self.clone();
        for c in out.comps.iter_mut() {
            c.iter_mut().for_each(|v| *v *= a);
        }
        out
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        debug_assert_eq!(self.family, other.family);
        let mut out = self.clone();
        out.add_scaled(a, other);
        out
    }

    pub fn add_scaled(&mut self, a: T, other: &Self) {
        for c in 0..3 {
            for (x, y) in self.comps[c].iter_mut().zip(&other.comps[c]) {
                *x += a * *y;
            }
        }
    }

    pub fn max_abs(&self) -> T {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn to_nodal(&self, domain: &BoxDomain<T>) -> [Collocation<T>; 3] {
        let shape = domain.node_shape();
        [0, 1, 2].map(|c| Collocation {
            shape,
            data: synthesize(domain, &self.comps[c], self.family.parity(c)),
        })
    }

    pub fn from_nodal(
        domain: &BoxDomain<T>,
        family: BasisFamily,
        nodal: [&Collocation<T>; 3],
    ) -> Result<Self> {
        for n in nodal {
            n.check_grid(domain)?;
        }
        Self::from_comps(
            domain,
            family,
            [0, 1, 2].map(|c| analyze(domain, &nodal[c].data, family.parity(c))),
        )
    }
}

/// Iterates `(flat index, wave indices, wavevector)` over a component's coefficients.
pub fn for_each_mode<T: Real>(
    domain: &BoxDomain<T>,
    parity: Parity,
    mut f: impl FnMut(usize, [usize; 3], [T; 3]),
) {
    let shape = domain.coeff_shape(parity);
    super::domain::for_each_index(shape, |flat, idx| {
        let k = [
            parity[0].wave_index(idx[0]),
            parity[1].wave_index(idx[1]),
            parity[2].wave_index(idx[2]),
        ];
        f(flat, k, domain.wavevector(parity, idx));
    });
}
