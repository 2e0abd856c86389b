//! Differential operators and norms, diagonal in coefficient space.
//!
//! Sign convention for derivatives of normalized modes along one axis:
//! `d/dx sin -> +kappa cos` and `d/dx cos -> -kappa sin`. With it the
//! divergence is the negative adjoint of the gradient and the curl of a
//! `MaxwellVector` field is `kappa x a` mode by mode.

use num_complex::Complex;

use super::domain::{AxisBasis, BasisFamily, BoxDomain, Parity};
use super::field::{for_each_mode, Collocation, ScalarKind, SpectralScalar, SpectralVector};
use super::transform::{analyze, synthesize};
use crate::error::{Error, Result};
use crate::num::Real;

/// Differentiates a component with parity `from` along `axis`; the result has
/// the parity of `from` with that axis flipped.
pub fn derivative_coeffs<T: Real>(
    domain: &BoxDomain<T>,
    coeffs: &[T],
    from: Parity,
    axis: usize,
) -> (Vec<T>, Parity) {
    let mut to = from;
    to[axis] = from[axis].derivative();
    let src_shape = domain.coeff_shape(from);
    let dst_shape = domain.coeff_shape(to);
    let n = domain.modes()[axis];
    let tables = domain.axis(axis);
    let mut out = vec![T::zero(); dst_shape.iter().product()];
    // only the differentiated axis changes its storage index
    let outer: usize = dst_shape[..axis].iter().product();
    let inner: usize = dst_shape[axis + 1..].iter().product();
    for o in 0..outer {
        for m in 0..dst_shape[axis] {
            let k = to[axis].wave_index(m);
            let Some(src_m) = from[axis].storage_index(k, n) else {
                continue;
            };
            let factor = match from[axis] {
                AxisBasis::Sine => tables.kappa[k],
                AxisBasis::Cosine => -tables.kappa[k],
            };
            let d0 = (o * dst_shape[axis] + m) * inner;
            let s0 = (o * src_shape[axis] + src_m) * inner;
            for i in 0..inner {
                out[d0 + i] = factor * coeffs[s0 + i];
            }
        }
    }
    (out, to)
}

fn add_into<T: Real>(acc: &mut [T], a: T, x: &[T]) {
    for (y, v) in acc.iter_mut().zip(x) {
        *y += a * *v;
    }
}

/// Gradient coefficients of a real sine-family array, as `MaxwellVector` components.
pub fn gradient_coeffs<T: Real>(domain: &BoxDomain<T>, coeffs: &[T]) -> [Vec<T>; 3] {
    let p = BasisFamily::DirichletScalar.parity(0);
    [0, 1, 2].map(|ax| derivative_coeffs(domain, coeffs, p, ax).0)
}

/// `sum_i kappa_i v_i(k)` mapped onto the sine family: the adjoint of [`gradient_coeffs`].
pub fn gradient_adjoint_coeffs<T: Real>(domain: &BoxDomain<T>, comps: [&[T]; 3]) -> Vec<T> {
    let mut out = vec![T::zero(); domain.coeff_len(BasisFamily::DirichletScalar.parity(0))];
    for (c, comp) in comps.iter().enumerate() {
        let (d, _) = derivative_coeffs(domain, comp, BasisFamily::MaxwellVector.parity(c), c);
        // derivative of a cosine axis carries -kappa
        add_into(&mut out, -T::one(), &d);
    }
    out
}

/// Gradient of a real scalar; lands in the `MaxwellVector` family.
pub fn gradient<T: Real>(domain: &BoxDomain<T>, f: &SpectralScalar<T>) -> Result<SpectralVector<T>> {
    f.check_domain(domain)?;
    if f.kind() != ScalarKind::Real {
        return Err(Error::Basis {
            expected: "real DirichletScalar".into(),
            found: "complex DirichletScalar".into(),
        });
    }
    SpectralVector::from_comps(domain, BasisFamily::MaxwellVector, gradient_coeffs(domain, &f.re))
}

/// Divergence of a `MaxwellVector` field: `-sum_i kappa_i a_i(k)` on sine mode `k`.
pub fn divergence<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
) -> Result<SpectralScalar<T>> {
    v.check_family(BasisFamily::MaxwellVector)?;
    v.check_domain(domain)?;
    let re = gradient_adjoint_coeffs(domain, [&v.comps[0], &v.comps[1], &v.comps[2]])
        .into_iter()
        .map(|x| -x)
        .collect();
    SpectralScalar::from_parts(domain, re, None)
}

fn curl_generic<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
    out_family: BasisFamily,
) -> Result<SpectralVector<T>> {
    let in_family = v.family();
    let mut out = SpectralVector::zeros(domain, out_family);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let l = (i + 2) % 3;
        let (djl, p1) = derivative_coeffs(domain, &v.comps[l], in_family.parity(l), j);
        let (dlj, p2) = derivative_coeffs(domain, &v.comps[j], in_family.parity(j), l);
        debug_assert_eq!(p1, out_family.parity(i));
        debug_assert_eq!(p2, out_family.parity(i));
        add_into(&mut out.comps[i], T::one(), &djl);
        add_into(&mut out.comps[i], -T::one(), &dlj);
    }
    Ok(out)
}

/// Curl of a `MaxwellVector` field; lands in the `CurlDualVector` family.
pub fn curl<T: Real>(domain: &BoxDomain<T>, v: &SpectralVector<T>) -> Result<SpectralVector<T>> {
    v.check_family(BasisFamily::MaxwellVector)?;
    v.check_domain(domain)?;
    curl_generic(domain, v, BasisFamily::CurlDualVector)
}

/// Adjoint of [`curl`] in the coefficient inner product (`CurlDualVector -> MaxwellVector`).
pub fn curl_adjoint<T: Real>(
    domain: &BoxDomain<T>,
    w: &SpectralVector<T>,
) -> Result<SpectralVector<T>> {
    w.check_family(BasisFamily::CurlDualVector)?;
    w.check_domain(domain)?;
    curl_generic(domain, w, BasisFamily::MaxwellVector)
}

/// Multiplies every coefficient by `-|kappa|^2`.
pub fn laplacian_coeffs<T: Real>(domain: &BoxDomain<T>, coeffs: &[T], parity: Parity) -> Vec<T> {
    let mut out = coeffs.to_vec();
    for_each_mode(domain, parity, |i, _, kv| {
        out[i] = -(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]) * coeffs[i];
    });
    out
}

pub fn laplacian_scalar<T: Real>(
    domain: &BoxDomain<T>,
    f: &SpectralScalar<T>,
) -> Result<SpectralScalar<T>> {
    f.check_domain(domain)?;
    let p = SpectralScalar::<T>::parity();
    SpectralScalar::from_parts(
        domain,
        laplacian_coeffs(domain, &f.re, p),
        f.im.as_ref().map(|im| laplacian_coeffs(domain, im, p)),
    )
}

pub fn laplacian_vector<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
) -> Result<SpectralVector<T>> {
    v.check_domain(domain)?;
    let fam = v.family();
    SpectralVector::from_comps(
        domain,
        fam,
        [0, 1, 2].map(|c| laplacian_coeffs(domain, &v.comps[c], fam.parity(c))),
    )
}

/// Norm selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind<T> {
    L2,
    H1,
    H2,
    /// `L^p` by collocation quadrature, `p` in `[2, 6]`.
    Lp(T),
}

fn weighted_sum<T: Real>(domain: &BoxDomain<T>, parity: Parity, coeffs: &[T], power: i32) -> T {
    let mut s = T::zero();
    for_each_mode(domain, parity, |i, _, kv| {
        let w = T::one() + kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        s += w.powi(power) * coeffs[i] * coeffs[i];
    });
    s
}

/// Trapezoid quadrature of collocation samples.
pub fn quadrature<T: Real>(domain: &BoxDomain<T>, samples: &[T]) -> T {
    let s = domain.node_shape();
    let (w0, w1, w2) = (
        &domain.axis(0).weights,
        &domain.axis(1).weights,
        &domain.axis(2).weights,
    );
    let mut acc = T::zero();
    let mut idx = 0;
    for i in 0..s[0] {
        let mut acc_j = T::zero();
        for j in 0..s[1] {
            let mut acc_k = T::zero();
            for k in 0..s[2] {
                acc_k += w2[k] * samples[idx];
                idx += 1;
            }
            acc_j += w1[j] * acc_k;
        }
        acc += w0[i] * acc_j;
    }
    acc
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if !(p >= T::lit(2.0) && p <= T::lit(6.0)) {
        return Err(Error::Range(format!("L^p exponent must lie in [2, 6], got {p}")));
    }
    Ok(())
}

fn lp_from_modulus<T: Real>(domain: &BoxDomain<T>, modulus: &[T], p: T) -> T {
    let powered: Vec<T> = modulus.iter().map(|m| m.powf(p)).collect();
    quadrature(domain, &powered).powf(T::one() / p)
}

/// Norm of a scalar field (complex modulus for complex fields).
pub fn norm_scalar<T: Real>(
    domain: &BoxDomain<T>,
    f: &SpectralScalar<T>,
    kind: NormKind<T>,
) -> Result<T> {
    f.check_domain(domain)?;
    let p = SpectralScalar::<T>::parity();
    let im = f.im_or_zeros();
    Ok(match kind {
        NormKind::L2 => f.norm_sq().sqrt(),
        NormKind::H1 => (weighted_sum(domain, p, &f.re, 1) + weighted_sum(domain, p, &im, 1)).sqrt(),
        NormKind::H2 => (weighted_sum(domain, p, &f.re, 2) + weighted_sum(domain, p, &im, 2)).sqrt(),
        NormKind::Lp(pp) => {
            check_p(pp)?;
            let (re, imn) = f.to_nodal(domain);
            let modulus: Vec<T> = match imn {
                Some(imn) => re
                    .data
                    .iter()
                    .zip(&imn.data)
                    .map(|(a, b)| a.hypot(*b))
                    .collect(),
                None => re.data.iter().map(|a| a.abs()).collect(),
            };
            lp_from_modulus(domain, &modulus, pp)
        }
    })
}

/// Norm of a vector field (Euclidean pointwise modulus for `L^p`).
pub fn norm_vector<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
    kind: NormKind<T>,
) -> Result<T> {
    v.check_domain(domain)?;
    let fam = v.family();
    Ok(match kind {
        NormKind::L2 => v.norm_sq().sqrt(),
        NormKind::H1 => (0..3)
            .map(|c| weighted_sum(domain, fam.parity(c), &v.comps[c], 1))
            .sum::<T>()
            .sqrt(),
        NormKind::H2 => (0..3)
            .map(|c| weighted_sum(domain, fam.parity(c), &v.comps[c], 2))
            .sum::<T>()
            .sqrt(),
        NormKind::Lp(pp) => {
            check_p(pp)?;
            let nodal = v.to_nodal(domain);
            let modulus: Vec<T> = (0..nodal[0].data.len())
                .map(|i| {
                    (nodal[0].data[i].powi(2) + nodal[1].data[i].powi(2) + nodal[2].data[i].powi(2))
                        .sqrt()
                })
                .collect();
            lp_from_modulus(domain, &modulus, pp)
        }
    })
}

/// `||grad v||^2 = sum_k |kappa|^2 |a(k)|^2` in coefficient space.
pub fn gradient_norm_sq<T: Real>(domain: &BoxDomain<T>, v: &SpectralVector<T>) -> T {
    let fam = v.family();
    let mut s = T::zero();
    for c in 0..3 {
        for_each_mode(domain, fam.parity(c), |i, _, kv| {
            s += (kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]) * v.comps[c][i] * v.comps[c][i];
        });
    }
    s
}

/// Collocation samples of every partial derivative `d_axis v_comp`, indexed `[comp][axis]`.
pub fn jacobian_nodal<T: Real>(
    domain: &BoxDomain<T>,
    v: &SpectralVector<T>,
) -> [[Collocation<T>; 3]; 3] {
    let fam = v.family();
    let shape = domain.node_shape();
    [0, 1, 2].map(|c| {
        [0, 1, 2].map(|ax| {
            let (d, p) = derivative_coeffs(domain, &v.comps[c], fam.parity(c), ax);
            Collocation {
                shape,
                data: synthesize(domain, &d, p),
            }
        })
    })
}

/// `sum_k ||d_k v||^2` evaluated by collocation quadrature of the sampled derivatives.
pub fn gradient_norm_sq_nodal<T: Real>(domain: &BoxDomain<T>, v: &SpectralVector<T>) -> T {
    let jac = jacobian_nodal(domain, v);
    let mut s = T::zero();
    for row in &jac {
        for d in row {
            let sq: Vec<T> = d.data.iter().map(|x| *x * *x).collect();
            s += quadrature(domain, &sq);
        }
    }
    s
}

/// Zeroes every mode with some `k_i > 2 N_i / 3`.
pub fn dealias_coeffs<T: Real>(domain: &BoxDomain<T>, coeffs: &mut [T], parity: Parity) {
    let n = domain.modes();
    let cut = [0, 1, 2].map(|i| 2 * n[i] / 3);
    for_each_mode(domain, parity, |i, k, _| {
        if k[0] > cut[0] || k[1] > cut[1] || k[2] > cut[2] {
            coeffs[i] = T::zero();
        }
    });
}

/// Nodewise product; with `dealias = Some(parity)` the product is projected
/// onto that parity, filtered by the 2/3 rule, and resampled.
pub fn pointwise_product<T: Real>(
    domain: &BoxDomain<T>,
    a: &Collocation<T>,
    b: &Collocation<T>,
    dealias: Option<Parity>,
) -> Result<Collocation<T>> {
    a.check_grid(domain)?;
    b.check_grid(domain)?;
    let data: Vec<T> = a.data.iter().zip(&b.data).map(|(x, y)| *x * *y).collect();
    let data = match dealias {
        None => data,
        Some(p) => {
            let mut c = analyze(domain, &data, p);
            dealias_coeffs(domain, &mut c, p);
            synthesize(domain, &c, p)
        }
    };
    Ok(Collocation {
        shape: a.shape,
        data,
    })
}

/// Nodewise product of complex samples given as (re, im) pairs.
pub fn complex_product<T: Real>(a: (&[T], &[T]), b: (&[T], &[T])) -> (Vec<T>, Vec<T>) {
    let n = a.0.len();
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for i in 0..n {
        let z = Complex::new(a.0[i], a.1[i]) * Complex::new(b.0[i], b.1[i]);
        re.push(z.re);
        im.push(z.im);
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::domain::flat_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn cube(n: usize) -> BoxDomain<f64> {
        BoxDomain::new([1.0; 3], [n; 3]).unwrap()
    }

    fn random_vector(d: &BoxDomain<f64>, fam: BasisFamily, seed: u64) -> SpectralVector<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = [0, 1, 2].map(|c| {
            (0..d.coeff_len(fam.parity(c)))
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect()
        });
        SpectralVector::from_comps(d, fam, comps).unwrap()
    }

    fn random_scalar(d: &BoxDomain<f64>, seed: u64) -> SpectralScalar<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = d.coeff_len(SpectralScalar::<f64>::parity());
        SpectralScalar::from_parts(d, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), None)
            .unwrap()
    }

    #[test]
    fn gradient_of_ground_mode() {
        let d = cube(6);
        let f = SpectralScalar::mode(&d, [1, 1, 1], Complex::new(1.0, 0.0));
        let g = gradient(&d, &f).unwrap();
        let p = BasisFamily::MaxwellVector.parity(0);
        // cosine axis stores k directly, so k=(1,1,1) sits at [1,0,0]
        let idx = flat_index(d.coeff_shape(p), [1, 0, 0]);
        assert!((g.comps[0][idx] - PI).abs() < 1e-14);
        assert!((g.norm_sq() - 3.0 * PI * PI).abs() < 1e-12);
        let zero = gradient(&d, &SpectralScalar::zeros(&d, ScalarKind::Real)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn divergence_examples() {
        let d = cube(5);
        let v = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [0, 1, 1], [1.0, 0.0, 0.0]);
        assert!(divergence(&d, &v).unwrap().norm_sq() < 1e-28);
        let v = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [1, 1, 1], [1.0, 1.0, 1.0]);
        let div = divergence(&d, &v).unwrap();
        assert!((div.re[0] + 3.0 * PI).abs() < 1e-13);
        assert!(div.re[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn divergence_of_gradient_is_laplacian() {
        let d = BoxDomain::new([1.0, 2.0, 0.5], [6, 5, 4]).unwrap();
        let f = random_scalar(&d, 1);
        let lhs = divergence(&d, &gradient(&d, &f).unwrap()).unwrap();
        let rhs = laplacian_scalar(&d, &f).unwrap();
        for (a, b) in lhs.re.iter().zip(&rhs.re) {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn curl_examples() {
        let d = cube(6);
        let f = random_scalar(&d, 2);
        let c = curl(&d, &gradient(&d, &f).unwrap()).unwrap();
        assert!(c.max_abs() < 1e-12);
        let v = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [0, 1, 1], [1.0, 0.0, 0.0]);
        let c = curl(&d, &v).unwrap();
        assert!((c.norm_sq() - 2.0 * PI * PI * v.norm_sq()).abs() < 1e-12);
        let z = curl(&d, &SpectralVector::zeros(&d, BasisFamily::MaxwellVector)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        assert!(matches!(curl(&d, &c), Err(Error::Basis { .. })));
    }

    #[test]
    fn curl_adjoint_identity() {
        let d = BoxDomain::new([1.0, 1.3, 0.8], [5, 6, 4]).unwrap();
        for seed in 0..5 {
            let u = random_vector(&d, BasisFamily::MaxwellVector, seed);
            let w = random_vector(&d, BasisFamily::CurlDualVector, 100 + seed);
            let lhs = curl(&d, &u).unwrap().inner(&w);
            let rhs = u.inner(&curl_adjoint(&d, &w).unwrap());
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn laplacian_eigenvalues() {
        let d = cube(4);
        let f = SpectralScalar::mode(&d, [1, 1, 1], Complex::new(1.0, 0.0));
        let l = laplacian_scalar(&d, &f).unwrap();
        assert!((l.re[0] + 3.0 * PI * PI).abs() < 1e-12);
        let v = SpectralVector::mode(&d, BasisFamily::MaxwellVector, [0, 1, 1], [1.0, 0.0, 0.0]);
        let l = laplacian_vector(&d, &v).unwrap();
        assert!((l.inner(&v) + 2.0 * PI * PI).abs() < 1e-12);
        let z = laplacian_vector(&d, &SpectralVector::zeros(&d, BasisFamily::MaxwellVector)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn norms_of_ground_mode() {
        let d = cube(6);
        let f = SpectralScalar::mode(&d, [1, 1, 1], Complex::new(1.0, 0.0));
        assert!((norm_scalar(&d, &f, NormKind::L2).unwrap() - 1.0).abs() < 1e-14);
        let h1 = norm_scalar(&d, &f, NormKind::H1).unwrap();
        assert!((h1 * h1 - (1.0 + 3.0 * PI * PI)).abs() < 1e-12);
        let l2q = norm_scalar(&d, &f, NormKind::Lp(2.0)).unwrap();
        assert!((l2q - 1.0).abs() < 1e-12);
        let z = SpectralScalar::zeros(&d, ScalarKind::Complex);
        for k in [NormKind::L2, NormKind::H1, NormKind::H2, NormKind::Lp(4.0)] {
            assert_eq!(norm_scalar(&d, &z, k).unwrap(), 0.0);
        }
        assert!(matches!(
            norm_scalar(&d, &f, NormKind::Lp(7.0)),
            Err(Error::Range(_))
        ));
        assert!(norm_scalar(&d, &f, NormKind::Lp(1.5)).is_err());
    }

    #[test]
    fn nodal_gradient_norm_matches_coefficients() {
        let d = BoxDomain::new([1.0, 1.4, 0.9], [6, 5, 7]).unwrap();
        let v = random_vector(&d, BasisFamily::MaxwellVector, 9);
        let a = gradient_norm_sq(&d, &v);
        let b = gradient_norm_sq_nodal(&d, &v);
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn products() {
        let d = cube(6);
        let one = Collocation::constant(&d, 1.0);
        let f = SpectralScalar::mode(&d, [1, 2, 1], Complex::new(1.0, 0.0));
        let (s, _) = f.to_nodal(&d);
        assert_eq!(pointwise_product(&d, &one, &s, None).unwrap(), s);
        let sq = pointwise_product(&d, &s, &s, None).unwrap();
        for (a, b) in sq.data.iter().zip(&s.data) {
            assert!((a - b * b).abs() < 1e-14);
        }
        let p = BasisFamily::DirichletScalar.parity(0);
        let filtered = pointwise_product(&d, &s, &s, Some(p)).unwrap();
        let c = analyze(&d, &filtered.data, p);
        for_each_mode(&d, p, |i, k, _| {
            if k.iter().any(|&ki| ki > 4) {
                assert!(c[i].abs() < 1e-13);
            }
        });
        let other = Collocation {
            shape: [3, 3, 3],
            data: vec![0.0; 27],
        };
        assert!(pointwise_product(&d, &s, &other, None).is_err());
    }
}
