//! Separable sine/cosine transforms between coefficient and collocation space.
//!
//! Synthesis evaluates a coefficient array on the collocation nodes; analysis
//! is its trapezoid-weighted adjoint. Because every axis basis is orthonormal
//! under the trapezoid rule, `analysis(synthesis(c)) == c` for every family.

use super::domain::{BoxDomain, Matrix, Parity};
use crate::error::{Error, Result};
use crate::num::Real;

/// Transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Collocation samples to coefficients.
    Forward,
    /// Coefficients to collocation samples.
    Inverse,
}

/// Applies `m` along `axis` of a row-major 3D array of `shape`.
pub(crate) fn apply_axis<T: Real>(
    input: &[T],
    shape: [usize; 3],
    axis: usize,
    m: &Matrix<T>,
) -> (Vec<T>, [usize; 3]) {
    debug_assert_eq!(m.cols, shape[axis]);
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let len = shape[axis];
    let rows = m.rows;
    let mut out_shape = shape;
    out_shape[axis] = rows;
    let mut out = vec![T::zero(); outer * rows * inner];
    if inner == 1 {
        for o in 0..outer {
            let src = &input[o * len..(o + 1) * len];
            let dst = &mut out[o * rows..(o + 1) * rows];
            // four rows at a time keeps independent accumulators in flight
            let mut r = 0;
            while r + 4 <= rows {
                let (r0, r1, r2, r3) = (m.row(r), m.row(r + 1), m.row(r + 2), m.row(r + 3));
                let (mut a0, mut a1, mut a2, mut a3) = (T::zero(), T::zero(), T::zero(), T::zero());
                for c in 0..len {
                    let x = src[c];
                    a0 += r0[c] * x;
                    a1 += r1[c] * x;
                    a2 += r2[c] * x;
                    a3 += r3[c] * x;
                }
                dst[r] = a0;
                dst[r + 1] = a1;
                dst[r + 2] = a2;
                dst[r + 3] = a3;
                r += 4;
            }
            for (rr, d) in dst.iter_mut().enumerate().skip(r) {
                let row = m.row(rr);
                let mut acc = T::zero();
                for c in 0..len {
                    acc += row[c] * src[c];
                }
                *d = acc;
            }
        }
    } else {
        for o in 0..outer {
            for r in 0..rows {
                let row = m.row(r);
                let dst_start = (o * rows + r) * inner;
                for c in 0..len {
                    let coef = row[c];
                    if coef == T::zero() {
                        continue;
                    }
                    let src_start = (o * len + c) * inner;
                    let (dst, src) = (
                        &mut out[dst_start..dst_start + inner],
                        &input[src_start..src_start + inner],
                    );
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += coef * *s;
                    }
                }
            }
        }
    }
    (out, out_shape)
}

fn apply_all<T: Real>(input: &[T], shape: [usize; 3], mats: [&Matrix<T>; 3]) -> Vec<T> {
    // contract the longest-stride axis last so the dot-product path handles axis 2
    let (a, s) = apply_axis(input, shape, 2, mats[2]);
    let (b, s) = apply_axis(&a, s, 1, mats[1]);
    let (c, _) = apply_axis(&b, s, 0, mats[0]);
    c
}

/// Coefficients of a component with `parity` to collocation samples.
pub fn synthesize<T: Real>(domain: &BoxDomain<T>, coeffs: &[T], parity: Parity) -> Vec<T> {
    let shape = domain.coeff_shape(parity);
    debug_assert_eq!(coeffs.len(), shape.iter().product::<usize>());
    apply_all(
        coeffs,
        shape,
        [
            domain.axis(0).synthesis(parity[0]),
            domain.axis(1).synthesis(parity[1]),
            domain.axis(2).synthesis(parity[2]),
        ],
    )
}

/// Collocation samples to coefficients of a component with `parity` (quadrature projection).
pub fn analyze<T: Real>(domain: &BoxDomain<T>, samples: &[T], parity: Parity) -> Vec<T> {
    let shape = domain.node_shape();
    debug_assert_eq!(samples.len(), domain.node_count());
    apply_all(
        samples,
        shape,
        [
            domain.axis(0).analysis(parity[0]),
            domain.axis(1).analysis(parity[1]),
            domain.axis(2).analysis(parity[2]),
        ],
    )
}

/// Checked transform of a raw array in either direction.
pub fn transform<T: Real>(
    domain: &BoxDomain<T>,
    data: &[T],
    parity: Parity,
    direction: Direction,
) -> Result<Vec<T>> {
    match direction {
        Direction::Forward => {
            if data.len() != domain.node_count() {
                return Err(Error::Dimension(format!(
                    "expected {} collocation samples, got {}",
                    domain.node_count(),
                    data.len()
                )));
            }
            Ok(analyze(domain, data, parity))
        }
        Direction::Inverse => {
            let n = domain.coeff_len(parity);
            if data.len() != n {
                return Err(Error::Dimension(format!(
                    "expected {} coefficients, got {}",
                    n,
                    data.len()
                )));
            }
            Ok(synthesize(domain, data, parity))
        }
    }
}

/// Evaluates a component on the tensor grid `points[0] x points[1] x points[2]`.
pub fn evaluate_on<T: Real>(
    domain: &BoxDomain<T>,
    coeffs: &[T],
    parity: Parity,
    points: [&[T]; 3],
) -> Vec<T> {
    let shape = domain.coeff_shape(parity);
    let m0 = domain.axis(0).point_synthesis(parity[0], points[0]);
    let m1 = domain.axis(1).point_synthesis(parity[1], points[1]);
    let m2 = domain.axis(2).point_synthesis(parity[2], points[2]);
    apply_all(coeffs, shape, [&m0, &m1, &m2])
}
