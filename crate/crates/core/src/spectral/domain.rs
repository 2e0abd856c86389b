//! Box geometry, collocation nodes, and the trigonometric basis families.

use crate::error::{Error, Result};
use crate::num::Real;

/// One-dimensional trigonometric basis along a single axis.
///
/// `Sine` carries modes `k = 1..=N` and vanishes on both walls; `Cosine`
/// carries modes `k = 0..=N` and has vanishing normal derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisBasis {
    Sine,
    Cosine,
}

impl AxisBasis {
    /// Number of modes stored along an axis with `n` modes requested.
    #[inline]
    pub fn len(self, n: usize) -> usize {
        match self {
            AxisBasis::Sine => n,
            AxisBasis::Cosine => n + 1,
        }
    }

    /// Wave index `k` for storage index `m`.
    #[inline]
    pub fn wave_index(self, m: usize) -> usize {
        match self {
            AxisBasis::Sine => m + 1,
            AxisBasis::Cosine => m,
        }
    }

    /// Storage index for wave index `k`, if representable.
    #[inline]
    pub fn storage_index(self, k: usize, n: usize) -> Option<usize> {
        match self {
            AxisBasis::Sine if (1..=n).contains(&k) => Some(k - 1),
            AxisBasis::Cosine if k <= n => Some(k),
            _ => None,
        }
    }

    /// The basis produced by differentiating along this axis.
    #[inline]
    pub fn derivative(self) -> AxisBasis {
        match self {
            AxisBasis::Sine => AxisBasis::Cosine,
            AxisBasis::Cosine => AxisBasis::Sine,
        }
    }
}

pub type Parity = [AxisBasis; 3];

/// The three field families used by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisFamily {
    /// Sine in every axis: scalars vanishing on the walls (psi, A0, rho).
    DirichletScalar,
    /// Component `i` is cosine along axis `i` and sine along the other two:
    /// tangential part vanishes on the walls, normal derivative of the normal
    /// part vanishes (A, Pi, pump).
    MaxwellVector,
    /// Component `i` is sine along axis `i` and cosine along the others: the
    /// image of `MaxwellVector` under the curl.
    CurlDualVector,
}

impl BasisFamily {
    /// Per-axis parity of component `comp` (ignored for scalars).
    pub fn parity(self, comp: usize) -> Parity {
        use AxisBasis::*;
        match self {
            BasisFamily::DirichletScalar => [Sine; 3],
            BasisFamily::MaxwellVector => {
                let mut p = [Sine; 3];
                p[comp] = Cosine;
                p
            }
            BasisFamily::CurlDualVector => {
                let mut p = [Cosine; 3];
                p[comp] = Sine;
                p
            }
        }
    }

    pub fn is_vector(self) -> bool {
        !matches!(self, BasisFamily::DirichletScalar)
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::DirichletScalar => "DirichletScalar",
            BasisFamily::MaxwellVector => "MaxwellVector",
            BasisFamily::CurlDualVector => "CurlDualVector",
        }
    }
}

/// Dense row-major matrix used for the per-axis transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Tables for a single axis.
#[derive(Debug, Clone)]
pub struct AxisTables<T> {
    pub length: T,
    pub modes: usize,
    /// Node positions `j L / (N+1)`, `j = 0..=N+1`.
    pub nodes: Vec<T>,
    /// Trapezoid weights (half weight on the two wall nodes).
    pub weights: Vec<T>,
    /// `kappa[k] = k pi / L` for `k = 0..=N`.
    pub kappa: Vec<T>,
    sine_synth: Matrix<T>,
    cosine_synth: Matrix<T>,
    sine_analysis: Matrix<T>,
    cosine_analysis: Matrix<T>,
}

impl<T: Real> AxisTables<T> {
    fn new(length: T, n: usize) -> Self {
        let np = n + 2;
        let h = length / T::from_usize_lossy(n + 1);
        let nodes: Vec<T> = (0..np).map(|j| h * T::from_usize_lossy(j)).collect();
        let weights: Vec<T> = (0..np)
            .map(|j| if j == 0 || j == n + 1 { h / T::lit(2.0) } else { h })
            .collect();
        let kappa: Vec<T> = (0..=n)
            .map(|k| T::from_usize_lossy(k) * T::PI() / length)
            .collect();
        let sine_synth = Matrix::from_fn(np, n, |j, m| {
            if j == 0 || j == n + 1 {
                T::zero()
            } else {
                sine_node_value(length, n, m + 1, j)
            }
        });
        let cosine_synth = Matrix::from_fn(np, n + 1, |j, m| cosine_node_value(length, n, m, j));
        let sine_analysis = Matrix::from_fn(n, np, |m, j| sine_synth.get(j, m) * weights[j]);
        let cosine_analysis =
            Matrix::from_fn(n + 1, np, |m, j| cosine_synth.get(j, m) * weights[j]);
        Self {
            length,
            modes: n,
            nodes,
            weights,
            kappa,
            sine_synth,
            cosine_synth,
            sine_analysis,
            cosine_analysis,
        }
    }

    pub fn node_count(&self) -> usize {
        self.modes + 2
    }

    pub fn synthesis(&self, basis: AxisBasis) -> &Matrix<T> {
        match basis {
            AxisBasis::Sine => &self.sine_synth,
            AxisBasis::Cosine => &self.cosine_synth,
        }
    }

    pub fn analysis(&self, basis: AxisBasis) -> &Matrix<T> {
        match basis {
            AxisBasis::Sine => &self.sine_analysis,
            AxisBasis::Cosine => &self.cosine_analysis,
        }
    }

    /// Wavenumber of storage index `m` in `basis`.
    #[inline]
    pub fn wavenumber(&self, basis: AxisBasis, m: usize) -> T {
        self.kappa[basis.wave_index(m)]
    }

    /// Normalized basis function with wave index `k` evaluated at `x`.
    pub fn basis_value(&self, basis: AxisBasis, k: usize, x: T) -> T {
        let l = self.length;
        let arg = T::from_usize_lossy(k) * T::PI() * x / l;
        match basis {
            AxisBasis::Sine => (T::lit(2.0) / l).sqrt() * arg.sin(),
            AxisBasis::Cosine if k == 0 => T::one() / l.sqrt(),
            AxisBasis::Cosine => (T::lit(2.0) / l).sqrt() * arg.cos(),
        }
    }

    /// Synthesis matrix (points x modes) for arbitrary evaluation points.
    pub fn point_synthesis(&self, basis: AxisBasis, points: &[T]) -> Matrix<T> {
        let len = basis.len(self.modes);
        Matrix::from_fn(points.len(), len, |p, m| {
            self.basis_value(basis, basis.wave_index(m), points[p])
        })
    }
}

// Node values use the integer phase k j / (N+1) reduced mod 2(N+1) so that the
// sine rows are exactly zero on the walls and symmetric to roundoff.
fn reduced_phase<T: Real>(n: usize, k: usize, j: usize) -> T {
    let period = 2 * (n + 1);
    let r = (k * j) % period;
    T::from_usize_lossy(r) * T::PI() / T::from_usize_lossy(n + 1)
}

fn sine_node_value<T: Real>(length: T, n: usize, k: usize, j: usize) -> T {
    (T::lit(2.0) / length).sqrt() * reduced_phase::<T>(n, k, j).sin()
}

fn cosine_node_value<T: Real>(length: T, n: usize, k: usize, j: usize) -> T {
    if k == 0 {
        T::one() / length.sqrt()
    } else {
        (T::lit(2.0) / length).sqrt() * reduced_phase::<T>(n, k, j).cos()
    }
}

/// Rectangular cavity `[0,L1] x [0,L2] x [0,L3]` with `N_i` modes per axis.
#[derive(Debug, Clone)]
pub struct BoxDomain<T> {
    axes: [AxisTables<T>; 3],
}

impl<T: Real> BoxDomain<T> {
    /// Builds the domain tables; requires `L_i > 0` and `N_i >= 2`.
    pub fn new(lengths: [T; 3], modes: [usize; 3]) -> Result<Self> {
        for i in 0..3 {
            if !(lengths[i] > T::zero()) || !lengths[i].is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "length along axis {} must be positive, got {}",
                    i + 1,
                    lengths[i]
                )));
            }
            if modes[i] < 2 {
                return Err(Error::InvalidDomain(format!(
                    "mode count along axis {} must be at least 2, got {}",
                    i + 1,
                    modes[i]
                )));
            }
        }
        Ok(Self {
            axes: [
                AxisTables::new(lengths[0], modes[0]),
                AxisTables::new(lengths[1], modes[1]),
                AxisTables::new(lengths[2], modes[2]),
            ],
        })
    }

    pub fn axis(&self, i: usize) -> &AxisTables<T> {
        &self.axes[i]
    }

    pub fn lengths(&self) -> [T; 3] {
        [self.axes[0].length, self.axes[1].length, self.axes[2].length]
    }

    pub fn modes(&self) -> [usize; 3] {
        [self.axes[0].modes, self.axes[1].modes, self.axes[2].modes]
    }

    pub fn volume(&self) -> T {
        self.axes[0].length * self.axes[1].length * self.axes[2].length
    }

    /// Collocation node counts per axis (`N_i + 2`, walls included).
    pub fn node_shape(&self) -> [usize; 3] {
        [
            self.axes[0].node_count(),
            self.axes[1].node_count(),
            self.axes[2].node_count(),
        ]
    }

    pub fn node_count(&self) -> usize {
        self.node_shape().iter().product()
    }

    /// Coefficient array shape for a component with the given parity.
    pub fn coeff_shape(&self, parity: Parity) -> [usize; 3] {
        [
            parity[0].len(self.axes[0].modes),
            parity[1].len(self.axes[1].modes),
            parity[2].len(self.axes[2].modes),
        ]
    }

    pub fn coeff_len(&self, parity: Parity) -> usize {
        self.coeff_shape(parity).iter().product()
    }

    /// Wavevector of the mode at storage multi-index `idx` of a component with `parity`.
    #[inline]
    pub fn wavevector(&self, parity: Parity, idx: [usize; 3]) -> [T; 3] {
        [
            self.axes[0].wavenumber(parity[0], idx[0]),
            self.axes[1].wavenumber(parity[1], idx[1]),
            self.axes[2].wavenumber(parity[2], idx[2]),
        ]
    }

    /// `|kappa|^2` for every coefficient of a component with `parity`, in storage order.
    pub fn kappa_sq_table(&self, parity: Parity) -> Vec<T> {
        let s = self.coeff_shape(parity);
        let mut out = Vec::with_capacity(s[0] * s[1] * s[2]);
        for i in 0..s[0] {
            for j in 0..s[1] {
                for k in 0..s[2] {
                    let kv = self.wavevector(parity, [i, j, k]);
                    out.push(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]);
                }
            }
        }
        out
    }

    /// Largest `|kappa|^2` over all families.
    pub fn max_kappa_sq(&self) -> T {
        (0..3)
            .map(|i| {
                let k = self.axes[i].kappa[self.axes[i].modes];
                k * k
            })
            .fold(T::zero(), |a, b| a + b)
    }

    /// Trapezoid weight of the node at multi-index `idx`.
    #[inline]
    pub fn node_weight(&self, idx: [usize; 3]) -> T {
        self.axes[0].weights[idx[0]] * self.axes[1].weights[idx[1]] * self.axes[2].weights[idx[2]]
    }

    /// Node weights in storage order.
    pub fn weight_table(&self) -> Vec<T> {
        let s = self.node_shape();
        let mut out = Vec::with_capacity(self.node_count());
        for i in 0..s[0] {
            for j in 0..s[1] {
                for k in 0..s[2] {
                    out.push(self.node_weight([i, j, k]));
                }
            }
        }
        out
    }

    /// Node coordinates in storage order.
    pub fn node_positions(&self) -> Vec<[T; 3]> {
        let s = self.node_shape();
        let mut out = Vec::with_capacity(self.node_count());
        for i in 0..s[0] {
            for j in 0..s[1] {
                for k in 0..s[2] {
                    out.push([
                        self.axes[0].nodes[i],
                        self.axes[1].nodes[j],
                        self.axes[2].nodes[k],
                    ]);
                }
            }
        }
        out
    }
}

/// Iterates multi-indices of `shape` in storage order (last axis fastest).
pub fn for_each_index(shape: [usize; 3], mut f: impl FnMut(usize, [usize; 3])) {
    let mut flat = 0;
    for i in 0..shape[0] {
        for j in 0..shape[1] {
            for k in 0..shape[2] {
                f(flat, [i, j, k]);
                flat += 1;
            }
        }
    }
}

#[inline]
pub fn flat_index(shape: [usize; 3], idx: [usize; 3]) -> usize {
    (idx[0] * shape[1] + idx[1]) * shape[2] + idx[2]
}
