//! Dense complex matrices of dimension 2 and 4.
//!
//! Everything in this crate works on single qubits (2x2) or qubit pairs
//! (4x4), so [`ComplexMatrix`] stores its entries inline and is `Copy`.
//! The spectral routines are a cyclic complex Jacobi eigensolver and the
//! PSD square root built on it.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const MAX_DIM: usize = 4;

/// Hermiticity tolerance, scaled by `max(1, max |a_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_GATE, 0)` are roundoff; anything lower is invalid.
pub const PSD_GATE: f64 = 1e-10;
/// Eigenvalues at or below `RANK_FLOOR * lambda_max` are treated as exact
/// zeros when taking square roots. A roundoff eigenvalue of 1e-17 would
/// otherwise turn into a 3e-9 contribution after the square root.
pub const RANK_FLOOR: f64 = 1e-14;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Which qubit of a pair. `A` is Alice's detector (the left tensor factor),
/// `B` is Rob's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.dim + j]
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [C64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries. Non-finite entries are rejected.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: (entries.len() as f64).sqrt() as usize,
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        if m.entries().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `|psi><psi|` for a normalized copy of `amplitudes`.
    pub fn pure_state(amplitudes: &[C64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensityMatrix(
                "zero or non-finite state vector".into(),
            ));
        }
        let psi: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> impl Iterator<Item = &C64> + '_ {
        self.data[..self.dim * self.dim].iter()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entry-wise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z = z.conj();
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = *self;
        for (z, w) in out.data.iter_mut().zip(other.data.iter()) {
            *z += w;
        }
        Ok(out)
    }

    /// Tensor product of two 2x2 matrices.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Self::from_fn(4, |i, j| self[(i / 2, j / 2)] * other[(i % 2, j % 2)])
    }

    /// `max |a_ij - b_ij|`; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M^H|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    fn check_hermitian(&self) -> Result<()> {
        if self
            .entries()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Hermitian, unit trace, and no eigenvalue below `-PSD_GATE`.
    pub fn check_density(&self) -> Result<()> {
        self.check_hermitian().map_err(|e| match e {
            Error::NotHermitian { deviation } => {
                Error::NotDensityMatrix(format!("not Hermitian (deviation {deviation:e})"))
            }
            other => other,
        })?;
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let eig = hermitian_eigen(self)?;
        let min = eig.values[self.dim - 1];
        if min < -PSD_GATE {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn is_density(&self) -> bool {
        self.check_density().is_ok()
    }
}

pub fn pauli_x() -> ComplexMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    ComplexMatrix::from_row_major(2, &[o, l, l, o]).expect("static 2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    ComplexMatrix::from_row_major(2, &[o, -C64::i(), C64::i(), o]).expect("static 2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0]).expect("static 2x2")
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.trace()
}

/// Reduced state of `keep` for a two-qubit density matrix in the basis
/// `|0_A 0_B>, |0_A 1_B>, |1_A 0_B>, |1_A 1_B>`.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 4,
        });
    }
    rho.check_density()?;
    ComplexMatrix::from_fn(2, |i, j| match keep {
        Subsystem::A => rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)],
        Subsystem::B => rho[(i, j)] + rho[(2 + i, 2 + j)],
    })
}

/// Eigenpairs of a Hermitian matrix. Values are sorted descending, ties in
/// their original diagonal order; column `k` of `vectors` pairs with
/// `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(lambda)) V^H`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim();
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * mapped[k] * v[(j, k)].conj())
                .sum()
        })
        .expect("dimension already validated")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|v| v)
    }

    /// Largest `||M v - lambda v||_2` over all pairs.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        let n = m.dim();
        let v = &self.vectors;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let mv: C64 = (0..n).map(|j| m[(i, j)] * v[(j, k)]).sum();
                        (mv - v[(i, k)] * self.values[k]).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Cyclic complex Jacobi. Each rotation first rephases row/column `q` so the
/// pivot is real, then applies the real symmetric rotation that zeroes it.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    a.check_hermitian()?;
    let n = a.dim();
    let mut m = *a;
    // Start from the exactly Hermitian part.
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n)?;
    let scale = frobenius_norm(&m);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off == 0.0 || off <= JACOBI_TOL * scale {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])])?;
    Ok(EigenDecomposition { values, vectors })
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    } else {
        0.0
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.dim();
    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
}

/// Square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-PSD_GATE, 0)` are clamped to zero, as is anything at or
/// below `RANK_FLOOR` relative to the largest eigenvalue.
pub fn matrix_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    let top = eig.values[0];
    if let Some(&bad) = eig.values.iter().find(|&&v| v < -PSD_GATE) {
        return Err(Error::NegativeEigenvalue { value: bad });
    }
    let floor = RANK_FLOOR * top.max(0.0);
    Ok(eig.map_values(|v| if v <= floor { 0.0 } else { v.sqrt() }))
}
