//! Operators as N x N complex matrices in a named orthonormal basis.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{self, QuadratureRule};
use crate::linalg;

pub const DEFAULT_COND_GUARD: f64 = 1e12;

/// Advisory structure flags; verified on demand, never trusted blindly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFlags {
    pub self_adjoint: bool,
    pub positive: bool,
}

/// Dense operator truncated to the first N modes of a named basis.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    dim: usize,
    basis: String,
    entries: Array2<Complex64>,
    flags: OperatorFlags,
}

/// Coefficient vector in a named basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    dim: usize,
    basis: String,
    coeffs: Array1<Complex64>,
}

fn check_same(left_basis: &str, right_basis: &str, left_dim: usize, right_dim: usize) -> Result<()> {
    if left_basis != right_basis {
        return Err(Error::BasisMismatch {
            left: left_basis.to_string(),
            right: right_basis.to_string(),
        });
    }
    if left_dim != right_dim {
        return Err(Error::DimensionMismatch { left: left_dim, right: right_dim });
    }
    Ok(())
}

impl TruncatedOperator {
    pub fn new(basis: &str, entries: Array2<Complex64>, flags: OperatorFlags) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch { left: r, right: c });
        }
        if r == 0 {
            return Err(Error::Contract("operator dimension must be positive".into()));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite { at: f64::NAN });
        }
        Ok(Self { dim: r, basis: basis.to_string(), entries, flags })
    }

    pub fn identity(basis: &str, n: usize) -> Self {
        let mut m = Array2::<Complex64>::zeros((n, n));
        for k in 0..n {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        Self {
            dim: n,
            basis: basis.to_string(),
            entries: m,
            flags: OperatorFlags { self_adjoint: true, positive: true },
        }
    }

    pub fn from_diagonal(basis: &str, diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Array2::<Complex64>::zeros((n, n));
        let all_real = diag.iter().all(|z| z.im == 0.0);
        let all_pos = all_real && diag.iter().all(|z| z.re > 0.0);
        for (k, &z) in diag.iter().enumerate() {
            m[(k, k)] = z;
        }
        Self::new(basis, m, OperatorFlags { self_adjoint: all_real, positive: all_pos })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    /// Same matrix relabeled into another basis. Explicit by design: silent
    /// cross-basis arithmetic is the bug class the labels exist to stop.
    pub fn relabeled(&self, basis: &str) -> Self {
        let mut out = self.clone();
        out.basis = basis.to_string();
        out
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_same(&self.basis, &v.basis, self.dim, v.dim)?;
        Ok(StateVector {
            dim: self.dim,
            basis: self.basis.clone(),
            coeffs: self.entries.dot(&v.coeffs),
        })
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.entries.t().mapv(|z| z.conj());
        Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries,
            flags: self.flags,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same(&self.basis, &other.basis, self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: self.entries.dot(&other.entries),
            flags: OperatorFlags::default(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.basis, &other.basis, self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: &self.entries + &other.entries,
            flags: OperatorFlags {
                self_adjoint: self.flags.self_adjoint && other.flags.self_adjoint,
                positive: self.flags.positive && other.flags.positive,
            },
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.basis, &other.basis, self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: &self.entries - &other.entries,
            flags: OperatorFlags::default(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: self.entries.mapv(|z| z * c),
            flags: OperatorFlags::default(),
        }
    }

    pub fn inverse(&self, cond_guard: f64) -> Result<Self> {
        let inv = linalg::inverse(&self.entries, cond_guard)?;
        Ok(Self {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: inv,
            flags: OperatorFlags { self_adjoint: self.flags.self_adjoint, positive: self.flags.positive },
        })
    }

    pub fn condition_number(&self) -> f64 {
        linalg::condition_number(&self.entries)
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self::identity(&self.basis, self.dim);
        for _ in 0..exponent {
            out = out.compose(self).expect("same basis by construction");
        }
        out
    }

    /// Check the advisory flags against the actual entries.
    pub fn verify_flags(&self) -> Result<()> {
        let scale = linalg::max_abs(&self.entries).max(f64::MIN_POSITIVE);
        if self.flags.self_adjoint {
            let dev = linalg::max_abs(&self.sub(&self.adjoint())?.entries);
            if dev > 1e-10 * scale {
                return Err(Error::Contract(format!(
                    "self_adjoint flag set but max|A - A*| = {dev:.3e}"
                )));
            }
        }
        if self.flags.positive {
            let herm = (&self.entries + &self.adjoint().entries).mapv(|z| z * 0.5);
            let min_eig = linalg::eigenvalues(&herm)
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            if min_eig < -1e-10 * scale {
                return Err(Error::Contract(format!(
                    "positive flag set but min eigenvalue of hermitian part = {min_eig:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Matrix dump format: {dim, basis, entries: row-major [re, im] pairs}.
    pub fn to_dump(&self) -> MatrixDump {
        MatrixDump {
            dim: self.dim,
            basis: self.basis.clone(),
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_dump(dump: &MatrixDump) -> Result<Self> {
        let n = dump.dim;
        if dump.entries.len() != n * n {
            return Err(Error::DimensionMismatch { left: dump.entries.len(), right: n * n });
        }
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            let [re, im] = dump.entries[i * n + j];
            Complex64::new(re, im)
        });
        Self::new(&dump.basis, entries, OperatorFlags::default())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDump {
    pub dim: usize,
    pub basis: String,
    pub entries: Vec<[f64; 2]>,
}

impl StateVector {
    pub fn new(basis: &str, coeffs: Array1<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Contract("state vector must have positive dimension".into()));
        }
        if coeffs.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite { at: f64::NAN });
        }
        Ok(Self { dim: coeffs.len(), basis: basis.to_string(), coeffs })
    }

    pub fn basis_vector(basis: &str, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::Contract(format!("basis index {k} out of range for dimension {n}")));
        }
        let mut coeffs = Array1::<Complex64>::zeros(n);
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::new(basis, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn coeffs(&self) -> &Array1<Complex64> {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self, other> with the convention linear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_same(&self.basis, &other.basis, self.dim, other.dim)?;
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Position-space samples sum_n c_n e_n(x) on a grid (Hermite bases only).
    pub fn grid_samples(&self, xs: &[f64]) -> Vec<Complex64> {
        xs.iter()
            .map(|&x| {
                let vals = hermite::hermite_values(self.dim, x);
                self.coeffs
                    .iter()
                    .zip(&vals)
                    .map(|(c, &e)| c * e)
                    .sum()
            })
            .collect()
    }
}

/// Tridiagonal position operator: <e_m, x e_n>, entries sqrt((n+1)/2) on the
/// first off-diagonals.
pub fn position_matrix(basis: &str, n: usize) -> TruncatedOperator {
    let mut m = Array2::<Complex64>::zeros((n, n));
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / 2.0).sqrt();
        m[(k, k + 1)] = Complex64::new(v, 0.0);
        m[(k + 1, k)] = Complex64::new(v, 0.0);
    }
    TruncatedOperator {
        dim: n,
        basis: basis.to_string(),
        entries: m,
        flags: OperatorFlags { self_adjoint: true, positive: false },
    }
}

/// Momentum operator p = -i d/dx: hermitian with <e_{n+1}, p e_n> = i sqrt((n+1)/2).
pub fn momentum_matrix(basis: &str, n: usize) -> TruncatedOperator {
    let mut m = Array2::<Complex64>::zeros((n, n));
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / 2.0).sqrt();
        m[(k + 1, k)] = Complex64::new(0.0, v);
        m[(k, k + 1)] = Complex64::new(0.0, -v);
    }
    TruncatedOperator {
        dim: n,
        basis: basis.to_string(),
        entries: m,
        flags: OperatorFlags { self_adjoint: true, positive: false },
    }
}

/// Multiplication operator <e_m, f e_n> by quadrature of a real-valued f.
pub fn multiplication_operator<F>(
    basis: &str,
    f: F,
    n: usize,
    rule: &QuadratureRule,
) -> Result<TruncatedOperator>
where
    F: Fn(f64) -> f64,
{
    let order = rule.order();
    let mut fvals = Vec::with_capacity(order);
    for &x in rule.nodes() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { at: x });
        }
        fvals.push(v);
    }
    // basis values at every node, evaluated once per node
    let table: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .map(|&x| hermite::hermite_values(n, x))
        .collect();
    let mut m = Array2::<Complex64>::zeros((n, n));
    for r in 0..n {
        for c in r..n {
            let mut acc = 0.0;
            for (q, &w) in rule.weights().iter().enumerate() {
                acc += w * fvals[q] * table[q][r] * table[q][c];
            }
            m[(r, c)] = Complex64::new(acc, 0.0);
            m[(c, r)] = Complex64::new(acc, 0.0);
        }
    }
    Ok(TruncatedOperator {
        dim: n,
        basis: basis.to_string(),
        entries: m,
        flags: OperatorFlags { self_adjoint: true, positive: false },
    })
}
