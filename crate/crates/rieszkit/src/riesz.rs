//! Biorthogonal systems generated by constructing pairs.
//!
//! A constructing pair is an orthonormal basis label together with an
//! invertible operator T. It generates the families phi_n = T e_n and
//! psi_n = (T^{-1})* e_n, which are biorthogonal: <phi_n, psi_m> = delta_nm.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{StateVector, TruncatedOperator, DEFAULT_COND_GUARD};

/// Explicitly stored alpha sequence (never a closure, so reports are
/// reproducible from the stored values alone).
#[derive(Debug, Clone)]
pub struct AlphaSequence {
    pub name: String,
    pub values: Vec<Complex64>,
    /// Index of the first stored value in the source convention (0 or 1);
    /// storage slot k always holds the value for matrix slot k.
    pub origin_index: u8,
}

impl AlphaSequence {
    pub fn from_real(name: &str, values: &[f64], origin_index: u8) -> Self {
        Self {
            name: name.to_string(),
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            origin_index,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }
}

/// (basis, T) with T invertible within the condition guard.
#[derive(Debug, Clone)]
pub struct ConstructingPair {
    basis: String,
    t: TruncatedOperator,
    cond: f64,
}

impl ConstructingPair {
    pub fn new(t: TruncatedOperator, cond_guard: f64) -> Result<Self> {
        let cond = t.condition_number();
        if !cond.is_finite() || cond > cond_guard {
            return Err(Error::Singular { cond, guard: cond_guard });
        }
        Ok(Self { basis: t.basis().to_string(), t, cond })
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn t(&self) -> &TruncatedOperator {
        &self.t
    }

    pub fn cond(&self) -> f64 {
        self.cond
    }
}

/// Paired families phi (columns of T) and psi (columns of (T*)^{-1}).
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    dim: usize,
    phi: Array2<Complex64>,
    psi: Array2<Complex64>,
    source: ConstructingPair,
}

impl BiorthogonalSystem {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &ConstructingPair {
        &self.source
    }

    /// phi_n coefficients as column n.
    pub fn phi(&self) -> &Array2<Complex64> {
        &self.phi
    }

    /// psi_n coefficients as column n.
    pub fn psi(&self) -> &Array2<Complex64> {
        &self.psi
    }

    pub fn phi_vector(&self, n: usize) -> Result<StateVector> {
        StateVector::new(self.source.basis(), self.phi.column(n).to_owned())
    }

    pub fn psi_vector(&self, n: usize) -> Result<StateVector> {
        StateVector::new(self.source.basis(), self.psi.column(n).to_owned())
    }
}

/// Gram diagnostics for <phi_n, psi_m> = delta_nm.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub gram: Array2<Complex64>,
    pub max_offdiag: f64,
    pub max_diag_err: f64,
}

impl GramReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_offdiag.max(self.max_diag_err)
    }
}

/// Build the system and verify biorthogonality within 1e-9 * cond(T).
pub fn build_system(pair: ConstructingPair) -> Result<BiorthogonalSystem> {
    let t_inv = pair.t().inverse(DEFAULT_COND_GUARD)?;
    let phi = pair.t().entries().clone();
    let psi = t_inv.adjoint().entries().clone();
    let sys = BiorthogonalSystem { dim: pair.t().dim(), phi, psi, source: pair };
    let gram = biorthogonality_gram(&sys);
    let tol = 1e-9 * sys.source.cond();
    if gram.max_deviation() > tol {
        return Err(Error::Contract(format!(
            "biorthogonality deviation {:.3e} exceeds {:.3e}",
            gram.max_deviation(),
            tol
        )));
    }
    Ok(sys)
}

/// gram[m][n] = <phi_n, psi_m>.
pub fn biorthogonality_gram(sys: &BiorthogonalSystem) -> GramReport {
    let n = sys.dim;
    let psi_star = sys.psi.t().mapv(|z| z.conj());
    let gram = psi_star.dot(&sys.phi);
    let mut max_offdiag = 0.0f64;
    let mut max_diag_err = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let v = gram[(r, c)];
            if r == c {
                max_diag_err = max_diag_err.max((v - Complex64::new(1.0, 0.0)).norm());
            } else {
                max_offdiag = max_offdiag.max(v.norm());
            }
        }
    }
    GramReport { gram, max_offdiag, max_diag_err }
}

/// sum_{k<K} <x, phi_k><psi_k, y> - <x, y>.
pub fn quasi_basis_residual(
    sys: &BiorthogonalSystem,
    x: &StateVector,
    y: &StateVector,
    k_terms: usize,
) -> Result<Complex64> {
    if x.dim() != sys.dim || y.dim() != sys.dim {
        return Err(Error::DimensionMismatch { left: x.dim(), right: sys.dim });
    }
    if x.basis() != sys.source.basis() || y.basis() != sys.source.basis() {
        return Err(Error::BasisMismatch {
            left: x.basis().to_string(),
            right: sys.source.basis().to_string(),
        });
    }
    if k_terms > sys.dim {
        return Err(Error::Contract(format!(
            "K = {k_terms} exceeds system dimension {}",
            sys.dim
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..k_terms {
        let x_phi: Complex64 = x
            .coeffs()
            .iter()
            .zip(sys.phi.column(k))
            .map(|(a, b)| a * b.conj())
            .sum();
        let psi_y: Complex64 = sys
            .psi
            .column(k)
            .iter()
            .zip(y.coeffs())
            .map(|(a, b)| a * b.conj())
            .sum();
        sum += x_phi * psi_y;
    }
    Ok(sum - x.inner(y)?)
}

/// Reconstructions of the constructing operators from the system alone:
/// T from the psi analysis matrix, K from the phi analysis matrix.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub t_from_psi: TruncatedOperator,
    pub k_from_phi: TruncatedOperator,
}

/// Invert the analysis matrices (row n = conjugated family coefficients).
pub fn reconstruct_constructing_operator(sys: &BiorthogonalSystem) -> Result<Reconstruction> {
    let basis = sys.source.basis();
    let psi_analysis = sys.psi.t().mapv(|z| z.conj());
    let phi_analysis = sys.phi.t().mapv(|z| z.conj());
    let t_from_psi = TruncatedOperator::new(basis, psi_analysis, Default::default())?
        .inverse(DEFAULT_COND_GUARD)?;
    let k_from_phi = TruncatedOperator::new(basis, phi_analysis, Default::default())?
        .inverse(DEFAULT_COND_GUARD)?;
    Ok(Reconstruction { t_from_psi, k_from_phi })
}

/// Coefficient-growth diagnostic standing in for the domain conditions
/// D(phi), D(psi): partial sums of |<x, phi_n>|^2 and |<x, psi_n>|^2 plus a
/// log-log tail-slope estimate over the last quarter of modes. Slope < -1
/// suggests "numerically in domain"; this is a heuristic, not a proof.
#[derive(Debug, Clone)]
pub struct DomainDiagnostic {
    pub phi_sum: f64,
    pub psi_sum: f64,
    /// Least-squares slope of log(term) vs log(index); None if fewer than 8
    /// usable (nonzero) tail terms.
    pub phi_tail_slope: Option<f64>,
    pub psi_tail_slope: Option<f64>,
}

fn tail_slope(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    let start = n - n / 4;
    let pts: Vec<(f64, f64)> = (start..n)
        .filter(|&k| terms[k] > 0.0 && terms[k].is_finite())
        .map(|k| (((k + 1) as f64).ln(), terms[k].ln()))
        .collect();
    if pts.len() < 8 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some((m * sxy - sx * sy) / denom)
}

pub fn domain_growth_diagnostic(sys: &BiorthogonalSystem, x: &StateVector) -> Result<DomainDiagnostic> {
    if x.dim() != sys.dim {
        return Err(Error::DimensionMismatch { left: x.dim(), right: sys.dim });
    }
    let overlap = |family: &Array2<Complex64>, k: usize| -> f64 {
        x.coeffs()
            .iter()
            .zip(family.column(k))
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            .norm_sqr()
    };
    let phi_terms: Vec<f64> = (0..sys.dim).map(|k| overlap(&sys.phi, k)).collect();
    let psi_terms: Vec<f64> = (0..sys.dim).map(|k| overlap(&sys.psi, k)).collect();
    Ok(DomainDiagnostic {
        phi_sum: phi_terms.iter().sum(),
        psi_sum: psi_terms.iter().sum(),
        phi_tail_slope: tail_slope(&phi_terms),
        psi_tail_slope: tail_slope(&psi_terms),
    })
}
