//! Polar decomposition of analysis operators and the rotated orthonormal
//! bases on which the constructing operator becomes positive self-adjoint.
//!
//! For an invertible analysis matrix M = U |M| (computed by SVD), the new
//! basis is f_n = U* e_n. Then |M| f_n recovers the phi family and |M|^{-1} f_n
//! the dual psi family, turning the positive factor into a constructing
//! operator on the rotated basis.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{OperatorFlags, TruncatedOperator};
use crate::riesz::{BiorthogonalSystem, ConstructingPair};

pub use crate::hamiltonian::Side;

/// op = U * Pos with U unitary and Pos positive self-adjoint, plus the
/// rotated basis columns f_n = U* e_n (expressed in the source basis).
#[derive(Debug, Clone)]
pub struct PolarPair {
    pub u: TruncatedOperator,
    pub pos: TruncatedOperator,
    pub new_basis: String,
    pub f_columns: Array2<Complex64>,
    /// Singular values of the factored operator, descending; certify
    /// invertibility of the input.
    pub singular_values: Vec<f64>,
}

/// SVD-based polar decomposition. For invertible input U = W V* is unique,
/// so the factorization is reproducible across runs and platforms.
pub fn polar_decompose(op: &TruncatedOperator, new_basis: &str) -> Result<PolarPair> {
    let (w, s, v) = linalg::svd(op.entries());
    let n = op.dim();
    let smin = s.last().copied().unwrap_or(0.0);
    let smax = s.first().copied().unwrap_or(0.0);
    if smin <= smax * 1e-14 || smin == 0.0 {
        return Err(Error::Singular { cond: if smin > 0.0 { smax / smin } else { f64::INFINITY }, guard: 1e14 });
    }
    let v_star = v.t().mapv(|z| z.conj());
    let u_mat = w.dot(&v_star);
    let mut sigma = Array2::<Complex64>::zeros((n, n));
    for k in 0..n {
        sigma[(k, k)] = Complex64::new(s[k], 0.0);
    }
    let pos_mat = v.dot(&sigma).dot(&v_star);
    let u = TruncatedOperator::new(op.basis(), u_mat, OperatorFlags::default())?;
    let pos = TruncatedOperator::new(
        op.basis(),
        pos_mat,
        OperatorFlags { self_adjoint: true, positive: true },
    )?;
    let f_columns = u.adjoint().entries().clone();
    Ok(PolarPair { u, pos, new_basis: new_basis.to_string(), f_columns, singular_values: s })
}

/// Result of realizing the positive constructing operator on the rotated basis.
#[derive(Debug, Clone)]
pub struct PositivePairCheck {
    pub polar: PolarPair,
    /// Constructing pair carrying Pos expressed in f-basis coordinates.
    pub pair: ConstructingPair,
    /// max_n ||Pos f_n - target_n|| / ||target_n|| where target is phi
    /// (side = Phi) or psi (side = Psi).
    pub max_residual: f64,
}

fn family_residual(
    pos: &TruncatedOperator,
    f_columns: &Array2<Complex64>,
    target: &Array2<Complex64>,
) -> f64 {
    let image = pos.entries().dot(f_columns);
    let n = pos.dim();
    let mut worst = 0.0f64;
    for k in 0..n {
        let num: f64 = (0..n)
            .map(|m| (image[(m, k)] - target[(m, k)]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = (0..n)
            .map(|m| target[(m, k)].norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        worst = worst.max(num / den);
    }
    worst
}

/// Polar-decompose the analysis matrix of the chosen family (rows are the
/// conjugated family coefficients) and verify that the positive factor maps
/// the rotated basis onto that family.
pub fn positive_constructing_pair(
    sys: &BiorthogonalSystem,
    side: Side,
    cond_guard: f64,
) -> Result<PositivePairCheck> {
    let (family, new_basis) = match side {
        Side::Phi => (sys.phi(), "polar-f"),
        Side::Psi => (sys.psi(), "polar-g"),
    };
    let analysis = family.t().mapv(|z| z.conj());
    let analysis_op = TruncatedOperator::new(sys.source().basis(), analysis, OperatorFlags::default())?;
    let polar = polar_decompose(&analysis_op, new_basis)?;
    let max_residual = family_residual(&polar.pos, &polar.f_columns, family);

    // Pos in f-basis coordinates: F* Pos F with F = U* (columns f_n)
    let f = &polar.f_columns;
    let f_star = f.t().mapv(|z| z.conj());
    let pos_f = f_star.dot(polar.pos.entries()).dot(f);
    let pos_f_op = TruncatedOperator::new(
        new_basis,
        pos_f,
        OperatorFlags { self_adjoint: true, positive: true },
    )?;
    let pair = ConstructingPair::new(pos_f_op, cond_guard)?;

    let tol = 1e-9 * sys.source().cond();
    if max_residual > tol {
        return Err(Error::Contract(format!(
            "positive factor does not reconstruct the family: residual {max_residual:.3e} > {tol:.3e}"
        )));
    }
    Ok(PositivePairCheck { polar, pair, max_residual })
}

/// The same positive operator's inverse constructs the dual family:
/// Pos^{-1} f_n = psi_n for side = Phi (and phi_n for side = Psi). Returns the
/// max relative column residual.
pub fn cross_constructing_check(
    sys: &BiorthogonalSystem,
    polar: &PolarPair,
    side: Side,
    cond_guard: f64,
) -> Result<f64> {
    let dual = match side {
        Side::Phi => sys.psi(),
        Side::Psi => sys.phi(),
    };
    let pos_inv = polar.pos.inverse(cond_guard)?;
    Ok(family_residual(&pos_inv, &polar.f_columns, dual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::gauss_hermite_rule;
    use crate::operator::multiplication_operator;
    use crate::riesz::build_system;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: &str = "hermite-e";

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unitarity_defect(u: &TruncatedOperator) -> f64 {
        let n = u.dim();
        let id = TruncatedOperator::identity(u.basis(), n);
        let d1 = linalg::max_abs(u.adjoint().compose(u).unwrap().sub(&id).unwrap().entries());
        let d2 = linalg::max_abs(u.compose(&u.adjoint()).unwrap().sub(&id).unwrap().entries());
        d1.max(d2)
    }

    #[test]
    fn identity_polar() {
        let id = TruncatedOperator::identity(B, 5);
        let p = polar_decompose(&id, "polar-f").unwrap();
        assert!(linalg::max_abs(&p.u.sub(&id).unwrap().entries().clone()) < 1e-14);
        assert!(linalg::max_abs(&p.pos.sub(&id).unwrap().entries().clone()) < 1e-14);
        for k in 0..5 {
            assert!((p.f_columns[(k, k)] - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn signed_diagonal_polar() {
        let op = TruncatedOperator::from_diagonal(B, &[c(2.0), c(-3.0)]).unwrap();
        let p = polar_decompose(&op, "polar-f").unwrap();
        assert!((p.u.entries()[(0, 0)] - c(1.0)).norm() < 1e-14);
        assert!((p.u.entries()[(1, 1)] - c(-1.0)).norm() < 1e-14);
        assert!((p.pos.entries()[(0, 0)] - c(2.0)).norm() < 1e-14);
        assert!((p.pos.entries()[(1, 1)] - c(3.0)).norm() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 16;
        for _ in 0..10 {
            let m = Array2::from_shape_fn((n, n), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }) + Array2::<Complex64>::eye(n) * c(3.0);
            let op = TruncatedOperator::new(B, m, Default::default()).unwrap();
            let p = polar_decompose(&op, "polar-f").unwrap();
            assert!(unitarity_defect(&p.u) <= 1e-12 * n as f64);
            // reconstruction U * Pos = op
            let rec = p.u.compose(&p.pos).unwrap();
            let rel = linalg::fro_norm(rec.sub(&op).unwrap().entries())
                / linalg::fro_norm(op.entries());
            assert!(rel <= 1e-12, "reconstruction {rel}");
            // positivity: smallest eigenvalue of Pos ~ sigma_min
            let smin = *p.singular_values.last().unwrap();
            let min_eig = linalg::eigenvalues(p.pos.entries())
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            assert!(min_eig >= smin - 1e-12 * linalg::fro_norm(op.entries()));
            // f columns orthonormal
            let f_star = p.f_columns.t().mapv(|z| z.conj());
            let gram = f_star.dot(&p.f_columns);
            let id = Array2::<Complex64>::eye(n);
            assert!(linalg::max_abs(&(&gram - &id)) <= 1e-12 * n as f64);
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let op = TruncatedOperator::from_diagonal(B, &[c(1.0), c(0.0)]);
        // from_diagonal sets positive flag only for positive entries; build raw
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[(0, 0)] = c(1.0);
        let op2 = TruncatedOperator::new(B, m, Default::default()).unwrap();
        assert!(matches!(polar_decompose(&op2, "polar-f"), Err(Error::Singular { .. })));
        drop(op);
    }

    #[test]
    fn diagonal_model_is_its_own_absolute_value() {
        let vals: Vec<Complex64> = (1..=6u32)
            .map(|j| c(if j % 2 == 0 { 1.0 / j as f64 } else { j as f64 }))
            .collect();
        let t = TruncatedOperator::from_diagonal(B, &vals).unwrap();
        let sys = build_system(ConstructingPair::new(t, 1e12).unwrap()).unwrap();
        let chk = positive_constructing_pair(&sys, Side::Phi, 1e12).unwrap();
        // positive diagonal: U = I, f_n = e_n, Pos = diag(alpha)
        assert!(unitarity_defect(&chk.polar.u) < 1e-12);
        let id = Array2::<Complex64>::eye(6);
        assert!(linalg::max_abs(&(&chk.polar.f_columns - &id)) < 1e-12);
        for (k, v) in vals.iter().enumerate() {
            assert!((chk.polar.pos.entries()[(k, k)] - v).norm() < 1e-12);
        }
        assert!(chk.max_residual < 1e-12);
        let cross = cross_constructing_check(&sys, &chk.polar, Side::Phi, 1e12).unwrap();
        assert!(cross < 1e-12);
    }

    #[test]
    fn both_sides_on_multiplication_model() {
        let n = 32;
        let rule = gauss_hermite_rule(2 * n + 16).unwrap();
        let t = multiplication_operator(B, |x| 1.0 + x * x, n, &rule).unwrap();
        let sys = build_system(ConstructingPair::new(t, 1e12).unwrap()).unwrap();
        for side in [Side::Phi, Side::Psi] {
            let chk = positive_constructing_pair(&sys, side, 1e12).unwrap();
            assert!(chk.max_residual < 1e-8, "{side:?}: {}", chk.max_residual);
            let cross = cross_constructing_check(&sys, &chk.polar, side, 1e12).unwrap();
            assert!(cross < 1e-8, "{side:?} cross: {cross}");
            assert_eq!(chk.pair.basis(), chk.polar.new_basis);
        }
    }

    #[test]
    fn round_trip_through_f_coordinates() {
        // phi coefficients in the f basis are the columns of Pos_f; mapping
        // them back with F recovers the original phi columns
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let n = 12;
        let m = Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }) + Array2::<Complex64>::eye(n) * c(3.0);
        let t = TruncatedOperator::new(B, m, Default::default()).unwrap();
        let sys = build_system(ConstructingPair::new(t, 1e12).unwrap()).unwrap();
        let chk = positive_constructing_pair(&sys, Side::Phi, 1e12).unwrap();
        let rebuilt = chk.polar.f_columns.dot(chk.pair.t().entries());
        assert!(linalg::max_abs(&(&rebuilt - sys.phi())) < 1e-10);
    }

    #[test]
    fn cross_check_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let n = 16;
        for _ in 0..10 {
            let m = Array2::from_shape_fn((n, n), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }) + Array2::<Complex64>::eye(n) * c(3.0);
            let t = TruncatedOperator::new(B, m, Default::default()).unwrap();
            let cond = t.condition_number();
            let sys = build_system(ConstructingPair::new(t, 1e12).unwrap()).unwrap();
            let chk = positive_constructing_pair(&sys, Side::Phi, 1e12).unwrap();
            let cross = cross_constructing_check(&sys, &chk.polar, Side::Phi, 1e12).unwrap();
            assert!(cross <= 1e-9 * cond, "cross {cross}, cond {cond}");
        }
    }
}
