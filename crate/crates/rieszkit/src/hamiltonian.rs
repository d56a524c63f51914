//! Hamiltonians and ladder operators attached to an alpha sequence, in the
//! defining basis and similarity-transformed onto the phi / psi families.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::QuadratureRule;
use crate::linalg;
use crate::operator::{
    momentum_matrix, multiplication_operator, position_matrix, OperatorFlags, TruncatedOperator,
    DEFAULT_COND_GUARD,
};
use crate::riesz::{AlphaSequence, BiorthogonalSystem};
use ndarray::Array2;

/// Which family a transformed triple acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Phi,
    Psi,
}

/// H = diag(alpha), lowering A and raising B with weights alpha_{n+1}.
#[derive(Debug, Clone)]
pub struct LadderTriple {
    pub h: TruncatedOperator,
    pub a: TruncatedOperator,
    pub b: TruncatedOperator,
    pub alpha: AlphaSequence,
}

/// Triple in the defining orthonormal basis:
/// H = diag(alpha_0..alpha_{N-1}), A[n][n+1] = alpha_{n+1}, B[n+1][n] = alpha_{n+1}.
pub fn standard_triple(basis: &str, alpha: &AlphaSequence, n: usize) -> Result<LadderTriple> {
    if alpha.len() < n {
        return Err(Error::Config(format!(
            "alpha sequence `{}` has {} values, need {n}",
            alpha.name,
            alpha.len()
        )));
    }
    let h = TruncatedOperator::from_diagonal(basis, &alpha.values[..n])?;
    let mut a = Array2::<Complex64>::zeros((n, n));
    let mut b = Array2::<Complex64>::zeros((n, n));
    for k in 0..n.saturating_sub(1) {
        a[(k, k + 1)] = alpha.values[k + 1];
        b[(k + 1, k)] = alpha.values[k + 1];
    }
    Ok(LadderTriple {
        h,
        a: TruncatedOperator::new(basis, a, OperatorFlags::default())?,
        b: TruncatedOperator::new(basis, b, OperatorFlags::default())?,
        alpha: alpha.clone(),
    })
}

/// Similarity transform of the whole triple:
/// phi side is X -> T X T^{-1}, psi side is X -> (T*)^{-1} X T*.
pub fn transform_triple(
    triple: &LadderTriple,
    t: &TruncatedOperator,
    side: Side,
    cond_guard: f64,
) -> Result<LadderTriple> {
    let (left, right) = match side {
        Side::Phi => {
            let t_inv = t.inverse(cond_guard)?;
            (t.clone(), t_inv)
        }
        Side::Psi => {
            let t_star = t.adjoint();
            let t_star_inv = t_star.inverse(cond_guard)?;
            (t_star_inv, t_star)
        }
    };
    let sim = |x: &TruncatedOperator| -> Result<TruncatedOperator> {
        left.compose(x)?.compose(&right)
    };
    Ok(LadderTriple {
        h: sim(&triple.h)?,
        a: sim(&triple.a)?,
        b: sim(&triple.b)?,
        alpha: triple.alpha.clone(),
    })
}

/// Per-mode relative residuals of one operator relation.
#[derive(Debug, Clone)]
pub struct ModeResiduals {
    /// (mode index, relative residual), over the checked interior range.
    pub per_mode: Vec<(usize, f64)>,
    pub max: f64,
}

fn mode_residuals(pairs: Vec<(usize, f64)>) -> ModeResiduals {
    let max = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    ModeResiduals { per_mode: pairs, max }
}

/// Residuals of the three ladder relations on the family vectors.
#[derive(Debug, Clone)]
pub struct EigenRelationCheck {
    pub h: ModeResiduals,
    pub a: ModeResiduals,
    pub b: ModeResiduals,
    pub interior: usize,
}

fn col_norm(m: &Array2<Complex64>, k: usize) -> f64 {
    m.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Check H f_n = alpha_n f_n, A f_n = alpha_n f_{n-1} (n >= 1, and A f_0 = 0)
/// and B f_n = alpha_{n+1} f_{n+1}, restricted to modes n < interior. Truncation
/// corrupts the top of the mode range for differential or multiplication T,
/// so callers pass the interior size (typically N minus a margin of N/4).
pub fn check_eigen_relations(
    triple: &LadderTriple,
    sys: &BiorthogonalSystem,
    side: Side,
    interior: usize,
) -> Result<EigenRelationCheck> {
    let n = sys.dim();
    if interior == 0 || interior > n {
        return Err(Error::Contract(format!(
            "interior size {interior} out of range for dimension {n}"
        )));
    }
    let family = match side {
        Side::Phi => sys.phi(),
        Side::Psi => sys.psi(),
    };
    let alpha = &triple.alpha;
    if alpha.len() < n {
        return Err(Error::Config(format!(
            "alpha sequence `{}` too short for dimension {n}",
            alpha.name
        )));
    }
    let h_im = triple.h.entries().dot(family);
    let a_im = triple.a.entries().dot(family);
    let b_im = triple.b.entries().dot(family);

    let mut h_res = Vec::with_capacity(interior);
    let mut a_res = Vec::with_capacity(interior);
    let mut b_res = Vec::with_capacity(interior);
    for k in 0..interior {
        let fam_norm = col_norm(family, k).max(f64::MIN_POSITIVE);
        let h_dev: f64 = (0..n)
            .map(|m| (h_im[(m, k)] - alpha.values[k] * family[(m, k)]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        h_res.push((k, h_dev / (alpha.values[k].norm().max(1.0) * fam_norm)));

        let a_dev: f64 = (0..n)
            .map(|m| {
                let want = if k >= 1 {
                    alpha.values[k] * family[(m, k - 1)]
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (a_im[(m, k)] - want).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        a_res.push((k, a_dev / (alpha.values[k].norm().max(1.0) * fam_norm)));

        if k + 1 < n {
            let b_dev: f64 = (0..n)
                .map(|m| (b_im[(m, k)] - alpha.values[k + 1] * family[(m, k + 1)]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            b_res.push((k, b_dev / (alpha.values[k + 1].norm().max(1.0) * fam_norm)));
        }
    }
    Ok(EigenRelationCheck {
        h: mode_residuals(h_res),
        a: mode_residuals(a_res),
        b: mode_residuals(b_res),
        interior,
    })
}

/// Closed-form ladder operators of the T = multiplication by (1 + x^2) model:
/// A_phi = (x - 2x/(1+x^2) + i p)/sqrt(2),  B_phi = (x + 2x/(1+x^2) - i p)/sqrt(2),
/// A_psi = (x + 2x/(1+x^2) + i p)/sqrt(2),  B_psi = (x - 2x/(1+x^2) - i p)/sqrt(2).
pub struct Example3Ladders {
    pub a_phi: TruncatedOperator,
    pub b_phi: TruncatedOperator,
    pub a_psi: TruncatedOperator,
    pub b_psi: TruncatedOperator,
}

pub fn example3_ladders(basis: &str, n: usize, rule: &QuadratureRule) -> Result<Example3Ladders> {
    let x = position_matrix(basis, n);
    let p = momentum_matrix(basis, n);
    let g = multiplication_operator(basis, |t| 2.0 * t / (1.0 + t * t), n, rule)?;
    let ip = p.scale(Complex64::new(0.0, 1.0));
    let inv_sqrt2 = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let build = |g_sign: f64, p_sign: f64| -> Result<TruncatedOperator> {
        let gp = g.scale(Complex64::new(g_sign, 0.0));
        let pp = ip.scale(Complex64::new(p_sign, 0.0));
        Ok(x.add(&gp)?.add(&pp)?.scale(inv_sqrt2))
    };
    Ok(Example3Ladders {
        a_phi: build(-1.0, 1.0)?,
        b_phi: build(1.0, -1.0)?,
        a_psi: build(1.0, 1.0)?,
        b_psi: build(-1.0, -1.0)?,
    })
}

/// Max-abs entry difference on the leading block x block corner.
pub fn block_discrepancy(a: &TruncatedOperator, b: &TruncatedOperator, block: usize) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..block {
        for c in 0..block {
            worst = worst.max((a.entries()[(r, c)] - b.entries()[(r, c)]).norm());
        }
    }
    worst
}

/// Results of the factorization and duality checks for the (1 + x^2) model.
#[derive(Debug, Clone)]
pub struct FactorizationCheck {
    pub block: usize,
    /// max |(2 B_phi A_phi + 1) - T H0 T^{-1}| on the leading block
    pub phi_discrepancy: f64,
    /// same for the psi side against (T*)^{-1} H0 T*
    pub psi_discrepancy: f64,
    /// relative Frobenius deviation of B_phi - (A_psi)* on the leading block
    pub duality_b_phi: f64,
    /// relative Frobenius deviation of A_phi - (B_psi)* on the leading block
    pub duality_a_phi: f64,
    /// ||A_phi phi_0|| / ||phi_0||
    pub vacuum_ratio: f64,
}

fn block_fro(m: &Array2<Complex64>, block: usize) -> f64 {
    let mut acc = 0.0;
    for r in 0..block {
        for c in 0..block {
            acc += m[(r, c)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Verify H_phi = 2 B_phi A_phi + 1 (and the psi analogue) for the
/// T = multiplication by (1 + x^2) model, plus the adjoint dualities
/// B_phi = A_psi* and A_phi = B_psi*, and the vacuum condition A_phi phi_0 = 0.
pub fn check_factorization_example3(
    basis: &str,
    n: usize,
    rule: &QuadratureRule,
) -> Result<FactorizationCheck> {
    if n < 16 {
        return Err(Error::Config(format!("factorization check needs N >= 16, got {n}")));
    }
    let block = n.div_ceil(4);
    let harmonic: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64).collect();
    let alpha = AlphaSequence::from_real("harmonic", &harmonic, 0);
    let t = multiplication_operator(basis, |x| 1.0 + x * x, n, rule)?;
    let triple = standard_triple(basis, &alpha, n)?;
    let h_phi = transform_triple(&triple, &t, Side::Phi, DEFAULT_COND_GUARD)?.h;
    let h_psi = transform_triple(&triple, &t, Side::Psi, DEFAULT_COND_GUARD)?.h;

    let ladders = example3_ladders(basis, n, rule)?;
    let one = TruncatedOperator::identity(basis, n);
    let two = Complex64::new(2.0, 0.0);
    let fact_phi = ladders.b_phi.compose(&ladders.a_phi)?.scale(two).add(&one)?;
    let fact_psi = ladders.b_psi.compose(&ladders.a_psi)?.scale(two).add(&one)?;

    let dual_b = ladders.b_phi.sub(&ladders.a_psi.adjoint())?;
    let dual_a = ladders.a_phi.sub(&ladders.b_psi.adjoint())?;

    let phi0: Vec<Complex64> = (0..n).map(|m| t.entries()[(m, 0)]).collect();
    let phi0_norm = phi0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let a_phi0_norm = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| ladders.a_phi.entries()[(m, k)] * phi0[k])
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum::<f64>()
        .sqrt();

    Ok(FactorizationCheck {
        block,
        phi_discrepancy: block_discrepancy(&fact_phi, &h_phi, block),
        psi_discrepancy: block_discrepancy(&fact_psi, &h_psi, block),
        duality_b_phi: block_fro(dual_b.entries(), block)
            / block_fro(ladders.b_phi.entries(), block).max(f64::MIN_POSITIVE),
        duality_a_phi: block_fro(dual_a.entries(), block)
            / block_fro(ladders.a_phi.entries(), block).max(f64::MIN_POSITIVE),
        vacuum_ratio: a_phi0_norm / phi0_norm.max(f64::MIN_POSITIVE),
    })
}

/// Relative deviation of H_phi from (H_psi)* — an exact identity at finite
/// dimension for real alpha, bounded by rounding amplified by cond(T)^2.
pub fn check_adjoint_duality(
    t: &TruncatedOperator,
    alpha: &AlphaSequence,
    n: usize,
) -> Result<f64> {
    if !alpha.is_real() {
        return Err(Error::Contract("adjoint duality requires a real alpha sequence".into()));
    }
    let triple = standard_triple(t.basis(), alpha, n)?;
    let h_phi = transform_triple(&triple, t, Side::Phi, DEFAULT_COND_GUARD)?.h;
    let h_psi = transform_triple(&triple, t, Side::Psi, DEFAULT_COND_GUARD)?.h;
    let dev = linalg::fro_norm(h_phi.sub(&h_psi.adjoint())?.entries());
    Ok(dev / linalg::fro_norm(h_phi.entries()).max(f64::MIN_POSITIVE))
}

/// Regularity predicate on alpha: 0 <= alpha_0, strictly increasing, and
/// consecutive gaps at most r.
pub fn validate_alpha_condition(alpha: &AlphaSequence, r: f64) -> Result<bool> {
    if alpha.len() < 2 {
        return Err(Error::Contract("alpha condition needs at least 2 values".into()));
    }
    if !alpha.is_real() {
        return Err(Error::Contract("alpha condition is defined for real sequences".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Config(format!("gap bound r must be positive, got {r}")));
    }
    let v: Vec<f64> = alpha.values.iter().map(|z| z.re).collect();
    if v[0] < 0.0 {
        return Ok(false);
    }
    for w in v.windows(2) {
        if !(w[0] < w[1]) || w[1] > w[0] + r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::gauss_hermite_rule;
    use crate::operator::StateVector;
    use crate::riesz::{build_system, ConstructingPair};
    use ndarray::Array1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const B: &str = "hermite-e";

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn harmonic(n: usize) -> AlphaSequence {
        let v: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64).collect();
        AlphaSequence::from_real("harmonic", &v, 0)
    }

    fn example1(n: usize) -> AlphaSequence {
        let v: Vec<f64> = (1..=n)
            .map(|j| if j % 2 == 0 { 1.0 / j as f64 } else { j as f64 })
            .collect();
        AlphaSequence::from_real("example1", &v, 1)
    }

    #[test]
    fn standard_triple_structure() {
        let n = 6;
        let triple = standard_triple(B, &harmonic(n), n).unwrap();
        for k in 0..n {
            assert_eq!(triple.h.entries()[(k, k)], c((2 * k + 1) as f64));
        }
        // A e_0 = 0
        let e0 = StateVector::basis_vector(B, n, 0).unwrap();
        assert_eq!(triple.a.apply(&e0).unwrap().norm(), 0.0);
        // B e_n = alpha_{n+1} e_{n+1}, and 0 at the top by truncation
        let e2 = StateVector::basis_vector(B, n, 2).unwrap();
        let w = triple.b.apply(&e2).unwrap();
        assert_eq!(w.coeffs()[3], c(7.0));
        let top = StateVector::basis_vector(B, n, n - 1).unwrap();
        assert_eq!(triple.b.apply(&top).unwrap().norm(), 0.0);
    }

    #[test]
    fn shift_algebra_in_defining_basis() {
        // B A e_n = alpha_n^2 e_n for n >= 1 and 0 for n = 0 (A kills e_0),
        // exact up to the top truncated mode
        let n = 10;
        let triple = standard_triple(B, &harmonic(n), n).unwrap();
        let prod = triple.b.compose(&triple.a).unwrap();
        assert_eq!(prod.entries()[(0, 0)], c(0.0));
        for k in 1..n - 1 {
            assert_eq!(prod.entries()[(k, k)], c(((2 * k + 1) * (2 * k + 1)) as f64));
            for m in 0..n {
                if m != k {
                    assert_eq!(prod.entries()[(m, k)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn transform_identity_and_diagonal() {
        let n = 8;
        let triple = standard_triple(B, &example1(n), n).unwrap();
        let id = TruncatedOperator::identity(B, n);
        let same = transform_triple(&triple, &id, Side::Phi, 1e12).unwrap();
        assert_eq!(linalg::max_abs(&same.h.sub(&triple.h).unwrap().entries().clone()), 0.0);
        // diagonal T commutes with diagonal H
        let t = TruncatedOperator::from_diagonal(B, &example1(n).values).unwrap();
        let moved = transform_triple(&triple, &t, Side::Phi, 1e12).unwrap();
        assert!(linalg::max_abs(&moved.h.sub(&triple.h).unwrap().entries().clone()) < 1e-12);
    }

    #[test]
    fn transform_round_trip() {
        let n = 12;
        let rule = gauss_hermite_rule(2 * n + 16).unwrap();
        let t = multiplication_operator(B, |x| 1.0 + x * x, n, &rule).unwrap();
        let t_inv = t.inverse(1e12).unwrap();
        let triple = standard_triple(B, &harmonic(n), n).unwrap();
        let there = transform_triple(&triple, &t, Side::Phi, 1e12).unwrap();
        let back = transform_triple(&there, &t_inv, Side::Phi, 1e12).unwrap();
        let cond = t.condition_number();
        let dev = linalg::max_abs(&back.h.sub(&triple.h).unwrap().entries().clone());
        assert!(dev < 1e-9 * cond * cond, "round trip {dev}");
    }

    #[test]
    fn spectrum_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 16;
        let alpha = harmonic(n);
        let triple = standard_triple(B, &alpha, n).unwrap();
        for _ in 0..5 {
            let m = Array2::from_shape_fn((n, n), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }) + Array2::<Complex64>::eye(n) * c(4.0);
            let t = TruncatedOperator::new(B, m, Default::default()).unwrap();
            if t.condition_number() > 1e4 {
                continue;
            }
            let h_phi = transform_triple(&triple, &t, Side::Phi, 1e12).unwrap().h;
            let mut eigs: Vec<f64> =
                linalg::eigenvalues(h_phi.entries()).iter().map(|z| z.re).collect();
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let bound = 1e-8 * t.condition_number() * (2 * n - 1) as f64;
            for (k, &e) in eigs.iter().enumerate() {
                assert!((e - (2 * k + 1) as f64).abs() <= bound, "mode {k}: {e}");
            }
        }
    }

    #[test]
    fn eigen_relations_identity_and_diagonal() {
        let n = 8;
        let alpha = example1(n);
        let triple = standard_triple(B, &alpha, n).unwrap();
        let id_pair = ConstructingPair::new(TruncatedOperator::identity(B, n), 1e12).unwrap();
        let sys = build_system(id_pair).unwrap();
        let chk = check_eigen_relations(&triple, &sys, Side::Phi, n).unwrap();
        assert!(chk.h.max < 1e-12 && chk.a.max < 1e-12 && chk.b.max < 1e-12);

        let t = TruncatedOperator::from_diagonal(B, &alpha.values).unwrap();
        let sys = build_system(ConstructingPair::new(t.clone(), 1e12).unwrap()).unwrap();
        let moved = transform_triple(&triple, &t, Side::Phi, 1e12).unwrap();
        let chk = check_eigen_relations(&moved, &sys, Side::Phi, n).unwrap();
        assert!(chk.h.max < 1e-12 && chk.a.max < 1e-12 && chk.b.max < 1e-12);
    }

    #[test]
    fn eigen_relations_example3_interior() {
        let n = 64;
        let rule = gauss_hermite_rule(2 * n + 16).unwrap();
        let t = multiplication_operator(B, |x| 1.0 + x * x, n, &rule).unwrap();
        let sys = build_system(ConstructingPair::new(t.clone(), 1e12).unwrap()).unwrap();
        let triple = standard_triple(B, &harmonic(n), n).unwrap();
        for side in [Side::Phi, Side::Psi] {
            let moved = transform_triple(&triple, &t, side, 1e12).unwrap();
            let chk = check_eigen_relations(&moved, &sys, side, n / 4).unwrap();
            assert!(
                chk.h.max < 1e-10 && chk.a.max < 1e-10 && chk.b.max < 1e-10,
                "{side:?}: h {} a {} b {}",
                chk.h.max,
                chk.a.max,
                chk.b.max
            );
        }
    }

    #[test]
    fn ladder_intertwining_on_interior() {
        // (H A - A H) f_n = (alpha_{n-1} - alpha_n) A f_n on interior modes
        let n = 32;
        let rule = gauss_hermite_rule(2 * n + 16).unwrap();
        let t = multiplication_operator(B, |x| 1.0 + x * x, n, &rule).unwrap();
        let sys = build_system(ConstructingPair::new(t.clone(), 1e12).unwrap()).unwrap();
        let triple = standard_triple(B, &harmonic(n), n).unwrap();
        let moved = transform_triple(&triple, &t, Side::Phi, 1e12).unwrap();
        let comm = moved
            .h
            .compose(&moved.a)
            .unwrap()
            .sub(&moved.a.compose(&moved.h).unwrap())
            .unwrap();
        for k in 1..n / 4 {
            let phi_k = sys.phi_vector(k).unwrap();
            let lhs = comm.apply(&phi_k).unwrap();
            let af = moved.a.apply(&phi_k).unwrap();
            let gap = c(-2.0); // alpha_{n-1} - alpha_n = -2 for alpha = 2n+1
            let dev: f64 = lhs
                .coeffs()
                .iter()
                .zip(af.coeffs().iter())
                .map(|(l, r)| (l - gap * r).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(dev / af.norm().max(1e-300) < 1e-6, "mode {k}: {dev}");
        }
    }

    #[test]
    fn factorization_example3_converges() {
        let rule64 = gauss_hermite_rule(2 * 64 + 16).unwrap();
        let chk64 = check_factorization_example3(B, 64, &rule64).unwrap();
        assert!(chk64.duality_b_phi < 1e-12, "duality {}", chk64.duality_b_phi);
        assert!(chk64.duality_a_phi < 1e-12);
        assert!(chk64.vacuum_ratio < 1e-7, "vacuum {}", chk64.vacuum_ratio);
        let rule32 = gauss_hermite_rule(2 * 32 + 16).unwrap();
        let chk32 = check_factorization_example3(B, 32, &rule32).unwrap();
        assert!(
            chk64.phi_discrepancy < chk32.phi_discrepancy,
            "phi: {} -> {}",
            chk32.phi_discrepancy,
            chk64.phi_discrepancy
        );
        assert!(chk64.psi_discrepancy < chk32.psi_discrepancy);
    }

    #[test]
    fn adjoint_duality_random_and_example3() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 16;
        let alpha = harmonic(n);
        for _ in 0..5 {
            let m = Array2::from_shape_fn((n, n), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }) + Array2::<Complex64>::eye(n) * c(4.0);
            let t = TruncatedOperator::new(B, m, Default::default()).unwrap();
            let dev = check_adjoint_duality(&t, &alpha, n).unwrap();
            let cond = t.condition_number();
            assert!(dev <= 1e-10 * cond * cond, "dev {dev}, cond {cond}");
        }
        let n = 64;
        let rule = gauss_hermite_rule(2 * n + 16).unwrap();
        let t = multiplication_operator(B, |x| 1.0 + x * x, n, &rule).unwrap();
        let dev = check_adjoint_duality(&t, &harmonic(n), n).unwrap();
        let cond = t.condition_number();
        assert!(dev <= 1e-10 * cond * cond, "dev {dev}");
    }

    #[test]
    fn alpha_condition_cases() {
        assert!(validate_alpha_condition(&harmonic(16), 2.0).unwrap());
        assert!(!validate_alpha_condition(&example1(16), 2.0).unwrap());
        let seq = AlphaSequence::from_real("gap", &[0.0, 1.0, 2.0, 3.0], 0);
        assert!(!validate_alpha_condition(&seq, 0.5).unwrap());
        let neg = AlphaSequence::from_real("neg", &[-1.0, 0.0, 1.0], 0);
        assert!(!validate_alpha_condition(&neg, 2.0).unwrap());
        let complex_seq = AlphaSequence {
            name: "cplx".into(),
            values: vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0)],
            origin_index: 0,
        };
        assert!(validate_alpha_condition(&complex_seq, 2.0).is_err());
        let short = AlphaSequence::from_real("short", &[1.0], 0);
        assert!(validate_alpha_condition(&short, 2.0).is_err());
    }

    #[test]
    fn alpha_condition_against_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let len = rng.gen_range(2..40usize);
            let r = rng.gen_range(0.1..3.0f64);
            let mut vals = Vec::with_capacity(len);
            let mut cur = rng.gen_range(-0.2..1.0f64);
            vals.push(cur);
            for _ in 1..len {
                // mostly valid steps, occasionally violating ones
                let step = if rng.gen_bool(0.85) {
                    rng.gen_range(0.0..r)
                } else {
                    rng.gen_range(-0.5..2.0 * r)
                };
                cur += step;
                vals.push(cur);
            }
            let alpha = AlphaSequence::from_real("rand", &vals, 0);
            let got = validate_alpha_condition(&alpha, r).unwrap();
            // brute-force scan oracle
            let mut want = vals[0] >= 0.0;
            for k in 0..len - 1 {
                if !(vals[k] < vals[k + 1]) || vals[k + 1] > vals[k] + r {
                    want = false;
                }
            }
            assert_eq!(got, want, "vals {vals:?}, r {r}");
        }
    }

    #[test]
    fn eigen_relations_needs_valid_interior() {
        let n = 8;
        let alpha = example1(n);
        let triple = standard_triple(B, &alpha, n).unwrap();
        let sys = build_system(
            ConstructingPair::new(TruncatedOperator::identity(B, n), 1e12).unwrap(),
        )
        .unwrap();
        assert!(check_eigen_relations(&triple, &sys, Side::Phi, 0).is_err());
        assert!(check_eigen_relations(&triple, &sys, Side::Phi, n + 1).is_err());
        let _ = Array1::<f64>::zeros(1);
    }
}
