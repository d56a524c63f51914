//! Integral-kernel route for inverses: builds (1 + p^2)^{-1} by quadrature of
//! its Green kernel G(x - y) = (1/2) e^{-|x-y|}.
//!
//! The kernel has a kink on the diagonal, so the inner integral is split
//! there and mapped onto [0, inf) twice:
//!   (T^{-1} e_n)(x) = (1/2) int_0^inf e^{-t} [e_n(x - t) + e_n(x + t)] dt,
//! which classical Gauss-Laguerre integrates accurately.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{self, QuadratureRule};
use crate::linalg;
use crate::operator::{OperatorFlags, TruncatedOperator};

/// Classical Gauss-Laguerre rule: sum w_i h(t_i) approximates
/// int_0^inf h(t) e^{-t} dt (the weight e^{-t} is part of the rule).
pub fn gauss_laguerre_rule(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 || order > hermite::MAX_QUADRATURE_ORDER {
        return Err(Error::Config(format!(
            "laguerre order must be in 1..={}, got {order}",
            hermite::MAX_QUADRATURE_ORDER
        )));
    }
    let mut jac = Array2::<f64>::zeros((order, order));
    for k in 0..order {
        jac[(k, k)] = (2 * k + 1) as f64;
        if k + 1 < order {
            let off = (k + 1) as f64;
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let (nodes, vecs) = linalg::symmetric_eigen(&jac);
    let weights: Vec<f64> = (0..order).map(|j| vecs[(0, j)] * vecs[(0, j)]).collect();
    Ok((nodes.to_vec(), weights))
}

/// Position-space samples of psi_n(x) = (1/2) int e^{-|x-y|} e_n(y) dy for
/// n = 0..count-1 at a single point, by split Gauss-Laguerre quadrature.
pub fn kernel_image_values(count: usize, x: f64, lag_nodes: &[f64], lag_weights: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0f64; count];
    for (&t, &w) in lag_nodes.iter().zip(lag_weights) {
        let left = hermite::hermite_values(count, x - t);
        let right = hermite::hermite_values(count, x + t);
        for n in 0..count {
            acc[n] += 0.5 * w * (left[n] + right[n]);
        }
    }
    acc
}

/// Matrix of (1 + p^2)^{-1} in the Hermite basis via the Green kernel:
/// entry (m, n) = <e_m, psi_n> by the outer Gauss-Hermite rule.
pub fn greens_kernel_inverse(basis: &str, n: usize, rule: &QuadratureRule) -> Result<TruncatedOperator> {
    if rule.order() < 2 * n + 16 {
        return Err(Error::Config(format!(
            "kernel route needs rule order >= {}, got {}",
            2 * n + 16,
            rule.order()
        )));
    }
    let lag_order = (2 * n + 32).min(hermite::MAX_QUADRATURE_ORDER);
    let (lag_nodes, lag_weights) = gauss_laguerre_rule(lag_order)?;
    let mut m = Array2::<Complex64>::zeros((n, n));
    for (q, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        let _ = q;
        let basis_vals = hermite::hermite_values(n, x);
        let image_vals = kernel_image_values(n, x, &lag_nodes, &lag_weights);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] += Complex64::new(w * basis_vals[r] * image_vals[c], 0.0);
            }
        }
    }
    TruncatedOperator::new(basis, m, OperatorFlags { self_adjoint: true, positive: true })
}
