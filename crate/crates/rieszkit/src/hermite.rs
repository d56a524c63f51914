//! Normalized Hermite functions and Gauss–Hermite quadrature.
//!
//! The orthonormal basis is e_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)),
//! evaluated by the recurrence on the normalized functions themselves so that
//! values stay representable up to n = 1000.
//!
//! Weight convention: quadrature rules store *total* weights, i.e. the
//! classical Gauss–Hermite weights pre-multiplied by exp(x_i^2), so that
//! `sum w_i F(x_i)` approximates `int F(x) dx` for integrands F that already
//! carry their own Gaussian decay (every product of basis functions does).

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

pub const MAX_QUADRATURE_ORDER: usize = 1024;

/// Gauss–Hermite rule with total weights (see module header).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Ascending quadrature nodes.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Total weights (classical weights times exp(node^2)), all positive.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Uniform evaluation grid.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, count: usize) -> Result<Self> {
        if !(x_min < x_max) {
            return Err(Error::Config(format!("grid requires x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if count < 2 {
            return Err(Error::Config(format!("grid requires count >= 2, got {count}")));
        }
        Ok(Self { x_min, x_max, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.x_max - self.x_min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.x_min + h * i as f64).collect()
    }
}

/// e_n(x) as mantissa * 2^exponent. Keeps the recurrence in range even where
/// e_0(x) = pi^{-1/4} exp(-x^2/2) underflows (|x| beyond ~38).
fn eval_scaled(n: usize, x: f64) -> (f64, i64) {
    let ln_e0 = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let exp0 = (ln_e0 / std::f64::consts::LN_2).floor();
    let mut scale = exp0 as i64;
    let mut prev = 0.0_f64;
    let mut cur = (ln_e0 - exp0 * std::f64::consts::LN_2).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 {
            cur *= 2f64.powi(-500);
            prev *= 2f64.powi(-500);
            scale += 500;
        } else if mag > 0.0 && mag < 1e-150 {
            cur *= 2f64.powi(500);
            prev *= 2f64.powi(500);
            scale -= 500;
        }
    }
    (cur, scale)
}

/// Normalized Hermite function e_n(x).
pub fn eval_hermite_function(n: usize, x: f64) -> f64 {
    let (m, e) = eval_scaled(n, x);
    if e < -1100 {
        return 0.0;
    }
    m * 2f64.powi(e.clamp(-1100, 1023) as i32)
}

/// e_0(x) .. e_{count-1}(x) in one sweep.
pub fn hermite_values(count: usize, x: f64) -> Vec<f64> {
    let ln_e0 = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let exp0 = (ln_e0 / std::f64::consts::LN_2).floor();
    let mut scale = exp0 as i64;
    let mut out = Vec::with_capacity(count);
    let unscale = |v: f64, s: i64| -> f64 {
        if s < -1100 {
            0.0
        } else {
            v * 2f64.powi(s.clamp(-1100, 1023) as i32)
        }
    };
    let mut prev = 0.0_f64;
    let mut cur = (ln_e0 - exp0 * std::f64::consts::LN_2).exp();
    if count > 0 {
        out.push(unscale(cur, scale));
    }
    for k in 0..count.saturating_sub(1) {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e150 {
            cur *= 2f64.powi(-500);
            prev *= 2f64.powi(-500);
            scale += 500;
        } else if mag > 0.0 && mag < 1e-150 {
            cur *= 2f64.powi(500);
            prev *= 2f64.powi(500);
            scale -= 500;
        }
        out.push(unscale(cur, scale));
    }
    out
}

/// Gauss–Hermite rule by the Golub–Welsch symmetric-tridiagonal eigenvalue
/// method; total weights via w_i = 1 / (order * e_{order-1}(x_i)^2).
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(Error::Config(format!(
            "quadrature order must be in 1..={MAX_QUADRATURE_ORDER}, got {order}"
        )));
    }
    let mut jac = Array2::<f64>::zeros((order, order));
    for k in 1..order {
        let off = (k as f64 / 2.0).sqrt();
        jac[(k - 1, k)] = off;
        jac[(k, k - 1)] = off;
    }
    let (nodes_arr, _) = linalg::symmetric_eigen(&jac);
    let nodes: Vec<f64> = nodes_arr.to_vec();
    let mut weights = Vec::with_capacity(order);
    for &x in &nodes {
        let (m, e) = eval_scaled(order - 1, x);
        // 1/(order * e^2) with the 2^e scale pulled out explicitly
        let w = 2f64.powi((-2 * e).clamp(-2000, 2000) as i32) / (order as f64 * m * m);
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::NonFinite { at: x });
        }
        weights.push(w);
    }
    Ok(QuadratureRule { order, nodes, weights })
}

/// Quadrature approximation of int f(x) conj(g(x)) dx.
pub fn project_inner_product<F, G>(f: F, g: G, rule: &QuadratureRule) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fv = f(x);
        let gv = g(x);
        if !fv.is_finite() || !gv.is_finite() {
            return Err(Error::NonFinite { at: x });
        }
        acc += w * fv * gv.conj();
    }
    Ok(acc)
}

/// Default rule order for truncation size N: 2N + 16, clamped to the cap.
pub fn default_rule_order(n: usize) -> usize {
    (2 * n + 16).min(MAX_QUADRATURE_ORDER)
}
