//! Built-in reference models with closed-form oracles.
//!
//! - "example1": diagonal T on the coefficient space, alpha_j = j for odd j
//!   and 1/j for even j (source index starts at 1; storage slot k holds the
//!   value for index k+1). Lives purely in coefficient space.
//! - "example2": T = 1 + p^2 with phi_n(x) = (2 + 2n - x^2) e_n(x) and
//!   psi_n(x) = (1/2) int e^{-|x-y|} e_n(y) dy (Green-kernel form).
//! - "example3": T = multiplication by (1 + x^2) with phi_n = (1 + x^2) e_n,
//!   psi_n = e_n / (1 + x^2), and explicit potentials V_phi, V_psi.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr;
use crate::hamiltonian::{standard_triple, transform_triple, Side};
use crate::hermite::{self, GridSpec, QuadratureRule};
use crate::lower::{lower, LowerOptions};
use crate::operator::{momentum_matrix, multiplication_operator, TruncatedOperator};
use crate::riesz::{AlphaSequence, ConstructingPair};
use num_complex::Complex64;

pub const MODEL_NAMES: [&str; 3] = ["example1", "example2", "example3"];

/// A loaded model: the expression it was lowered from, its alpha sequence and
/// the resulting constructing pair.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub name: String,
    pub t_expr: String,
    pub alpha: AlphaSequence,
    pub pair: ConstructingPair,
}

/// alpha_j for "example1": j for odd j, 1/j for even j, j starting at 1.
pub fn example1_alpha(len: usize) -> AlphaSequence {
    let vals: Vec<f64> = (1..=len)
        .map(|j| if j % 2 == 0 { 1.0 / j as f64 } else { j as f64 })
        .collect();
    AlphaSequence::from_real("example1", &vals, 1)
}

/// alpha_n = 2n + 1, the oscillator spectrum.
pub fn harmonic_alpha(len: usize) -> AlphaSequence {
    let vals: Vec<f64> = (0..len).map(|k| (2 * k + 1) as f64).collect();
    AlphaSequence::from_real("harmonic", &vals, 0)
}

/// Named sequences available to diag(...) nodes.
pub fn builtin_sequences(len: usize) -> HashMap<String, AlphaSequence> {
    let mut m = HashMap::new();
    m.insert("example1".to_string(), example1_alpha(len));
    m.insert("harmonic".to_string(), harmonic_alpha(len));
    m
}

/// Expression source for a built-in model.
pub fn model_expr(name: &str) -> Result<&'static str> {
    match name {
        "example1" => Ok("diag(example1)"),
        "example2" => Ok("1 + p^2"),
        "example3" => Ok("mul(1+x^2)"),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

/// Lower a built-in model to a constructing pair at truncation size n.
pub fn load_model(
    name: &str,
    n: usize,
    rule: &QuadratureRule,
    opts: &LowerOptions,
) -> Result<ModelBundle> {
    let src = model_expr(name)?;
    let ast = expr::parse(src)?;
    let sequences = builtin_sequences(n);
    let t = lower(&ast, n, rule, &sequences, opts)?;
    let alpha = match name {
        "example1" => example1_alpha(n),
        _ => harmonic_alpha(n),
    };
    let pair = ConstructingPair::new(t, opts.cond_guard)?;
    Ok(ModelBundle { name: name.to_string(), t_expr: src.to_string(), alpha, pair })
}

/// Default comparison grid: uniform on [-w, w] with 513 points, where the
/// window w = sqrt(2N) + 4 covers the classical turning point of mode N.
pub fn default_grid(n: usize) -> GridSpec {
    let w = (2.0 * n as f64).sqrt() + 4.0;
    GridSpec::new(-w, w, 513).expect("static grid parameters are valid")
}

/// Closed-form phi_n(x) where one exists (example2 and example3).
pub fn phi_closed_form(name: &str, n: usize, x: f64) -> Result<f64> {
    let e = hermite::eval_hermite_function(n, x);
    match name {
        "example2" => Ok((2.0 + 2.0 * n as f64 - x * x) * e),
        "example3" => Ok((1.0 + x * x) * e),
        "example1" => Err(Error::Contract("example1 has no position-space form".into())),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

/// Closed-form psi_n(x) for example3; example2's psi requires the kernel
/// quadrature (see kernel::kernel_image_values).
pub fn psi_closed_form(name: &str, n: usize, x: f64) -> Result<f64> {
    match name {
        "example3" => Ok(hermite::eval_hermite_function(n, x) / (1.0 + x * x)),
        "example1" => Err(Error::Contract("example1 has no position-space form".into())),
        "example2" => Err(Error::Contract(
            "example2 psi has no elementary closed form; use the kernel quadrature".into(),
        )),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

/// V_phi(x) = x^2 + 2 (1 - 3 x^2) / (1 + x^2)^2.
pub fn v_phi(x: f64) -> f64 {
    let d = 1.0 + x * x;
    x * x + 2.0 * (1.0 - 3.0 * x * x) / (d * d)
}

/// V_psi(x) = x^2 - 2 / (1 + x^2).
pub fn v_psi(x: f64) -> f64 {
    x * x - 2.0 / (1.0 + x * x)
}

/// Two-route comparison of the example3 Hamiltonians: similarity transform
/// T H0 T^{-1} versus the explicit form p^2 + V_phi + (4 i x / (1+x^2)) p
/// (sign-flipped first-order term for the psi side), on the leading block.
#[derive(Debug, Clone)]
pub struct PotentialsCheck {
    pub block: usize,
    pub phi_discrepancy: f64,
    pub psi_discrepancy: f64,
}

pub fn example3_potentials_check(basis: &str, n: usize, rule: &QuadratureRule) -> Result<PotentialsCheck> {
    if n < 32 {
        return Err(Error::Config(format!("potentials check needs N >= 32, got {n}")));
    }
    let block = n.div_ceil(4);
    let t = multiplication_operator(basis, |x| 1.0 + x * x, n, rule)?;
    let triple = standard_triple(basis, &harmonic_alpha(n), n)?;
    let h_phi_sim = transform_triple(&triple, &t, Side::Phi, 1e12)?.h;
    let h_psi_sim = transform_triple(&triple, &t, Side::Psi, 1e12)?.h;

    let p = momentum_matrix(basis, n);
    let p2 = p.pow(2);
    let first_order = multiplication_operator(basis, |x| 4.0 * x / (1.0 + x * x), n, rule)?
        .compose(&p)?
        .scale(Complex64::new(0.0, 1.0));
    let h_phi_explicit = p2
        .add(&multiplication_operator(basis, v_phi, n, rule)?)?
        .add(&first_order)?;
    let h_psi_explicit = p2
        .add(&multiplication_operator(basis, v_psi, n, rule)?)?
        .add(&first_order.scale(Complex64::new(-1.0, 0.0)))?;

    let worst = |a: &TruncatedOperator, b: &TruncatedOperator| -> f64 {
        let mut w = 0.0f64;
        for r in 0..block {
            for c in 0..block {
                w = w.max((a.entries()[(r, c)] - b.entries()[(r, c)]).norm());
            }
        }
        w
    };
    Ok(PotentialsCheck {
        block,
        phi_discrepancy: worst(&h_phi_sim, &h_phi_explicit),
        psi_discrepancy: worst(&h_psi_sim, &h_psi_explicit),
    })
}
