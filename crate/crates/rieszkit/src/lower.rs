//! Lowering of operator expressions to truncated matrices.
//!
//! Lowering is a homomorphism: Add and Mul map to matrix sum and product,
//! Pow to repeated multiplication, Inv to the guarded matrix inverse (or to
//! the Green-kernel quadrature route where one is registered), MulOp to a
//! quadrature-projected multiplication operator and Diag to a diagonal of
//! stored alpha values.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::OperatorExpr;
use crate::hermite::QuadratureRule;
use crate::kernel;
use crate::operator::{
    momentum_matrix, multiplication_operator, position_matrix, TruncatedOperator,
    DEFAULT_COND_GUARD,
};
use crate::riesz::AlphaSequence;

/// How Inv nodes are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMode {
    /// Truncate, then invert the matrix (guarded by condition number).
    #[default]
    Matrix,
    /// Quadrature of a known integral kernel; registered only for
    /// inv(1 + p^2) with Green kernel (1/2) e^{-|x|}. Falls back to an error
    /// for any other Inv argument.
    Kernel,
}

#[derive(Debug, Clone)]
pub struct LowerOptions {
    pub basis: String,
    pub cond_guard: f64,
    pub inverse_mode: InverseMode,
}

impl Default for LowerOptions {
    fn default() -> Self {
        Self {
            basis: "hermite-e".to_string(),
            cond_guard: DEFAULT_COND_GUARD,
            inverse_mode: InverseMode::Matrix,
        }
    }
}

/// True if the expression is 1 + p^2 (either operand order), the only shape
/// with a registered integral kernel.
fn is_one_plus_p_squared(e: &OperatorExpr) -> bool {
    let is_one = |e: &OperatorExpr| matches!(e, OperatorExpr::Const(c) if *c == Complex64::new(1.0, 0.0));
    let is_p2 = |e: &OperatorExpr| {
        matches!(e, OperatorExpr::Pow(b, 2) if matches!(**b, OperatorExpr::P))
            || matches!(e, OperatorExpr::Mul(l, r)
                if matches!(**l, OperatorExpr::P) && matches!(**r, OperatorExpr::P))
    };
    match e {
        OperatorExpr::Add(l, r) => (is_one(l) && is_p2(r)) || (is_p2(l) && is_one(r)),
        _ => false,
    }
}

pub fn lower(
    expr: &OperatorExpr,
    n: usize,
    rule: &QuadratureRule,
    sequences: &HashMap<String, AlphaSequence>,
    opts: &LowerOptions,
) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::Config("truncation size must be positive".into()));
    }
    let basis = opts.basis.as_str();
    match expr {
        OperatorExpr::Const(c) => Ok(TruncatedOperator::identity(basis, n).scale(*c)),
        OperatorExpr::X => Ok(position_matrix(basis, n)),
        OperatorExpr::P => Ok(momentum_matrix(basis, n)),
        OperatorExpr::Add(l, r) => {
            lower(l, n, rule, sequences, opts)?.add(&lower(r, n, rule, sequences, opts)?)
        }
        OperatorExpr::Mul(l, r) => {
            lower(l, n, rule, sequences, opts)?.compose(&lower(r, n, rule, sequences, opts)?)
        }
        OperatorExpr::Pow(b, k) => Ok(lower(b, n, rule, sequences, opts)?.pow(*k)),
        OperatorExpr::Inv(inner) => {
            if opts.inverse_mode == InverseMode::Kernel {
                if is_one_plus_p_squared(inner) {
                    return kernel::greens_kernel_inverse(basis, n, rule);
                }
                return Err(Error::Config(format!(
                    "no integral kernel registered for inv({inner}); only inv(1 + p^2) has one"
                )));
            }
            lower(inner, n, rule, sequences, opts)?.inverse(opts.cond_guard)
        }
        OperatorExpr::MulOp(scalar) => {
            if !scalar.is_scalar_in_x() {
                return Err(Error::Contract(format!(
                    "mul(...) argument is not a scalar expression in x: {scalar}"
                )));
            }
            multiplication_operator(basis, |x| scalar.eval_scalar(x).unwrap_or(f64::NAN), n, rule)
        }
        OperatorExpr::Diag(name) => {
            let seq = sequences
                .get(name)
                .ok_or_else(|| Error::UnknownSequence(name.clone()))?;
            if seq.len() < n {
                return Err(Error::Config(format!(
                    "sequence `{name}` has {} values, need {n}",
                    seq.len()
                )));
            }
            TruncatedOperator::from_diagonal(basis, &seq.values[..n])
        }
    }
}
