//! Check-suite orchestration: run named verification suites over a run
//! configuration, produce CheckReports, drive convergence studies across
//! truncation sizes, and export matrices for inspection.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::expr;
use crate::hamiltonian::{
    check_adjoint_duality, check_eigen_relations, check_factorization_example3, standard_triple,
    transform_triple, Side,
};
use crate::hermite::{gauss_hermite_rule, QuadratureRule};
use crate::linalg;
use crate::lower::{lower, LowerOptions};
use crate::models::{
    self, builtin_sequences, example3_potentials_check, harmonic_alpha, load_model,
};
use crate::operator::{StateVector, TruncatedOperator, DEFAULT_COND_GUARD};
use crate::polar::{cross_constructing_check, positive_constructing_pair, PositivePairCheck};
use crate::report::{CheckReport, PerModeEntry, Provenance};
use crate::riesz::{
    biorthogonality_gram, build_system, quasi_basis_residual, AlphaSequence, BiorthogonalSystem,
    ConstructingPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Biorthogonality,
    Quasibasis,
    Hamiltonian,
    Factorization,
    Polar,
    All,
}

impl SuiteName {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "biorthogonality" => SuiteName::Biorthogonality,
            "quasibasis" => SuiteName::Quasibasis,
            "hamiltonian" => SuiteName::Hamiltonian,
            "factorization" => SuiteName::Factorization,
            "polar" => SuiteName::Polar,
            "all" => SuiteName::All,
            _ => return Err(Error::Config(format!("unknown suite `{s}`"))),
        })
    }

    fn checks(&self, model_is_example3: bool) -> Vec<&'static str> {
        let fact: &[&'static str] = if model_is_example3 {
            &["factorization", "vacuum", "ladder_duality", "potentials"]
        } else {
            &[]
        };
        match self {
            SuiteName::Biorthogonality => vec!["biorthogonality"],
            SuiteName::Quasibasis => vec!["quasibasis"],
            SuiteName::Hamiltonian => {
                vec!["eigen_relations", "adjoint_duality", "spectrum_invariance"]
            }
            SuiteName::Factorization => fact.to_vec(),
            SuiteName::Polar => vec!["polar_unitarity", "polar_family", "polar_cross"],
            SuiteName::All => {
                let mut v = vec!["biorthogonality", "quasibasis", "eigen_relations",
                    "adjoint_duality", "spectrum_invariance"];
                v.extend_from_slice(fact);
                v.extend_from_slice(&["polar_unitarity", "polar_family", "polar_cross"]);
                v
            }
        }
    }
}

/// Everything the checks for one (model, N) combination share.
struct Context {
    model: String,
    n: usize,
    basis: String,
    alpha: AlphaSequence,
    pair: ConstructingPair,
    sys: BiorthogonalSystem,
    cond: f64,
    rule: QuadratureRule,
    is_example3: bool,
    provenance: Provenance,
    seed: u64,
}

fn build_context(cfg: &RunConfig, n: usize) -> Result<Context> {
    let rule = gauss_hermite_rule(cfg.rule_order(n))?;
    let opts = LowerOptions {
        inverse_mode: cfg.parsed_inverse_mode(),
        ..LowerOptions::default()
    };
    let (model, alpha, pair) = if let Some(name) = &cfg.model.name {
        let bundle = load_model(name, n, &rule, &opts)?;
        (bundle.name, bundle.alpha, bundle.pair)
    } else {
        let src = cfg.model.t_expr.as_deref().expect("validated");
        let ast = expr::parse(src)?;
        let sequences = builtin_sequences(n);
        let t = lower(&ast, n, &rule, &sequences, &opts)?;
        let alpha = match cfg.model.alpha.as_deref() {
            Some(name) => sequences
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnknownSequence(name.to_string()))?,
            None => harmonic_alpha(n),
        };
        (src.to_string(), alpha, ConstructingPair::new(t, opts.cond_guard)?)
    };
    let basis = pair.basis().to_string();
    let cond = pair.cond();
    let is_example3 = model == "example3" || model == "mul(1+x^2)";
    let sys = build_system(pair.clone())?;
    Ok(Context {
        model,
        n,
        basis,
        alpha,
        pair,
        sys,
        cond,
        rule,
        is_example3,
        provenance: Provenance { config_hash: cfg.config_hash(), seed: cfg.seed },
        seed: cfg.seed,
    })
}

fn tolerance(cfg: &RunConfig, name: &str, default: f64) -> f64 {
    cfg.tolerances.get(name).copied().unwrap_or(default)
}

fn scalar_report(ctx: &Context, cfg: &RunConfig, name: &str, default_tol: f64, residual: f64) -> CheckReport {
    CheckReport::new(
        name,
        &ctx.model,
        ctx.n,
        tolerance(cfg, name, default_tol),
        residual,
        vec![],
        ctx.provenance.clone(),
    )
}

fn check_biorthogonality(ctx: &Context, cfg: &RunConfig) -> Result<CheckReport> {
    let gram = biorthogonality_gram(&ctx.sys);
    let n = ctx.n;
    let per_mode = (0..n)
        .map(|col| {
            let residual = (0..n)
                .map(|row| {
                    let want = if row == col { 1.0 } else { 0.0 };
                    (gram.gram[(row, col)] - Complex64::new(want, 0.0)).norm()
                })
                .fold(0.0, f64::max);
            PerModeEntry { mode: col, residual }
        })
        .collect();
    Ok(CheckReport::new(
        "biorthogonality",
        &ctx.model,
        n,
        tolerance(cfg, "biorthogonality", 1e-9 * ctx.cond),
        gram.max_deviation(),
        per_mode,
        ctx.provenance.clone(),
    ))
}

/// Test vectors: one per configured profile, seeded so identical configs
/// reproduce identical coefficients.
fn test_vectors(ctx: &Context, cfg: &RunConfig) -> Result<Vec<StateVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add(ctx.n as u64));
    cfg.profiles()?
        .iter()
        .map(|p| StateVector::new(&ctx.basis, Array1::from(p.coefficients(ctx.n, &mut rng))))
        .collect()
}

fn check_quasibasis(ctx: &Context, cfg: &RunConfig) -> Result<CheckReport> {
    let vectors = test_vectors(ctx, cfg)?;
    let mut per_mode = Vec::new();
    let mut worst = 0.0f64;
    let mut idx = 0usize;
    for x in &vectors {
        for y in &vectors {
            let r = quasi_basis_residual(&ctx.sys, x, y, ctx.n)?;
            let scale = (x.norm() * y.norm()).max(f64::MIN_POSITIVE);
            let residual = r.norm() / scale;
            worst = worst.max(residual);
            per_mode.push(PerModeEntry { mode: idx, residual });
            idx += 1;
        }
    }
    Ok(CheckReport::new(
        "quasibasis",
        &ctx.model,
        ctx.n,
        tolerance(cfg, "quasibasis", 1e-10 * ctx.cond),
        worst,
        per_mode,
        ctx.provenance.clone(),
    ))
}

fn check_eigen(ctx: &Context, cfg: &RunConfig) -> Result<CheckReport> {
    let triple = standard_triple(&ctx.basis, &ctx.alpha, ctx.n)?;
    let transformed = transform_triple(&triple, ctx.pair.t(), Side::Phi, DEFAULT_COND_GUARD)?;
    let interior = ctx.n - ctx.n / 4;
    let check = check_eigen_relations(&transformed, &ctx.sys, Side::Phi, interior)?;
    let per_mode = check
        .h
        .per_mode
        .iter()
        .zip(&check.a.per_mode)
        .zip(&check.b.per_mode)
        .map(|((h, a), b)| PerModeEntry { mode: h.0, residual: h.1.max(a.1).max(b.1) })
        .collect();
    let worst = check.h.max.max(check.a.max).max(check.b.max);
    Ok(CheckReport::new(
        "eigen_relations",
        &ctx.model,
        ctx.n,
        tolerance(cfg, "eigen_relations", 1e-6),
        worst,
        per_mode,
        ctx.provenance.clone(),
    ))
}

fn check_duality(ctx: &Context, cfg: &RunConfig) -> Result<CheckReport> {
    let dev = check_adjoint_duality(ctx.pair.t(), &ctx.alpha, ctx.n)?;
    Ok(scalar_report(ctx, cfg, "adjoint_duality", 1e-10 * ctx.cond * ctx.cond, dev))
}

/// Similarity transforms preserve the spectrum exactly at finite dimension:
/// the eigenvalues of T H T^{-1} must match the alpha values.
fn check_spectrum(ctx: &Context, cfg: &RunConfig) -> Result<CheckReport> {
    let triple = standard_triple(&ctx.basis, &ctx.alpha, ctx.n)?;
    let transformed = transform_triple(&triple, ctx.pair.t(), Side::Phi, DEFAULT_COND_GUARD)?;
    let mut eigs = linalg::eigenvalues(transformed.h.entries());
    let mut want: Vec<Complex64> = ctx.alpha.values[..ctx.n].to_vec();
    let key = |z: &Complex64| (z.re, z.im);
    eigs.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    let max_alpha = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let per_mode: Vec<PerModeEntry> = eigs
        .iter()
        .zip(&want)
        .enumerate()
        .map(|(k, (e, w))| PerModeEntry { mode: k, residual: (e - w).norm() })
        .collect();
    let worst = per_mode.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(CheckReport::new(
        "spectrum_invariance",
        &ctx.model,
        ctx.n,
        tolerance(cfg, "spectrum_invariance", 1e-8 * ctx.cond * max_alpha),
        worst,
        per_mode,
        ctx.provenance.clone(),
    ))
}

fn polar_pair(ctx: &Context) -> Result<PositivePairCheck> {
    positive_constructing_pair(&ctx.sys, Side::Phi, DEFAULT_COND_GUARD)
}

fn run_check(ctx: &Context, cfg: &RunConfig, name: &str) -> Result<CheckReport> {
    match name {
        "biorthogonality" => check_biorthogonality(ctx, cfg),
        "quasibasis" => check_quasibasis(ctx, cfg),
        "eigen_relations" => check_eigen(ctx, cfg),
        "adjoint_duality" => check_duality(ctx, cfg),
        "spectrum_invariance" => check_spectrum(ctx, cfg),
        "factorization" => {
            let f = check_factorization_example3(&ctx.basis, ctx.n, &ctx.rule)?;
            let worst = f.phi_discrepancy.max(f.psi_discrepancy);
            Ok(scalar_report(ctx, cfg, "factorization", 1e-6, worst))
        }
        "vacuum" => {
            let f = check_factorization_example3(&ctx.basis, ctx.n, &ctx.rule)?;
            Ok(scalar_report(ctx, cfg, "vacuum", 1e-7, f.vacuum_ratio))
        }
        "ladder_duality" => {
            let f = check_factorization_example3(&ctx.basis, ctx.n, &ctx.rule)?;
            let worst = f.duality_b_phi.max(f.duality_a_phi);
            Ok(scalar_report(ctx, cfg, "ladder_duality", 1e-8, worst))
        }
        "potentials" => {
            let p = example3_potentials_check(&ctx.basis, ctx.n, &ctx.rule)?;
            let worst = p.phi_discrepancy.max(p.psi_discrepancy);
            Ok(scalar_report(ctx, cfg, "potentials", 1e-6, worst))
        }
        "polar_unitarity" => {
            let pp = polar_pair(ctx)?;
            let u = &pp.polar.u;
            let dev = linalg::max_abs(
                u.adjoint()
                    .compose(u)?
                    .sub(&TruncatedOperator::identity(&ctx.basis, ctx.n))?
                    .entries(),
            );
            Ok(scalar_report(ctx, cfg, "polar_unitarity", 1e-12 * ctx.n as f64, dev))
        }
        "polar_family" => {
            let pp = polar_pair(ctx)?;
            Ok(scalar_report(ctx, cfg, "polar_family", 1e-9 * ctx.cond, pp.max_residual))
        }
        "polar_cross" => {
            let pp = polar_pair(ctx)?;
            let dev = cross_constructing_check(&ctx.sys, &pp.polar, Side::Phi, DEFAULT_COND_GUARD)?;
            Ok(scalar_report(ctx, cfg, "polar_cross", 1e-9 * ctx.cond * ctx.cond, dev))
        }
        _ => Err(Error::Config(format!("unknown check `{name}`"))),
    }
}

/// Run a named suite for every N in the config. Factorization checks are
/// defined only for the (1 + x^2) model and are skipped for others.
pub fn run_suite(cfg: &RunConfig, suite: SuiteName) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let mut reports = Vec::new();
    for n in cfg.n.values() {
        let ctx = build_context(cfg, n)?;
        for name in suite.checks(ctx.is_example3) {
            reports.push(run_check(&ctx, cfg, name)?);
        }
    }
    Ok(reports)
}

/// Convergence study: one named check swept over the configured N values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergeResult {
    pub check_name: String,
    pub model: String,
    /// (N, max residual) rows in ascending N order.
    pub rows: Vec<(usize, f64)>,
    /// Fitted decay order: least-squares slope of log residual vs log N.
    pub slope: f64,
    /// All residuals at the rounding floor; the slope is then meaningless.
    pub machine_precision: bool,
}

pub const MACHINE_FLOOR: f64 = 1e-12;

impl ConvergeResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,residual\n");
        for (n, r) in &self.rows {
            out.push_str(&format!("{n},{r:e}\n"));
        }
        out
    }
}

pub fn converge(cfg: &RunConfig, check_name: &str) -> Result<ConvergeResult> {
    cfg.validate()?;
    let ns = cfg.n.values();
    if ns.len() < 3 {
        return Err(Error::Config(format!(
            "convergence study needs at least 3 N values, got {}",
            ns.len()
        )));
    }
    let mut rows = Vec::with_capacity(ns.len());
    let mut model = cfg.model_label();
    for &n in &ns {
        let ctx = build_context(cfg, n)?;
        model = ctx.model.clone();
        let report = run_check(&ctx, cfg, check_name)?;
        rows.push((n, report.max_residual));
    }
    rows.sort_by_key(|r| r.0);
    let machine_precision = rows.iter().all(|&(_, r)| r < MACHINE_FLOOR);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|&(n, r)| ((n as f64).ln(), r.max(f64::MIN_POSITIVE).ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    let slope = if denom.abs() < 1e-30 { 0.0 } else { (m * sxy - sx * sy) / denom };
    Ok(ConvergeResult { check_name: check_name.to_string(), model, rows, slope, machine_precision })
}

/// Matrix export: the matrix JSON format plus provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DumpFile {
    pub dim: usize,
    pub basis: String,
    pub entries: Vec<[f64; 2]>,
    pub provenance: Provenance,
}

fn to_entries(m: &Array2<Complex64>) -> Vec<[f64; 2]> {
    m.iter().map(|z| [z.re, z.im]).collect()
}

pub fn dump(cfg: &RunConfig, what: &str) -> Result<DumpFile> {
    cfg.validate()?;
    let n = cfg.n.values()[0];
    let ctx = build_context(cfg, n)?;
    let (basis, matrix): (String, Array2<Complex64>) = match what {
        "phi" => (ctx.basis.clone(), ctx.sys.phi().clone()),
        "psi" => (ctx.basis.clone(), ctx.sys.psi().clone()),
        "T" => (ctx.basis.clone(), ctx.pair.t().entries().clone()),
        "gram" => (ctx.basis.clone(), biorthogonality_gram(&ctx.sys).gram),
        "polar_U" => {
            let pp = polar_pair(&ctx)?;
            (ctx.basis.clone(), pp.polar.u.entries().clone())
        }
        "polar_Pos" => {
            let pp = polar_pair(&ctx)?;
            (ctx.basis.clone(), pp.polar.pos.entries().clone())
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown dump target `{what}`; expected phi, psi, T, polar_U, polar_Pos or gram"
            )))
        }
    };
    Ok(DumpFile { dim: n, basis, entries: to_entries(&matrix), provenance: ctx.provenance })
}

/// Grid samples of closed-form family functions for the comparison tests.
pub fn closed_form_available(model: &str) -> bool {
    models::phi_closed_form(model, 0, 0.0).is_ok()
}
