//! Command-line surface: run check suites, drive convergence studies, dump
//! matrices and validate operator expressions.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 config or
//! expression parse error, 3 numeric/singularity error (reports gathered so
//! far are still written).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use rieszkit::config::{IntOrList, RunConfig};
use rieszkit::report::{to_csv, CheckReport};
use rieszkit::suite::{self, SuiteName};
use rieszkit::Error;

#[derive(Parser)]
#[command(name = "rieszkit", version, about = "Numerical toolkit for generalized Riesz systems in a truncated Hermite basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Built-in model name (example1, example2, example3); also accepted as a
    /// positional argument.
    #[arg(long)]
    model: Option<String>,
    /// Constructing operator as an expression, e.g. "mul(1+x^2)".
    #[arg(long)]
    expr: Option<String>,
    /// Config file (opexpr-v1 TOML); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Truncation size(s), comma separated, e.g. -N 32,64,128.
    #[arg(short = 'N', long = "N", value_name = "N", allow_hyphen_values = false)]
    n: Option<String>,
    /// Output file for reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Seed for randomized test vectors.
    #[arg(long)]
    seed: Option<u64>,
    /// Realization of inv(...) nodes: matrix or kernel.
    #[arg(long = "inverse-mode")]
    inverse_mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named check suite and write one report per check per N.
    Run {
        /// Model name (same as --model).
        model_pos: Option<String>,
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep one check across at least three N values and fit a decay order.
    Converge {
        model_pos: Option<String>,
        /// Check to sweep, e.g. biorthogonality, eigen_relations, potentials.
        #[arg(long)]
        check: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Export a matrix (phi, psi, T, polar_U, polar_Pos, gram) as JSON.
    Dump {
        model_pos: Option<String>,
        #[arg(long)]
        what: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Validate an operator expression and print its canonical form.
    ParseCheck {
        expr: String,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::Parse { .. }
        | Error::UnknownModel(_)
        | Error::UnknownSequence(_) => 2,
        Error::Singular { .. } | Error::NonFinite { .. } => 3,
        _ => 3,
    }
}

fn build_config(model_pos: Option<String>, common: &CommonOpts) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::for_model("example1"),
    };
    let model = common.model.clone().or(model_pos);
    if let Some(m) = model {
        cfg.model.name = Some(m);
        cfg.model.t_expr = None;
    }
    if let Some(e) = &common.expr {
        cfg.model.t_expr = Some(e.clone());
        cfg.model.name = None;
    }
    if let Some(spec) = &common.n {
        let ns: Result<Vec<usize>, _> = spec.split(',').map(|s| s.trim().parse()).collect();
        let ns = ns.map_err(|_| Error::Config(format!("bad -N value `{spec}`")))?;
        cfg.n = IntOrList::Many(ns);
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(m) = &common.inverse_mode {
        cfg.inverse_mode = m.clone();
    }
    if let Some(f) = &common.format {
        cfg.output.format = f.clone();
    }
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Timestamps live here, never in the reports, so identical configs produce
/// byte-identical report files.
fn write_sidecar(path: &str) -> std::io::Result<()> {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    fs::write(
        format!("{path}.meta.json"),
        format!("{{\n  \"timestamp_unix\": {ts}\n}}\n"),
    )
}

fn write_reports(cfg: &RunConfig, reports: &[CheckReport]) -> Result<(), Error> {
    let Some(path) = &cfg.output.path else { return Ok(()) };
    let body = if cfg.output.format == "csv" {
        to_csv(reports)
    } else {
        let mut s = serde_json::to_string_pretty(reports)?;
        s.push('\n');
        s
    };
    fs::write(path, body)?;
    write_sidecar(path)?;
    Ok(())
}

fn print_summary(reports: &[CheckReport]) {
    println!(
        "{:<22} {:<12} {:>5}  {:>12}  {:>12}  result",
        "check", "model", "N", "residual", "tolerance"
    );
    for r in reports {
        println!(
            "{:<22} {:<12} {:>5}  {:>12.3e}  {:>12.3e}  {}",
            r.check_name,
            r.model,
            r.n,
            r.max_residual,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
        if !r.pass && !r.per_mode.is_empty() {
            for m in r.worst_modes(5) {
                println!("    worst mode {:>4}: {:.3e}", m.mode, m.residual);
            }
        }
    }
}

fn cmd_run(model_pos: Option<String>, suite_name: &str, common: &CommonOpts) -> u8 {
    let cfg = match build_config(model_pos, common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let suite = match SuiteName::parse(suite_name) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match suite::run_suite(&cfg, suite) {
        Ok(reports) => {
            print_summary(&reports);
            if let Err(e) = write_reports(&cfg, &reports) {
                eprintln!("error writing reports: {e}");
                return 3;
            }
            if reports.iter().all(|r| r.pass) {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_converge(model_pos: Option<String>, check: &str, common: &CommonOpts) -> u8 {
    let cfg = match build_config(model_pos, common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    match suite::converge(&cfg, check) {
        Ok(res) => {
            let csv = res.to_csv();
            print!("{csv}");
            if res.machine_precision {
                println!("# converged at machine precision (slope not meaningful)");
            } else {
                println!("# fitted decay order: slope = {:.3}", res.slope);
            }
            if let Some(path) = &cfg.output.path {
                if let Err(e) = fs::write(path, &csv).and_then(|_| write_sidecar(path)) {
                    eprintln!("error writing output: {e}");
                    return 3;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_dump(model_pos: Option<String>, what: &str, common: &CommonOpts) -> u8 {
    let cfg = match build_config(model_pos, common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    match suite::dump(&cfg, what) {
        Ok(d) => {
            let mut json = serde_json::to_string_pretty(&d).expect("dump serializes");
            json.push('\n');
            match &cfg.output.path {
                Some(path) => {
                    if let Err(e) = fs::write(path, &json).and_then(|_| write_sidecar(path)) {
                        eprintln!("error writing output: {e}");
                        return 3;
                    }
                }
                None => print!("{json}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_parse_check(src: &str) -> u8 {
    match rieszkit::expr::parse(src) {
        Ok(ast) => {
            println!("ok: {ast}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run { model_pos, suite, common } => cmd_run(model_pos.clone(), suite, common),
        Command::Converge { model_pos, check, common } => {
            cmd_converge(model_pos.clone(), check, common)
        }
        Command::Dump { model_pos, what, common } => cmd_dump(model_pos.clone(), what, common),
        Command::ParseCheck { expr } => cmd_parse_check(expr),
    };
    ExitCode::from(code)
}
