//! Run configuration: a flat, versioned, human-writable TOML format.
//!
//! The header key `spec = "opexpr-v1"` versions both the config layout and
//! the operator-expression grammar used inside it. A config round-trips
//! through serialize then parse, and its canonical serialization is hashed
//! into every report for provenance.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lower::InverseMode;

pub const SPEC_VERSION: &str = "opexpr-v1";
pub const MAX_TRUNCATION: usize = 512;

/// A single int in the file or a list; normalized to a list in memory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntOrList {
    One(usize),
    Many(Vec<usize>),
}

impl IntOrList {
    pub fn values(&self) -> Vec<usize> {
        match self {
            IntOrList::One(n) => vec![*n],
            IntOrList::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadratureOrder {
    Fixed(usize),
    Keyword(String), // only "auto"
}

impl Default for QuadratureOrder {
    fn default() -> Self {
        QuadratureOrder::Keyword("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSection {
    /// Built-in model name; mutually exclusive with t_expr.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Constructing operator as an opexpr string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_expr: Option<String>,
    /// Named alpha sequence used by diag(...) and ladder checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default = "default_format")]
    pub format: String, // json | csv
}

fn default_format() -> String {
    "json".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { path: None, format: default_format() }
    }
}

fn default_n() -> IntOrList {
    IntOrList::One(32)
}

fn default_inverse_mode() -> String {
    "matrix".into()
}

fn default_profiles() -> Vec<String> {
    vec!["basis_0".into(), "geometric(0.5)".into(), "gaussian(4.0)".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spec: String,
    pub model: ModelSection,
    #[serde(rename = "N", default = "default_n")]
    pub n: IntOrList,
    /// Per-check absolute tolerance overrides; checks without an entry use
    /// their built-in (possibly condition-scaled) defaults.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub quadrature_order: QuadratureOrder,
    #[serde(default = "default_profiles")]
    pub test_vectors: Vec<String>,
    #[serde(default = "default_inverse_mode")]
    pub inverse_mode: String, // matrix | kernel
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn for_model(name: &str) -> Self {
        Self {
            spec: SPEC_VERSION.into(),
            model: ModelSection { name: Some(name.into()), t_expr: None, alpha: None },
            n: default_n(),
            tolerances: BTreeMap::new(),
            quadrature_order: QuadratureOrder::default(),
            test_vectors: default_profiles(),
            inverse_mode: default_inverse_mode(),
            output: OutputSection::default(),
            seed: 0,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.spec != SPEC_VERSION {
            return Err(Error::Config(format!(
                "unsupported spec version `{}`, expected `{SPEC_VERSION}`",
                self.spec
            )));
        }
        let ns = self.n.values();
        if ns.is_empty() {
            return Err(Error::Config("at least one N value required".into()));
        }
        for &n in &ns {
            if n == 0 || n > MAX_TRUNCATION {
                return Err(Error::Config(format!(
                    "N = {n} out of range 1..={MAX_TRUNCATION}"
                )));
            }
        }
        match (&self.model.name, &self.model.t_expr) {
            (None, None) => {
                return Err(Error::Config("model needs `name` or `t_expr`".into()))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config("model `name` and `t_expr` are mutually exclusive".into()))
            }
            _ => {}
        }
        for (k, &v) in &self.tolerances {
            if !(v > 0.0) {
                return Err(Error::Config(format!("tolerance `{k}` must be > 0, got {v}")));
            }
        }
        if let QuadratureOrder::Keyword(w) = &self.quadrature_order {
            if w != "auto" {
                return Err(Error::Config(format!(
                    "quadrature_order must be an integer or \"auto\", got `{w}`"
                )));
            }
        }
        if !matches!(self.inverse_mode.as_str(), "matrix" | "kernel") {
            return Err(Error::Config(format!(
                "inverse_mode must be `matrix` or `kernel`, got `{}`",
                self.inverse_mode
            )));
        }
        if !matches!(self.output.format.as_str(), "json" | "csv") {
            return Err(Error::Config(format!(
                "output format must be `json` or `csv`, got `{}`",
                self.output.format
            )));
        }
        for p in &self.test_vectors {
            VectorProfile::parse(p)?;
        }
        Ok(())
    }

    pub fn parsed_inverse_mode(&self) -> InverseMode {
        if self.inverse_mode == "kernel" {
            InverseMode::Kernel
        } else {
            InverseMode::Matrix
        }
    }

    pub fn model_label(&self) -> String {
        self.model
            .name
            .clone()
            .or_else(|| self.model.t_expr.clone())
            .unwrap_or_else(|| "custom".into())
    }

    pub fn profiles(&self) -> Result<Vec<VectorProfile>> {
        self.test_vectors.iter().map(|p| VectorProfile::parse(p)).collect()
    }

    /// Quadrature order for a given truncation size; "auto" follows the
    /// library default.
    pub fn rule_order(&self, n: usize) -> usize {
        match &self.quadrature_order {
            QuadratureOrder::Fixed(k) => *k,
            QuadratureOrder::Keyword(_) => crate::hermite::default_rule_order(n),
        }
    }

    /// Deterministic serialization used for hashing and round-trip tests.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hash of everything that affects the computed numbers. The output
    /// section (where results land) is excluded, so runs writing to different
    /// paths stay byte-comparable.
    pub fn config_hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.output = OutputSection::default();
        let mut h = Sha256::new();
        h.update(hashed.canonical_toml().as_bytes());
        hex_digest(&h.finalize())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Coefficient profiles standing in for the dense test subspaces: residual
/// behavior on these under refinement is the measurable surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorProfile {
    /// Exact basis vector e_k.
    Basis(usize),
    /// Envelope r^k, 0 < r < 1.
    Geometric(f64),
    /// Envelope exp(-(k/width)^2), width > 0.
    Gaussian(f64),
}

impl VectorProfile {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("test vector profile `{s}`: {msg}"));
        if let Some(rest) = s.strip_prefix("basis_") {
            let k: usize = rest.parse().map_err(|_| bad("expected basis_<k>"))?;
            return Ok(VectorProfile::Basis(k));
        }
        let arg = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
        };
        if let Some(a) = arg("geometric") {
            let r: f64 = a.trim().parse().map_err(|_| bad("bad ratio"))?;
            if !(r > 0.0 && r < 1.0) {
                return Err(bad("ratio must lie in (0, 1)"));
            }
            return Ok(VectorProfile::Geometric(r));
        }
        if let Some(a) = arg("gaussian") {
            let w: f64 = a.trim().parse().map_err(|_| bad("bad width"))?;
            if !(w > 0.0) {
                return Err(bad("width must be > 0"));
            }
            return Ok(VectorProfile::Gaussian(w));
        }
        Err(bad("expected basis_<k>, geometric(r) or gaussian(width)"))
    }

    /// Coefficients of a length-n test vector. Basis profiles are exact;
    /// decaying profiles get seeded random phases under their envelope so a
    /// batch probes many directions while staying reproducible.
    pub fn coefficients<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<Complex64> {
        match self {
            VectorProfile::Basis(k) => {
                let mut v = vec![Complex64::new(0.0, 0.0); n];
                if *k < n {
                    v[*k] = Complex64::new(1.0, 0.0);
                }
                v
            }
            VectorProfile::Geometric(r) => (0..n)
                .map(|k| random_phase(rng) * r.powi(k as i32))
                .collect(),
            VectorProfile::Gaussian(w) => (0..n)
                .map(|k| {
                    let t = k as f64 / w;
                    random_phase(rng) * (-t * t).exp()
                })
                .collect(),
        }
    }
}

fn random_phase<R: Rng>(rng: &mut R) -> Complex64 {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::new(theta.cos(), theta.sin())
}
