//! Structured results of verification runs.
//!
//! Reports serialize with a fixed field order so that identical inputs
//! produce byte-identical JSON. Anything time-dependent lives in a sidecar
//! file, never in the report itself.

use serde::{Deserialize, Serialize};

/// What produced the numbers: hash of the canonical config text plus the seed
/// used for randomized test vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerModeEntry {
    pub mode: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub model: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub per_mode: Vec<PerModeEntry>,
    pub pass: bool,
    pub provenance: Provenance,
}

impl CheckReport {
    pub fn new(
        check_name: &str,
        model: &str,
        n: usize,
        tolerance: f64,
        max_residual: f64,
        per_mode: Vec<PerModeEntry>,
        provenance: Provenance,
    ) -> Self {
        Self {
            check_name: check_name.to_string(),
            model: model.to_string(),
            n,
            tolerance,
            max_residual,
            per_mode,
            pass: max_residual.is_finite() && max_residual <= tolerance,
            provenance,
        }
    }

    /// Worst offenders, largest residual first (for the human summary).
    pub fn worst_modes(&self, count: usize) -> Vec<PerModeEntry> {
        let mut sorted = self.per_mode.clone();
        sorted.sort_by(|a, b| b.residual.partial_cmp(&a.residual).unwrap_or(std::cmp::Ordering::Equal));
        sorted.truncate(count);
        sorted
    }

    /// Stable CSV row: check_name, model, N, residual, tolerance, pass.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{:e},{}",
            self.check_name, self.model, self.n, self.max_residual, self.tolerance, self.pass
        )
    }
}

pub const CSV_HEADER: &str = "check_name,model,N,residual,tolerance,pass";

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    for r in reports {
        out.push('\n');
        out.push_str(&r.csv_row());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        CheckReport::new(
            "biorthogonality",
            "example1",
            16,
            1e-9,
            2.5e-13,
            vec![
                PerModeEntry { mode: 0, residual: 1e-14 },
                PerModeEntry { mode: 1, residual: 2.5e-13 },
                PerModeEntry { mode: 2, residual: 5e-14 },
            ],
            Provenance { config_hash: "abc123".into(), seed: 7 },
        )
    }

    #[test]
    fn pass_logic() {
        let r = sample();
        assert!(r.pass);
        let fail = CheckReport::new("x", "m", 4, 1e-12, 1e-6, vec![], r.provenance.clone());
        assert!(!fail.pass);
        let nan = CheckReport::new("x", "m", 4, 1e-12, f64::NAN, vec![], r.provenance);
        assert!(!nan.pass);
    }

    #[test]
    fn json_round_trip_and_field_order() {
        let r = sample();
        let json = serde_json::to_string_pretty(&r).unwrap();
        // field order is declaration order, stable across runs
        let keys: Vec<usize> = ["check_name", "model", "\"N\"", "tolerance", "max_residual", "per_mode", "pass", "provenance"]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "field order changed: {json}");
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn deterministic_serialization() {
        let a = serde_json::to_string_pretty(&sample()).unwrap();
        let b = serde_json::to_string_pretty(&sample()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worst_modes_sorted() {
        let w = sample().worst_modes(2);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].mode, 1);
        assert_eq!(w[1].mode, 2);
    }

    #[test]
    fn csv_shape() {
        let csv = to_csv(&[sample()]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row = lines.next().unwrap();
        assert!(row.starts_with("biorthogonality,example1,16,"));
        assert!(row.ends_with(",true"));
    }
}
