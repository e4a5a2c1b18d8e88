//! Machine-readable run report: every invariant check with its measured
//! value, plus the artifact paths written. Reports are deterministic for a
//! given config and input (no timestamps or machine data).

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub pipeline: String,
    pub checks: Vec<ReportCheck>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(pipeline: &str) -> Self {
        Self {
            pipeline: pipeline.to_string(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(ReportCheck {
            name: name.to_string(),
            passed: value.is_finite() && value <= threshold,
            value,
            threshold,
        });
    }

    /// Record an artifact by its name inside the output directory, keeping
    /// reports byte-identical across runs from different working trees.
    pub fn note_artifact(&mut self, path: &Path) {
        let name = path.file_name().map(PathBuf::from).unwrap_or_default();
        self.artifacts.push(name);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn print_summary(&self) {
        for c in &self.checks {
            let tag = if c.passed { "ok " } else { "FAIL" };
            println!(
                "[{tag}] {}: {:.3e} (threshold {:.3e})",
                c.name, c.value, c.threshold
            );
        }
    }
}
