use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use branchlab::Tolerances;

pub const CONFIG_NAME: &str = ".branchlab.toml";

/// Tolerance flags; each one overrides the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct TolFlags {
    /// Tolerance file (default: `.branchlab.toml` next to the scenario, if present)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Normalization tolerance
    #[arg(long, global = true, value_name = "F")]
    pub eps_norm: Option<f64>,
    /// Probabilities at or below this are zero
    #[arg(long, global = true, value_name = "F")]
    pub eps_zero: Option<f64>,
    /// Probabilities this close share a grade
    #[arg(long, global = true, value_name = "F")]
    pub eps_grade: Option<f64>,
    /// Largest probability set the algebra checks accept
    #[arg(long, global = true, value_name = "N")]
    pub algebra_cap: Option<usize>,
}

impl TolFlags {
    pub fn resolve(&self, scenario: &Path) -> Result<Tolerances> {
        let implicit = scenario
            .parent()
            .map(|d| d.join(CONFIG_NAME))
            .filter(|p| p.is_file());
        let mut tol = match self.config.clone().or(implicit) {
            Some(p) => {
                let text = fs::read_to_string(&p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                toml::from_str::<Tolerances>(&text)
                    .with_context(|| format!("invalid config {}", p.display()))?
            }
            None => Tolerances::DEFAULT,
        };
        if let Some(v) = self.eps_norm {
            tol.eps_norm = v;
        }
        if let Some(v) = self.eps_zero {
            tol.eps_zero = v;
        }
        if let Some(v) = self.eps_grade {
            tol.eps_grade = v;
        }
        if let Some(v) = self.algebra_cap {
            tol.algebra_cap = v;
        }
        for (name, v) in [
            ("eps_norm", tol.eps_norm),
            ("eps_zero", tol.eps_zero),
            ("eps_grade", tol.eps_grade),
        ] {
            anyhow::ensure!(
                v.is_finite() && v >= 0.0,
                "{name} must be a non-negative number, got {v}"
            );
        }
        Ok(tol)
    }
}
