//! JSON run configuration. Command-line flags override values read here.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cdwtunnel::potential::PotentialParams;
use cdwtunnel::transport::{SgeConvention, TransportParams};
use cdwtunnel::verify::logspace;
use cdwtunnel::wavefunctional::linspace;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.n < 2 {
            return Err(CliError::Config(format!(
                "grid needs n >= 2, got {}",
                self.n
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(CliError::Config(format!(
                "grid needs finite lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.spacing == Spacing::Log && self.lo <= 0.0 {
            return Err(CliError::Config(format!(
                "log grid needs lo > 0, got {}",
                self.lo
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.lo, self.hi, self.n),
            Spacing::Log => logspace(self.lo, self.hi, self.n),
        }
    }
}

/// A grid with any subset of fields given.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialGrid {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub n: Option<usize>,
    pub spacing: Option<Spacing>,
}

impl PartialGrid {
    /// Fields of `over` win over fields of `self`.
    pub fn overlay(self, over: PartialGrid) -> PartialGrid {
        PartialGrid {
            lo: over.lo.or(self.lo),
            hi: over.hi.or(self.hi),
            n: over.n.or(self.n),
            spacing: over.spacing.or(self.spacing),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_none() && self.hi.is_none() && self.n.is_none() && self.spacing.is_none()
    }

    pub fn resolve(self, default: GridSpec) -> CliResult<GridSpec> {
        let g = GridSpec {
            lo: self.lo.unwrap_or(default.lo),
            hi: self.hi.unwrap_or(default.hi),
            n: self.n.unwrap_or(default.n),
            spacing: self.spacing.unwrap_or(default.spacing),
        };
        g.validate()?;
        Ok(g)
    }
}

/// 200 log-spaced points on `[1.05 E_T, 10 E_T]`.
pub fn default_field_grid(tp: &TransportParams) -> GridSpec {
    GridSpec {
        lo: 1.05 * tp.e_t,
        hi: 10.0 * tp.e_t,
        n: 200,
        spacing: Spacing::Log,
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub transport: TransportParams,
    pub potential: PotentialParams,
    pub grid: PartialGrid,
    pub k_grid: PartialGrid,
    pub output: Option<PathBuf>,
    pub k_output: Option<PathBuf>,
    pub format: Option<Format>,
    pub model: Option<String>,
    pub convention: Option<SgeConvention>,
    pub kink: KinkConfig,
    pub fit: FitConfig,
    pub matrix: MatrixConfig,
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KinkConfig {
    pub l: Option<f64>,
    pub b: Option<f64>,
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub data: Option<PathBuf>,
    pub target: Option<String>,
    pub free: Option<Vec<String>>,
    pub start_c_tilde1: Option<f64>,
    pub start_c_v: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixConfig {
    pub axis: Option<String>,
    pub separation: Option<f64>,
    pub n1: Option<f64>,
    pub m_star: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub only: Vec<String>,
    pub tol: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}
