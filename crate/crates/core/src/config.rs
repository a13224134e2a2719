//! Run configuration shared by the command-line front end and config files.
//!
//! Every field is optional so that flags, a TOML file and the built-in
//! defaults can be layered: flags override the file, the file overrides the
//! defaults. The effective configuration is echoed into each report.

use crate::error::{invalid, Result};
use crate::{delsarte, turan};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Turan,
    Delsarte,
    Wiener,
    Verify,
    DemoRealline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hlawka,
    Realline,
    Parseval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Cube,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<ShapeKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Turán grid `M`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    /// Turán frequency bound `N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq_bound: Option<usize>,
    /// Delsarte basis size `K`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_size: Option<usize>,
    /// Delsarte sample grid `G`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delsarte_grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

macro_rules! overlay_fields {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        RunConfig { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl RunConfig {
    /// Fields set in `self` win; the rest come from `lower`.
    pub fn overlay(self, lower: RunConfig) -> RunConfig {
        overlay_fields!(
            self, lower, command, suite, domain, dim, delta, radius, radii, q, p, epsilon, grid_size, freq_bound,
            basis_size, delsarte_grid, samples, cells, seed, output, format
        )
    }

    /// Built-in defaults for `command` (and `suite` for `verify`).
    pub fn defaults(command: CommandKind, suite: Option<Suite>) -> RunConfig {
        let mut c = RunConfig { command: Some(command), format: Some(Format::Json), seed: Some(7), ..Default::default() };
        match command {
            CommandKind::Turan => {
                c.dim = Some(1);
                c.grid_size = Some(turan::DEFAULT_GRID);
            }
            CommandKind::Delsarte => {
                c.radius = Some(delsarte::REFERENCE_RADIUS);
                c.basis_size = Some(delsarte::DEFAULT_BASIS);
                c.delsarte_grid = Some(delsarte::DEFAULT_GRID);
            }
            CommandKind::Wiener => {
                c.domain = Some(ShapeKind::Cube);
                c.dim = Some(1);
                c.p = Some(2);
                c.grid_size = Some(turan::DEFAULT_GRID);
                c.basis_size = Some(delsarte::DEFAULT_BASIS);
                c.delsarte_grid = Some(delsarte::DEFAULT_GRID);
            }
            CommandKind::Verify => {
                c.suite = suite;
                c.dim = Some(1);
                c.domain = Some(ShapeKind::Cube);
                match suite {
                    Some(Suite::Hlawka) => {
                        c.samples = Some(10_000);
                        c.delta = Some(0.25);
                    }
                    Some(Suite::Realline) => {
                        c.samples = Some(50);
                        c.cells = Some(20);
                    }
                    Some(Suite::Parseval) | None => c.samples = Some(100),
                }
            }
            CommandKind::DemoRealline => {
                c.dim = Some(1);
                c.radii = Some(vec![1.0, 10.0, 100.0]);
            }
        }
        c
    }

    pub fn from_toml(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| invalid(format!("config file: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| invalid(format!("config serialization: {e}")))
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks the fields whose ranges do not depend on the invoked solver.
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.p {
            if p < 2 || p % 2 != 0 {
                return Err(invalid(format!("p must be an even integer >= 2, got {p}")));
            }
        }
        if self.dim == Some(0) {
            return Err(invalid("dim must be positive"));
        }
        for (name, v) in [("grid", self.grid_size), ("freq", self.freq_bound), ("basis", self.basis_size), ("samples", self.samples)] {
            if v == Some(0) {
                return Err(invalid(format!("{name} must be positive")));
            }
        }
        if let Some(r) = &self.radii {
            if r.is_empty() || r.iter().any(|x| x.is_nan() || *x <= 0.0) {
                return Err(invalid("radii must be a nonempty list of positive numbers"));
            }
        }
        Ok(())
    }
}
