//! Run configuration, stored as TOML.
//!
//! ```toml
//! seed = 7
//! n = 2
//!
//! [semigroup]
//! kind = "cone"
//! rays = [[1.0, 1.0], [1.0, -1.0]]
//!
//! [sampling]
//! samples_per_length = 8
//!
//! [thresholds]
//! slope_fraction = 0.01
//!
//! [output]
//! dir = "reports"
//! ```
//!
//! A finitely generated semigroup uses `kind = "generators"`, an `epsilon`
//! and `generators = [[[row], [row], ...], ...]` (row-major matrices).

use std::path::{Path, PathBuf};

use flagtype::flagtype::Thresholds;
use flagtype::matgroup::{GroupElement, MatrixRows};
use flagtype::semigroup::{SamplingParams, SemigroupSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SemigroupConfig {
    Cone {
        rays: Vec<Vec<f64>>,
    },
    Generators {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        generators: Vec<Vec<Vec<f64>>>,
    },
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for the JSON report and the CSV curves.
    pub dir: Option<PathBuf>,
    /// File stem; defaults to the config file stem.
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub n: usize,
    pub semigroup: SemigroupConfig,
    #[serde(default)]
    pub sampling: SamplingParams,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Checks everything and builds the semigroup.
    pub fn spec(&self) -> Result<SemigroupSpec, CliError> {
        let invalid = |field: &str, msg: String| CliError::Validation(format!("{field}: {msg}"));
        if self.n < 2 {
            return Err(invalid("n", format!("must be at least 2, got {}", self.n)));
        }
        self.sampling
            .validate()
            .map_err(|e| invalid("sampling", e.to_string()))?;
        self.thresholds
            .validate()
            .map_err(|e| invalid("thresholds", e.to_string()))?;
        match &self.semigroup {
            SemigroupConfig::Cone { rays } => {
                if let Some((j, r)) = rays.iter().enumerate().find(|(_, r)| r.len() != self.n) {
                    return Err(invalid(
                        &format!("semigroup.rays[{j}]"),
                        format!("expected {} entries, got {}", self.n, r.len()),
                    ));
                }
                SemigroupSpec::cone_compression(rays)
                    .map_err(|e| invalid("semigroup.rays", e.to_string()))
            }
            SemigroupConfig::Generators {
                epsilon,
                generators,
            } => {
                let gens = generators
                    .iter()
                    .enumerate()
                    .map(|(j, rows)| {
                        let field = format!("semigroup.generators[{j}]");
                        if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                            return Err(invalid(
                                &field,
                                format!("expected a {0}x{0} matrix", self.n),
                            ));
                        }
                        GroupElement::try_from(MatrixRows(rows.clone()))
                            .map_err(|e| invalid(&field, e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SemigroupSpec::finitely_generated(gens, *epsilon)
                    .map_err(|e| invalid("semigroup", e.to_string()))
            }
        }
    }
}
