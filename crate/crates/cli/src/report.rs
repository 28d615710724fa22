//! JSON report and CSV curve output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use flagtype::flagtype::FlagTypeReport;
use flagtype::rootdata::ThetaSet;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

pub const TOOL: &str = "flagtype";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub theta_hat: Option<ThetaSet>,
    pub result: Option<FlagTypeReport>,
    pub error: Option<String>,
}

impl ReportFile {
    pub fn new(config: &RunConfig, result: Result<FlagTypeReport, String>) -> Self {
        let (result, error) = match result {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e)),
        };
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            config: config.clone(),
            theta_hat: result.as_ref().map(|r| r.theta_hat.clone()),
            result,
            error,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `root_index,L,min_log_rho` rows.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("root_index,L,min_log_rho\n");
        for root in self.result.iter().flat_map(|r| &r.roots) {
            if let Some(curve) = &root.curve {
                for (l, v) in curve.lengths.iter().zip(&curve.min_log_rho) {
                    writeln!(out, "{},{},{:.16e}", root.root_index, l, v).unwrap();
                }
            }
        }
        out
    }

    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf), CliError> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{stem}.json"));
        let csv = dir.join(format!("{stem}.csv"));
        std::fs::write(&json, self.to_json())?;
        std::fs::write(&csv, self.curves_csv())?;
        Ok((json, csv))
    }
}
