use std::path::{Path, PathBuf};

use flagtype::flagtype::{estimate_flag_type, FlagTypeReport};
use flagtype::matgroup::{iwasawa_decompose, GroupElement};
use nalgebra::DMatrix;

use crate::config::RunConfig;
use crate::report::ReportFile;
use crate::sl2_example::Sl2Example;
use crate::{exit, CliError};

pub const THREADS_ENV: &str = "FLAGTYPE_THREADS";
pub const DEFAULT_OUT_DIR: &str = "flagtype-out";

/// Runs `f` on a pool sized by `FLAGTYPE_THREADS` (rayon's default if unset).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| {
                CliError::Parse(format!(
                    "{THREADS_ENV} must be a positive integer, got {v:?}"
                ))
            })?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok(pool.install(f))
}

/// Whitespace- or comma-separated rows; blank lines and `#` comments are
/// skipped.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    CliError::Parse(format!(
                        "line {}: cannot parse {t:?} as a number",
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(CliError::Parse("no matrix rows found".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::Parse(format!(
            "matrix is not square: {n} rows but row {} has {} entries",
            i + 1,
            r.len()
        )));
    }
    Ok(DMatrix::from_row_iterator(n, n, rows.into_iter().flatten()))
}

fn format_matrix(m: &DMatrix<f64>) -> String {
    m.row_iter()
        .map(|r| {
            r.iter()
                .map(|v| format!("{:>24.16e}", v + 0.0))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub text: String,
    pub h: Vec<f64>,
    pub residual: f64,
}

pub fn decompose(text: &str) -> Result<Decomposition, CliError> {
    let m = parse_matrix(text)?;
    let g = GroupElement::new(m)?;
    let f = iwasawa_decompose(&g)?;
    let residual = (g.matrix() - f.reconstruct()).norm() / g.matrix().norm();
    let h: Vec<String> = f.h.iter().map(|v| format!("{v:.16e}")).collect();
    let text = format!(
        "k =\n{}\nH = [{}]\nn_u =\n{}\nreconstruction residual = {residual:.3e}\n",
        format_matrix(&f.k),
        h.join(", "),
        format_matrix(&f.n_u),
    );
    Ok(Decomposition {
        text,
        h: f.h,
        residual,
    })
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub samples: Option<usize>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: ReportFile,
    pub json: PathBuf,
    pub csv: PathBuf,
    pub exit_code: i32,
}

impl RunOutcome {
    pub fn summary(&self) -> String {
        let Some(r) = &self.report.result else {
            return format!(
                "estimation failed: {}\n",
                self.report.error.as_deref().unwrap_or("unknown error")
            );
        };
        summary(r)
    }
}

fn summary(r: &FlagTypeReport) -> String {
    let mut s = format!("theta_hat = {}\n", r.theta_hat);
    for root in &r.roots {
        s += &format!("  alpha_{}: {:?}", root.root_index, root.decision);
        if let (Some(slope), Some(m)) = (root.slope, root.final_min) {
            s += &format!(" (slope {slope:.4}, final min {m:.4})");
        }
        if let Some(e) = &root.error {
            s += &format!(" error: {e}");
        }
        s.push('\n');
    }
    if let Some(c) = &r.cross_check {
        s += &match (&c.theta_hat, &c.error) {
            (Some(t), _) => format!(
                "  second core point: theta_hat = {t}, agrees: {}\n",
                c.agrees
            ),
            (None, e) => format!(
                "  second core point failed: {}\n",
                e.as_deref().unwrap_or("")
            ),
        };
    }
    s
}

fn output_stem(config: &RunConfig, path: &Path) -> String {
    config.output.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "flagtype".into())
    })
}

/// Loads the config, estimates the flag type and writes the report files.
/// Estimation failures still produce a report carrying the error.
pub fn run_flagtype(opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let mut config = RunConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(samples) = opts.samples {
        config.sampling.samples_per_length = samples;
    }
    let spec = config.spec()?;
    if spec.dim() != config.n {
        return Err(CliError::Validation(format!(
            "n: config says {} but the semigroup acts on R^{}",
            config.n,
            spec.dim()
        )));
    }
    let result =
        with_pool(|| estimate_flag_type(&spec, &config.sampling, &config.thresholds, config.seed))?;
    let exit_code = match &result {
        Ok(r) if r.has_inconclusive() => exit::INCONCLUSIVE,
        Ok(_) => exit::OK,
        Err(e) => CliError::from(e.clone()).exit_code(),
    };
    let report = ReportFile::new(&config, result.map_err(|e| e.to_string()));
    let dir = opts
        .out_dir
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let (json, csv) = report.write(&dir, &output_stem(&config, &opts.config))?;
    Ok(RunOutcome {
        report,
        json,
        csv,
        exit_code,
    })
}

#[derive(Debug, Clone)]
pub struct Sl2Options {
    pub ts: Vec<f64>,
    pub deltas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

pub fn sl2_example(opts: &Sl2Options) -> Result<(Sl2Example, Option<PathBuf>), CliError> {
    let ex = with_pool(|| Sl2Example::run(&opts.ts, &opts.deltas, opts.samples, opts.seed))??;
    let csv = match &opts.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join("sl2_example.csv");
            std::fs::write(&path, ex.csv())?;
            Some(path)
        }
        None => None,
    };
    Ok((ex, csv))
}
