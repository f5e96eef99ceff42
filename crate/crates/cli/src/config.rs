//! Flags over config file over defaults.

use std::path::{Path, PathBuf};

use cvpoly::method1::ScanRange;
use cvpoly::states::Grid;
use serde::{Deserialize, Serialize};

use crate::args::{Common, DbConvention};
use crate::error::{CliError, Result};

pub const OUT_ENV: &str = "CVPOLY_OUT";
const DEFAULT_OUT: &str = "cvpoly-out";

/// Keys accepted in a `--config` file. All optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub nu: Option<Vec<f64>>,
    pub db: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub grid: Option<String>,
    pub nodes: Option<usize>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub db_convention: Option<DbConvention>,
    pub scan: Option<String>,
    pub tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigDoc {
    Manifest { parameters: Parameters },
    Plain(FileConfig),
}

/// Per-command defaults.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub nu: Vec<f64>,
    pub db: Vec<f64>,
    pub delta: Vec<f64>,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            nu: vec![0.1],
            db: vec![1.0, 5.0, 10.0, 20.0],
            delta: vec![0.1, 0.5],
        }
    }
}

/// Resolved run parameters; also the `parameters` block of every manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub nu: Vec<f64>,
    pub db: Vec<f64>,
    pub delta: Vec<f64>,
    pub grid: String,
    pub nodes: usize,
    pub db_convention: DbConvention,
    pub scan: String,
    pub fock_sweep: Vec<f64>,
    pub coherent_sweep: Vec<f64>,
    pub coherent_phase: String,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub params: Parameters,
    pub grid: Grid,
    pub scan: ScanRange,
    pub jobs: Option<usize>,
    pub out: PathBuf,
    pub tolerance: Option<f64>,
}

pub fn parse_grid(spec: &str) -> Result<Grid> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("grid must look like \"qmin,qmax,n\", got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let q_min: f64 = parts[0].parse().map_err(|_| bad())?;
    let q_max: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    Grid::new(q_min, q_max, n).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parse_scan(spec: &str) -> Result<ScanRange> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("scan must look like \"start,stop,steps\", got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(ScanRange {
        start: parts[0].parse().map_err(|_| bad())?,
        stop: parts[1].parse().map_err(|_| bad())?,
        steps: parts[2].parse().map_err(|_| bad())?,
    })
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let doc: ConfigDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
    Ok(match doc {
        ConfigDoc::Plain(c) => c,
        ConfigDoc::Manifest { parameters: p } => FileConfig {
            nu: Some(p.nu),
            db: Some(p.db),
            delta: Some(p.delta),
            grid: Some(p.grid),
            nodes: Some(p.nodes),
            db_convention: Some(p.db_convention),
            scan: Some(p.scan),
            ..FileConfig::default()
        },
    })
}

fn check_list(name: &str, values: &[f64], positive: bool, signed: bool) -> Result<()> {
    if values.is_empty() {
        return Err(CliError::Usage(format!("--{name} needs at least one value")));
    }
    for &v in values {
        if !v.is_finite() || (!signed && v < 0.0) || (positive && v == 0.0) {
            return Err(CliError::Usage(format!("--{name} value {v} out of range")));
        }
    }
    Ok(())
}

impl Settings {
    pub fn resolve(
        flags: &Common,
        defaults: Defaults,
        scan_flag: Option<&str>,
        tolerance_flag: Option<f64>,
    ) -> Result<Settings> {
        let file = match &flags.config {
            Some(p) => load_config(p)?,
            None => FileConfig::default(),
        };
        let nu = flags.nu.clone().or(file.nu).unwrap_or(defaults.nu);
        let db = flags.db.clone().or(file.db).unwrap_or(defaults.db);
        let delta = flags.delta.clone().or(file.delta).unwrap_or(defaults.delta);
        check_list("nu", &nu, false, true)?;
        check_list("db", &db, false, false)?;
        check_list("delta", &delta, true, false)?;
        let grid_spec = flags.grid.clone().or(file.grid).unwrap_or_else(|| {
            let g = Grid::default();
            format!("{},{},{}", g.q_min(), g.q_max(), g.len())
        });
        let grid = parse_grid(&grid_spec)?;
        let nodes = flags.nodes.or(file.nodes).unwrap_or(8);
        if nodes == 0 {
            return Err(CliError::Usage("--nodes must be at least 1".into()));
        }
        let jobs = flags.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        let out = flags
            .out
            .clone()
            .or(file.out)
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let db_convention = flags
            .db_convention
            .or(file.db_convention)
            .unwrap_or(DbConvention::SqueezedQ);
        let scan_spec = scan_flag
            .map(str::to_owned)
            .or(file.scan)
            .unwrap_or_else(|| "-8,8,161".into());
        let scan = parse_scan(&scan_spec)?;
        let tolerance = tolerance_flag.or(file.tolerance);
        let sweep: Vec<f64> = cvpoly::analysis::default_sweep();
        Ok(Settings {
            params: Parameters {
                nu,
                db,
                delta,
                grid: grid_spec,
                nodes,
                db_convention,
                scan: scan_spec,
                fock_sweep: sweep.clone(),
                coherent_sweep: sweep,
                coherent_phase: "real".into(),
            },
            grid,
            scan,
            jobs,
            out,
            tolerance,
        })
    }
}
