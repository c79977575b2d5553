//! Run configuration. Every subcommand flag has a key in a TOML file; flags
//! given on the command line override the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use semicurv::algebra::Tolerances;
use semicurv::geodesic::Scheme;
use semicurv::sampling::PlaneKind;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Validate,
    Curvature,
    Scan,
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

/// Which numerator expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    /// Five-term formula on the (product) algebra.
    Generic,
    /// Term-by-term semidirect expansion.
    Expansion,
    /// Composition of the Levi-Civita connection.
    Oracle,
    /// The magnetic expansion in `g` operations.
    Magnetic,
    /// `<Q∇_X X, Q∇_Y Y> − |Q∇_X Y|²` on divergence-free torus fields.
    Arnold,
}

impl std::str::FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "generic" => Formula::Generic,
            "expansion" => Formula::Expansion,
            "oracle" => Formula::Oracle,
            "magnetic" => Formula::Magnetic,
            "arnold" => Formula::Arnold,
            other => return Err(format!("unknown formula `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub algebra: Option<String>,
    pub semidirect: Option<String>,
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureConfig {
    pub plane_file: Option<PathBuf>,
    pub formula: Option<Formula>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub kind: Option<String>,
    pub zero_tol: Option<f64>,
    pub jobs: Option<usize>,
    pub formula: Option<Formula>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicConfig {
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub scheme: Option<String>,
    pub initial_file: Option<PathBuf>,
    pub seed: Option<u64>,
    pub u: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub support_cap: Option<i64>,
    pub midpoint_tol: Option<f64>,
    pub midpoint_max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub jacobi: Option<f64>,
    pub adjoint: Option<f64>,
    pub action: Option<f64>,
    pub isometric: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<Task>,
    /// `|k|∞` bound of the torus sampling mode set.
    pub band: Option<i64>,
    #[serde(default)]
    pub target: TargetConfig,
    #[serde(default)]
    pub curvature: CurvatureConfig,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub geodesic: GeodesicConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

impl RunConfig {
    /// Reads a config file; relative paths inside it resolve against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p.as_mut() {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        rebase(&mut cfg.target.spec);
        rebase(&mut cfg.curvature.plane_file);
        rebase(&mut cfg.geodesic.initial_file);
        rebase(&mut cfg.output.path);
        Ok(cfg)
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        let t = &self.tolerances;
        Tolerances {
            jacobi: t.jacobi.unwrap_or(d.jacobi),
            adjoint: t.adjoint.unwrap_or(d.adjoint),
            action: t.action.unwrap_or(d.action),
            isometric: t.isometric.unwrap_or(d.isometric),
        }
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }

    pub fn plane_kind(&self) -> Result<PlaneKind, CliError> {
        match &self.scan.kind {
            None => Ok(PlaneKind::Any),
            Some(k) => k.parse().map_err(CliError::from),
        }
    }

    pub fn scheme(&self) -> Result<Scheme, CliError> {
        match &self.geodesic.scheme {
            None => Ok(Scheme::Rk4),
            Some(s) => s.parse().map_err(CliError::from),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}
