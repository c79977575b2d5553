use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semicurv_cli::config::{Format, Formula, RunConfig, Task};
use semicurv_cli::error::EXIT_CONFIG;
use semicurv_cli::CliError;

/// Curvature and geodesics of Lie groups with right-invariant metrics.
#[derive(Parser)]
#[command(name = "semicurv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure constants, Gram matrix and action of a target.
    Validate(Common),
    /// Evaluate curvature on the planes of a plane file.
    Curvature {
        #[command(flatten)]
        common: Common,
        /// TOML file of `[[plane]]` entries with `x` and `y`.
        #[arg(long)]
        plane_file: Option<PathBuf>,
        /// generic, expansion, oracle, magnetic, arnold
        #[arg(long)]
        formula: Option<Formula>,
    },
    /// Sample seeded random planes and report curvature signs.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Integrate the geodesic equation.
    Geodesic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        geodesic: GeodesicArgs,
    },
    /// Run the task named in a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// so3, so3:d1,d2,d3, solvable:<dim>:<seed>, torus:vol, torus:full
    #[arg(long)]
    algebra: Option<String>,
    /// conjugation:<algebra>, magnetic:<algebra>, euclidean, linear_so3_on_r3,
    /// torus:passive-scalar, torus:compressible, torus:mhd
    #[arg(long)]
    semidirect: Option<String>,
    /// Algebra or semidirect spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Torus sampling band `|k|∞ <= band`.
    #[arg(long)]
    band: Option<i64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or jsonl
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    jacobi_tol: Option<f64>,
    #[arg(long)]
    adjoint_tol: Option<f64>,
    #[arg(long)]
    action_tol: Option<f64>,
    #[arg(long)]
    isometric_tol: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// PRNG seed (Xoshiro256++).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of planes.
    #[arg(long)]
    count: Option<usize>,
    /// any, g, h, mixed, contains-h
    #[arg(long)]
    kind: Option<String>,
    /// |K| at or below this counts as sign 0.
    #[arg(long)]
    zero_tol: Option<f64>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// generic, expansion, oracle, magnetic, arnold
    #[arg(long)]
    formula: Option<Formula>,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// rk4 or implicit_midpoint
    #[arg(long)]
    scheme: Option<String>,
    /// TOML file with `u` and optionally `alpha`.
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Draw a random initial state.
    #[arg(long)]
    seed: Option<u64>,
    /// Initial u as comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Option<Vec<f64>>,
    /// Initial alpha as comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// Torus runs keep modes with |k|∞ <= support_cap (default 16).
    #[arg(long)]
    support_cap: Option<i64>,
    #[arg(long)]
    midpoint_tol: Option<f64>,
    #[arg(long)]
    midpoint_max_iter: Option<usize>,
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

impl Common {
    fn load(self, task: Task) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if cfg.task.is_some_and(|t| t != task) {
            return Err(CliError::config(format!(
                "config file names task {:?} but the subcommand is {task:?}",
                cfg.task.unwrap()
            )));
        }
        cfg.task = Some(task);
        if self.algebra.is_some() || self.semidirect.is_some() || self.spec.is_some() {
            cfg.target.algebra = self.algebra;
            cfg.target.semidirect = self.semidirect;
            cfg.target.spec = self.spec;
        }
        set(&mut cfg.band, self.band);
        set(&mut cfg.output.path, self.output);
        set(&mut cfg.output.format, self.format);
        let t = &mut cfg.tolerances;
        set(&mut t.jacobi, self.jacobi_tol);
        set(&mut t.adjoint, self.adjoint_tol);
        set(&mut t.action, self.action_tol);
        set(&mut t.isometric, self.isometric_tol);
        Ok(cfg)
    }
}

fn build(command: Command) -> Result<RunConfig, CliError> {
    Ok(match command {
        Command::Validate(common) => common.load(Task::Validate)?,
        Command::Curvature {
            common,
            plane_file,
            formula,
        } => {
            let mut cfg = common.load(Task::Curvature)?;
            set(&mut cfg.curvature.plane_file, plane_file);
            set(&mut cfg.curvature.formula, formula);
            cfg
        }
        Command::Scan { common, scan } => {
            let mut cfg = common.load(Task::Scan)?;
            let s = &mut cfg.scan;
            set(&mut s.seed, scan.seed);
            set(&mut s.count, scan.count);
            set(&mut s.kind, scan.kind);
            set(&mut s.zero_tol, scan.zero_tol);
            set(&mut s.jobs, scan.jobs);
            set(&mut s.formula, scan.formula);
            cfg
        }
        Command::Geodesic { common, geodesic: a } => {
            let mut cfg = common.load(Task::Geodesic)?;
            let g = &mut cfg.geodesic;
            set(&mut g.dt, a.dt);
            set(&mut g.steps, a.steps);
            set(&mut g.scheme, a.scheme);
            // A flag-given initial state replaces the file's.
            if a.initial.is_some() || a.seed.is_some() || a.u.is_some() || a.alpha.is_some() {
                g.initial_file = a.initial;
                g.seed = a.seed;
                g.u = a.u;
                g.alpha = a.alpha;
            }
            set(&mut g.support_cap, a.support_cap);
            set(&mut g.midpoint_tol, a.midpoint_tol);
            set(&mut g.midpoint_max_iter, a.midpoint_max_iter);
            cfg
        }
        Command::Run { config } => {
            let cfg = RunConfig::from_file(&config)?;
            if cfg.task.is_none() {
                return Err(CliError::config(format!("{}: `task` is required", config.display())));
            }
            cfg
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match build(cli.command).and_then(|cfg| semicurv_cli::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        // The reader went away, e.g. `semicurv scan ... | head`.
        Err(e) if e.broken_pipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
