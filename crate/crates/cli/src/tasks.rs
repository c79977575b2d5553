use std::io::Write;

use rayon::prelude::*;

use semicurv::geodesic::IntegratorConfig;
use semicurv::torus::DEFAULT_SUPPORT_CAP;

use crate::config::{RunConfig, Task, DEFAULT_ZERO_TOL};
use crate::error::CliError;
use crate::input;
use crate::output::{self, CurvatureRecord, SignSummary, TrajectoryTable};
use crate::target::{resolve, CurvatureTarget, GeodesicTarget, Resolved};

/// Dispatches on the resolved backend type.
macro_rules! with_target {
    ($resolved:expr, $t:ident => $body:expr) => {
        match $resolved {
            Resolved::Algebra($t) => $body,
            Resolved::Semidirect($t) => $body,
            Resolved::TorusVol($t) => $body,
            Resolved::TorusFull($t) => $body,
            Resolved::Passive($t) => $body,
            Resolved::Compressible($t) => $body,
            Resolved::Mhd($t) => $body,
        }
    };
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let task = cfg.task.ok_or_else(|| CliError::config("no task given"))?;
    match task {
        Task::Validate => validate(cfg),
        Task::Curvature => {
            let resolved = resolve(cfg)?;
            with_target!(&resolved, t => curvature(t, cfg))
        }
        Task::Scan => {
            let resolved = resolve(cfg)?;
            with_target!(&resolved, t => scan(t, cfg))
        }
        Task::Geodesic => {
            let resolved = resolve(cfg)?;
            with_target!(&resolved, t => geodesic(t, cfg))
        }
    }
}

/// Construction runs every structural check; a target that resolves passes.
fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    resolve(cfg)?;
    let mut out = output::open(cfg.output.path.as_deref())?;
    writeln!(out, "pass")?;
    out.flush()?;
    Ok(())
}

fn zero_tol(cfg: &RunConfig) -> Result<f64, CliError> {
    let z = cfg.scan.zero_tol.unwrap_or(DEFAULT_ZERO_TOL);
    if z.is_nan() || z < 0.0 {
        return Err(CliError::config("zero_tol must be non-negative"));
    }
    Ok(z)
}

fn curvature<T: CurvatureTarget>(t: &T, cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg
        .curvature
        .plane_file
        .as_ref()
        .ok_or_else(|| CliError::config("curvature needs --plane-file"))?;
    let formula = cfg.curvature.formula.unwrap_or_else(|| t.default_formula());
    let mut records = Vec::new();
    for (i, (xv, yv)) in input::plane_values(path)?.iter().enumerate() {
        let x = t.parse(xv, &format!("plane {} x", i + 1))?;
        let y = t.parse(yv, &format!("plane {} y", i + 1))?;
        t.check_plane(&x, &y)?;
        records.push(CurvatureRecord {
            plane_id: i,
            breakdown: t.evaluate(formula, &x, &y)?,
        });
    }
    let mut out = output::open(cfg.output.path.as_deref())?;
    output::write_curvature(&mut out, cfg.format(), &records, zero_tol(cfg)?, None)
}

/// Samples and evaluates the planes of a scan, in plane-id order.
pub fn scan_records<T: CurvatureTarget>(t: &T, cfg: &RunConfig) -> Result<Vec<CurvatureRecord>, CliError> {
    let seed = cfg.scan.seed.ok_or_else(|| CliError::config("scan needs --seed"))?;
    let count = cfg.scan.count.ok_or_else(|| CliError::config("scan needs --count"))?;
    let kind = cfg.plane_kind()?;
    let formula = cfg.scan.formula.unwrap_or_else(|| t.default_formula());
    let planes = t.sample(seed, count, kind)?;
    let eval = |(i, p): (usize, &semicurv::curvature::Plane<T::Elem>)| {
        t.evaluate(formula, &p.x, &p.y)
            .map(|breakdown| CurvatureRecord { plane_id: i, breakdown })
    };
    match cfg.scan.jobs.unwrap_or(1) {
        0 => Err(CliError::config("jobs must be at least 1")),
        1 => planes.iter().enumerate().map(eval).collect(),
        jobs => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
            pool.install(|| planes.par_iter().enumerate().map(eval).collect())
        }
    }
}

fn scan<T: CurvatureTarget>(t: &T, cfg: &RunConfig) -> Result<(), CliError> {
    let records = scan_records(t, cfg)?;
    let z = zero_tol(cfg)?;
    let summary = SignSummary::from_records(&records, z);
    let mut out = output::open(cfg.output.path.as_deref())?;
    output::write_curvature(&mut out, cfg.format(), &records, z, Some(&summary))?;
    eprintln!("{summary}");
    Ok(())
}

fn integrator_config(cfg: &RunConfig) -> Result<IntegratorConfig, CliError> {
    let g = &cfg.geodesic;
    let dt = g.dt.ok_or_else(|| CliError::config("geodesic needs --dt"))?;
    let steps = g.steps.ok_or_else(|| CliError::config("geodesic needs --steps"))?;
    let mut ic = IntegratorConfig::new(dt, steps, cfg.scheme()?);
    if let Some(tol) = g.midpoint_tol {
        ic.midpoint_tol = tol;
    }
    if let Some(n) = g.midpoint_max_iter {
        ic.midpoint_max_iter = n;
    }
    ic.validate()?;
    Ok(ic)
}

fn geodesic<T: GeodesicTarget>(t: &T, cfg: &RunConfig) -> Result<(), CliError> {
    let ic = integrator_config(cfg)?;
    let cap = cfg.geodesic.support_cap.unwrap_or(DEFAULT_SUPPORT_CAP);
    if cap < 0 {
        return Err(CliError::config("support_cap must be non-negative"));
    }
    let s0 = t.initial_state(cfg)?;
    let traj = t.integrate(s0, &ic, cap)?;
    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(&traj.energy)
        .map(|((time, s), e)| (*time, t.coords(s), *e))
        .collect();
    let table = TrajectoryTable {
        columns: t.columns(),
        rows,
        status: t.experimental().then_some("experimental"),
    };
    let mut out = output::open(cfg.output.path.as_deref())?;
    output::write_trajectory(&mut out, cfg.format(), &table)
}
