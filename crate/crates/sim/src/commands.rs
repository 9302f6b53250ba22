//! Subcommand implementations. Each returns the text to print on success.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use collapse_core::diagnostics::{fit_series, FitResult};
use collapse_core::eigenproblem::{ode_residual, solve_eigenvalue, EigenMethod, ShootingConfig};
use collapse_core::pde_solver::{run, RunError};
use collapse_core::physmap::{reduce, RockFluidParams};
use collapse_core::selfsimilar::{
    classify, mu_of_c, ExponentialLimitSolution, Regime, SelfSimilarSolution,
};
use collapse_core::TimeSeries;
use serde_json::json;

use crate::config::{RockFluidConfig, RunConfig};
use crate::csvio::{write_columns, write_json, write_series, write_snapshot};
use crate::error::CliError;

/// Name of the manifest written next to every run's outputs.
pub const MANIFEST_NAME: &str = "manifest.json";

/// Files produced by one run.
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub dir: PathBuf,
    pub series: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub summary: String,
}

fn remove_old_snapshots(dir: &Path, run_id: &str) -> Result<(), CliError> {
    let prefix = format!("{run_id}_snap_");
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let is_snapshot = name
            .strip_prefix(&prefix)
            .and_then(|rest| rest.strip_suffix(".csv"))
            .is_some_and(|step| !step.is_empty() && step.bytes().all(|b| b.is_ascii_digit()));
        if is_snapshot {
            fs::remove_file(&path)?;
        }
    }
    Ok(())
}

fn write_outputs(
    dir: &Path,
    config: &RunConfig,
    c: f64,
    series: &TimeSeries,
    status: &str,
) -> Result<RunOutputs, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    let id = &config.run_id;
    remove_old_snapshots(dir, id)?;
    let series_path = dir.join(format!("{id}_series.csv"));
    write_series(&series_path, series)?;
    let mut snapshots = Vec::with_capacity(series.snapshots.len());
    for snap in &series.snapshots {
        let p = dir.join(format!("{id}_snap_{}.csv", snap.step));
        write_snapshot(&p, snap)?;
        snapshots.push(p);
    }
    let name = |p: &Path| p.file_name().unwrap().to_string_lossy().into_owned();
    let manifest = json!({
        "artifact": env!("CARGO_PKG_NAME"),
        "artifact_version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "c_resolved": c,
        "status": status,
        "outputs": {
            "series": name(&series_path),
            "snapshots": snapshots.iter().map(|p| name(p)).collect::<Vec<_>>(),
        },
    });
    let manifest_path = dir.join(MANIFEST_NAME);
    write_json(&manifest_path, &manifest)?;
    let last = series
        .records
        .last()
        .expect("series holds the initial record");
    let summary = format!(
        "{id}: {status} t={} x_f={} h_max={}",
        last.t,
        last.half_width(),
        last.h_max
    );
    Ok(RunOutputs {
        dir: dir.to_path_buf(),
        series: series_path,
        snapshots,
        manifest: manifest_path,
        summary,
    })
}

/// Resolves, runs and writes one configuration. `out` overrides every other
/// output directory setting.
pub fn simulate_config(config: &RunConfig, out: Option<&Path>) -> Result<RunOutputs, CliError> {
    let mut resolved = config.resolve()?;
    if let Some(out) = out {
        resolved.output_dir = out.to_path_buf();
        resolved.config.output_dir = out.to_string_lossy().into_owned();
    }
    match run(&resolved.ic, resolved.c, &resolved.scheme) {
        Ok(series) => {
            let status = format!(
                "stopped ({:?})",
                series.stop.expect("normal end has a reason")
            );
            write_outputs(
                &resolved.output_dir,
                &resolved.config,
                resolved.c,
                &series,
                &status,
            )
        }
        Err(RunError::Domain(e)) => Err(e.into()),
        Err(RunError::Aborted(aborted)) => {
            let status = format!("aborted: {}", aborted.error);
            let written = write_outputs(
                &resolved.output_dir,
                &resolved.config,
                resolved.c,
                &aborted.series,
                &status,
            )?;
            Err(CliError::numerical(format!(
                "run aborted at t = {}: {} (partial output in {})",
                aborted.last_state.t,
                aborted.error,
                written.dir.display()
            )))
        }
    }
}

/// Reads the config recorded in a manifest.
pub fn config_from_manifest(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid manifest: {e}")))?;
    let config = value
        .get("config")
        .ok_or_else(|| CliError::config("manifest has no config"))?;
    serde_json::from_value(config.clone())
        .map_err(|e| CliError::config(format!("invalid manifest config: {e}")))
}

/// Runs the configuration once per value of `c`, concurrently, each in its
/// own subdirectory `<output>/<run_id>_c<value>`.
pub fn simulate_sweep(
    config: &RunConfig,
    values: &[f64],
    out: Option<&Path>,
) -> Result<Vec<RunOutputs>, CliError> {
    if config.rock_fluid.is_some() {
        return Err(CliError::config(
            "a sweep over c needs a config that gives c directly",
        ));
    }
    let base = match out {
        Some(p) => p.to_path_buf(),
        None => config.resolve()?.output_dir,
    };
    let results: Vec<Result<RunOutputs, CliError>> = thread::scope(|scope| {
        let handles: Vec<_> = values
            .iter()
            .map(|&c| {
                let mut cfg = config.clone();
                cfg.c = Some(c);
                cfg.run_id = format!("{}_c{c}", config.run_id);
                let dir = base.join(&cfg.run_id);
                scope.spawn(move || simulate_config(&cfg, Some(&dir)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut outputs = Vec::with_capacity(results.len());
    let mut worst: Option<CliError> = None;
    for r in results {
        match r {
            Ok(o) => outputs.push(o),
            Err(e) => {
                if worst
                    .as_ref()
                    .map_or(true, |w| e.exit_code() > w.exit_code())
                {
                    worst = Some(e);
                }
            }
        }
    }
    match worst {
        Some(e) => Err(e),
        None => Ok(outputs),
    }
}

/// Paths written by [`fit`].
#[derive(Debug, Clone)]
pub struct FitOutputs {
    pub result: FitResult,
    pub report: PathBuf,
    pub line_t0: PathBuf,
    pub line_mu: PathBuf,
}

/// Fits `(t₀, B, μ)` to a series file. Writes `<stem>_fit.json`,
/// `<stem>_fig2a.csv` with `(t, x_f²/h_max)` and `<stem>_fig2b.csv` with
/// `(ln(t₀ − t), ln x_f)` next to the input, or into `out`.
pub fn fit(series_path: &Path, c: f64, out: Option<&Path>) -> Result<FitOutputs, CliError> {
    let series = crate::csvio::read_series(series_path)?;
    let result =
        fit_series(&series, c).map_err(|e| CliError::numerical(format!("fit failed: {e}")))?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| series_path.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    fs::create_dir_all(&dir)?;
    let stem = series_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());

    let report = dir.join(format!("{stem}_fit.json"));
    write_json(
        &report,
        &json!({
            "t0": result.t0,
            "B": result.b,
            "mu": result.mu,
            "r2_linear": result.r2_linear,
            "r2_loglog": result.r2_loglog,
            "window_start": result.window.start,
            "window_end": result.window.end,
        }),
    )?;

    let inside: Vec<_> = series
        .records
        .iter()
        .filter(|r| result.window.contains(r.t))
        .collect();
    let t: Vec<f64> = inside.iter().map(|r| r.t).collect();
    let y: Vec<f64> = inside
        .iter()
        .map(|r| r.half_width().powi(2) / r.h_max)
        .collect();
    let line_t0 = dir.join(format!("{stem}_fig2a.csv"));
    write_columns(&line_t0, &["t", "xf2_over_hmax"], &[&t, &y])?;
    let u: Vec<f64> = inside.iter().map(|r| (result.t0 - r.t).ln()).collect();
    let v: Vec<f64> = inside.iter().map(|r| r.half_width().ln()).collect();
    let line_mu = dir.join(format!("{stem}_fig2b.csv"));
    write_columns(&line_mu, &["ln_t0_minus_t", "ln_xf"], &[&u, &v])?;

    Ok(FitOutputs {
        result,
        report,
        line_t0,
        line_mu,
    })
}

/// Arguments of [`selfsimilar`].
#[derive(Debug, Clone, Default)]
pub struct SelfSimilarArgs {
    pub c: f64,
    pub b: Option<f64>,
    pub t0: Option<f64>,
    pub theta: Option<f64>,
    pub amplitude: Option<f64>,
    pub x0: f64,
    pub t: f64,
    pub points: usize,
    pub series: bool,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
}

enum Closed {
    Power(SelfSimilarSolution),
    Exponential(ExponentialLimitSolution),
}

impl Closed {
    fn half_width(&self, t: f64) -> Result<f64, CliError> {
        match self {
            Closed::Power(s) => Ok(s.half_width(t)?),
            Closed::Exponential(e) => Ok(e.half_width(t)),
        }
    }

    fn h_max(&self, t: f64) -> Result<f64, CliError> {
        match self {
            Closed::Power(s) => Ok(s.h_max(t)?),
            Closed::Exponential(e) => Ok(e.h_max(t)),
        }
    }

    fn eval(&self, x: f64, t: f64) -> Result<f64, CliError> {
        match self {
            Closed::Power(s) => Ok(s.eval(x, t)?),
            Closed::Exponential(e) => Ok(e.eval(x, t)),
        }
    }

    fn x0(&self) -> f64 {
        match self {
            Closed::Power(s) => s.x0(),
            Closed::Exponential(e) => e.x0(),
        }
    }
}

/// Samples the closed-form solution. Writes `x,h` on the support at `t`, or
/// with `series` set `t,x_f,h_max` on `[t_start, t_end]`, to `output`.
pub fn selfsimilar(
    args: &SelfSimilarArgs,
    output: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let regime = classify(args.c)?.regime();
    let closed = match regime {
        Regime::ExponentialBoundary => {
            let (Some(theta), Some(amp)) = (args.theta, args.amplitude) else {
                return Err(CliError::config("c = 3/2 needs --theta and --C"));
            };
            Closed::Exponential(ExponentialLimitSolution::new(amp, theta, args.x0)?)
        }
        Regime::FiniteTimeCollapse | Regime::PowerLawDecay => {
            let (Some(b), Some(t0)) = (args.b, args.t0) else {
                return Err(CliError::config("this regime needs --B and --t0"));
            };
            Closed::Power(SelfSimilarSolution::new(args.c, b, t0, args.x0)?)
        }
        _ => {
            return Err(CliError::config(format!(
                "no closed-form solution is implemented for c = {} ({regime:?})",
                args.c
            )))
        }
    };
    let n = args.points.max(2);
    let mut w = csv::Writer::from_writer(output);
    if args.series {
        let (Some(a), Some(b)) = (args.t_start, args.t_end) else {
            return Err(CliError::config("--series needs --t-start and --t-end"));
        };
        if !(b > a) {
            return Err(CliError::config("--t-end must exceed --t-start"));
        }
        w.write_record(["t", "x_f", "h_max"])?;
        for i in 0..n {
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            let (xf, hm) = (closed.half_width(t)?, closed.h_max(t)?);
            w.write_record([
                crate::csvio::fmt(t),
                crate::csvio::fmt(xf),
                crate::csvio::fmt(hm),
            ])?;
        }
    } else {
        let xf = closed.half_width(args.t)?;
        w.write_record(["x", "h"])?;
        for i in 0..n {
            let x = closed.x0() + xf * (-1.0 + 2.0 * i as f64 / (n - 1) as f64);
            let h = closed.eval(x, args.t)?;
            w.write_record([crate::csvio::fmt(x), crate::csvio::fmt(h)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Arguments of [`shoot`].
#[derive(Debug, Clone)]
pub struct ShootArgs {
    pub c: f64,
    pub config: ShootingConfig,
    pub profile: Option<PathBuf>,
}

impl ShootArgs {
    pub fn new(c: f64) -> Self {
        Self {
            c,
            config: ShootingConfig::default(),
            profile: None,
        }
    }
}

/// Solves the eigenvalue problem and reports the error against the closed form.
pub fn shoot(args: &ShootArgs) -> Result<String, CliError> {
    if !(args.c.is_finite() && args.c > 1.5) {
        return Err(CliError::config(format!(
            "eigenvalue problem requires c > 3/2 (got {})",
            args.c
        )));
    }
    args.config.validate()?;
    let sol = solve_eigenvalue(args.c, &args.config).map_err(|e| match e {
        collapse_core::eigenproblem::EigenError::Domain(d) => CliError::Domain(d),
        other => CliError::numerical(format!("eigenvalue search failed: {other}")),
    })?;
    let analytic = mu_of_c(args.c)?;
    let xi: Vec<f64> = sol.profile.iter().map(|p| p.0).collect();
    let f: Vec<f64> = sol.profile.iter().map(|p| p.1).collect();
    let residual = ode_residual(&xi, &f, sol.mu_numeric, args.c);
    let method = match sol.method {
        EigenMethod::Shooting => "shooting",
        EigenMethod::Collocation => "collocation",
        EigenMethod::Auto => "auto",
    };
    let mut out = String::new();
    writeln!(out, "c = {}", args.c).unwrap();
    writeln!(out, "method = {method}").unwrap();
    writeln!(out, "mu_numeric = {:.15}", sol.mu_numeric).unwrap();
    writeln!(out, "mu_analytic = {analytic:.15}").unwrap();
    writeln!(out, "abs_error = {:.3e}", (sol.mu_numeric - analytic).abs()).unwrap();
    writeln!(out, "residual_at_zero = {:.3e}", sol.residual_at_zero).unwrap();
    writeln!(out, "ode_residual = {residual:.3e}").unwrap();
    writeln!(out, "iterations = {}", sol.iterations).unwrap();
    writeln!(out, "roots = {:?}", sol.roots).unwrap();
    if let Some(path) = &args.profile {
        write_columns(path, &["xi", "F"], &[&xi, &f])?;
        writeln!(out, "profile = {}", path.display()).unwrap();
    }
    Ok(out)
}

/// Reduces physical parameters read from a JSON file.
pub fn reduce_params(path: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let rf: RockFluidConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid parameters: {e}")))?;
    let r = reduce(&RockFluidParams::from(rf))?;
    let regime = classify(r.c)?.regime();
    let value = json!({
        "c": r.c,
        "regime": format!("{regime:?}"),
        "kappa": r.kappa,
        "space_scale": r.space_scale,
    });
    Ok(serde_json::to_string_pretty(&value).expect("plain json"))
}
