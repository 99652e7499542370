//! Population-difference maps over `(alpha, beta)` and line cuts at fixed alpha.

use std::time::Instant;

use clap::Args;
use geophase_core::holonomy::{self, Holonomy, DEFAULT_STEPS, UNITARITY_TOL};
use geophase_core::tripod::LoopSpec;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, Settings};
use crate::error::Result;
use crate::output::{self, Cell, Sink};
use crate::CommonArgs;

const SWEEP_KEYS: &[&str] = &[
    "alpha_min", "alpha_max", "alpha_count", "beta_min", "beta_max", "beta_count", "omega0", "tau", "steps", "out",
    "report",
];
const LINECUT_KEYS: &[&str] =
    &["alpha", "beta_min", "beta_max", "beta_count", "omega0", "tau", "steps", "reverse", "out", "report"];

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub alpha_count: Option<usize>,
    #[arg(long)]
    pub beta_min: Option<f64>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub beta_count: Option<usize>,
    /// Rabi-frequency scale (the holonomies do not depend on it).
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Also write a JSON run report with diagnostics and wall time.
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Debug, Args)]
pub struct LinecutArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta_min: Option<f64>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub beta_count: Option<usize>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Traverse the alpha/beta loop first, which swaps P and P_prime.
    #[arg(long)]
    pub reverse: bool,
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    alpha: f64,
    beta: f64,
    p: f64,
    p_prime: f64,
    p_d: f64,
    u1_defect: f64,
    u2_defect: f64,
}

impl Row {
    fn converged(&self) -> bool {
        self.u1_defect <= UNITARITY_TOL && self.u2_defect <= UNITARITY_TOL
    }

    fn diagnostics(&self) -> Cell {
        Cell::Text(if self.converged() { "ok" } else { "unconverged" }.to_string())
    }
}

fn evaluate(u1: &Holonomy, spec: &LoopSpec, steps: usize) -> Result<Row> {
    let u2 = holonomy::loop_holonomy(spec, steps)?;
    let pd = holonomy::population_difference(&u1.matrix, &u2.matrix);
    Ok(Row {
        alpha: spec.alpha,
        beta: spec.beta,
        p: pd.p,
        p_prime: pd.p_prime,
        p_d: pd.p_d,
        u1_defect: u1.unitarity_defect,
        u2_defect: u2.unitarity_defect,
    })
}

/// Evaluates the grid in parallel; results come back in grid order.
fn run_grid(omega0: f64, tau: f64, grid: &[(f64, f64)], steps: usize) -> Result<Vec<Row>> {
    for &(alpha, beta) in grid {
        LoopSpec::new(omega0, tau, alpha, beta)?;
    }
    let u1 = holonomy::loop_holonomy(&LoopSpec::c1(omega0, tau)?, steps)?;
    grid.par_iter()
        .map(|&(alpha, beta)| evaluate(&u1, &LoopSpec::new(omega0, tau, alpha, beta)?, steps))
        .collect()
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    tool_version: &'a str,
    command: &'a str,
    config: serde_json::Map<String, serde_json::Value>,
    rows: usize,
    steps: usize,
    unconverged_rows: usize,
    max_u1_defect: f64,
    max_u2_defect: f64,
    wall_time_s: f64,
}

fn write_report(path: &str, command: &str, settings: &Settings, rows: &[Row], steps: usize, start: Instant) -> Result<()> {
    let config = settings
        .echo()
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let report = RunReport {
        tool_version: output::VERSION,
        command,
        config,
        rows: rows.len(),
        steps,
        unconverged_rows: rows.iter().filter(|r| !r.converged()).count(),
        max_u1_defect: rows.iter().map(|r| r.u1_defect).fold(0.0, f64::max),
        max_u2_defect: rows.iter().map(|r| r.u2_defect).fold(0.0, f64::max),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    output::write_json(&Sink::parse(path), &report)
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let start = Instant::now();
    let mut s = Settings::load(args.common.config.as_deref(), SWEEP_KEYS)?;
    let alpha_min = s.get("alpha_min", args.alpha_min, 1.0)?;
    let alpha_max = s.get("alpha_max", args.alpha_max, 10.0)?;
    let alpha_count = s.get("alpha_count", args.alpha_count, 25)?;
    let beta_min = s.get("beta_min", args.beta_min, 0.0)?;
    let beta_max = s.get("beta_max", args.beta_max, 1.0)?;
    let beta_count = s.get("beta_count", args.beta_count, 25)?;
    let omega0 = s.get("omega0", args.omega0, 100.0)?;
    let tau = s.get("tau", args.tau, 2.0)?;
    let steps = s.get("steps", args.common.steps, DEFAULT_STEPS)?;
    let out = s.get("out", args.common.out.clone(), "-".to_string())?;
    let report = s.optional("report", args.report.clone());
    config::check_range("alpha", alpha_min, alpha_max, alpha_count)?;
    config::check_range("beta", beta_min, beta_max, beta_count)?;
    config::check_steps(steps)?;

    let betas = config::linspace(beta_min, beta_max, beta_count);
    let grid: Vec<(f64, f64)> = config::linspace(alpha_min, alpha_max, alpha_count)
        .into_iter()
        .flat_map(|a| betas.iter().map(move |&b| (a, b)))
        .collect();
    let rows = run_grid(omega0, tau, &grid, steps)?;

    let columns = ["alpha", "beta", "P", "P_prime", "P_d", "u1_defect", "u2_defect", "diagnostics"];
    let cells = rows.iter().map(|r| {
        let mut v: Vec<Cell> =
            [r.alpha, r.beta, r.p, r.p_prime, r.p_d, r.u1_defect, r.u2_defect].map(Cell::Num).into_iter().collect();
        v.push(r.diagnostics());
        v
    });
    output::write_csv(&Sink::parse(&out), "sweep", s.echo(), &columns, cells)?;
    if let Some(report) = &report {
        write_report(report, "sweep", &s, &rows, steps, start)?;
    }
    Ok(())
}

pub fn linecut(args: &LinecutArgs) -> Result<()> {
    let start = Instant::now();
    let mut s = Settings::load(args.common.config.as_deref(), LINECUT_KEYS)?;
    let alpha = s.get("alpha", args.alpha, 7.0)?;
    let beta_min = s.get("beta_min", args.beta_min, 0.0)?;
    let beta_max = s.get("beta_max", args.beta_max, 1.0)?;
    let beta_count = s.get("beta_count", args.beta_count, 101)?;
    let omega0 = s.get("omega0", args.omega0, 100.0)?;
    let tau = s.get("tau", args.tau, 2.0)?;
    let steps = s.get("steps", args.common.steps, DEFAULT_STEPS)?;
    let reverse = s.switch("reverse", args.reverse)?;
    let out = s.get("out", args.common.out.clone(), "-".to_string())?;
    let report = s.optional("report", args.report.clone());
    config::check_range("beta", beta_min, beta_max, beta_count)?;
    config::check_steps(steps)?;

    let grid: Vec<(f64, f64)> =
        config::linspace(beta_min, beta_max, beta_count).into_iter().map(|b| (alpha, b)).collect();
    let rows = run_grid(omega0, tau, &grid, steps)?;

    let columns = ["beta", "P", "P_prime", "P_d", "diagnostics"];
    let cells = rows.iter().map(|r| {
        let (p, p_prime) = if reverse { (r.p_prime, r.p) } else { (r.p, r.p_prime) };
        vec![Cell::Num(r.beta), Cell::Num(p), Cell::Num(p_prime), Cell::Num(p_prime - p), r.diagnostics()]
    });
    output::write_csv(&Sink::parse(&out), "linecut", s.echo(), &columns, cells)?;
    if let Some(report) = &report {
        write_report(report, "linecut", &s, &rows, steps, start)?;
    }
    Ok(())
}
