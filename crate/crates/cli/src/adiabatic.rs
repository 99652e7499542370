//! Full four-level dynamics over a composite loop pair.

use std::time::Instant;

use clap::Args;
use geophase_core::holonomy::DEFAULT_STEPS;
use geophase_core::schrodinger::{self, CompositeSchedule, DriveSchedule, Order};
use geophase_core::tripod::LoopSpec;
use serde::Serialize;

use crate::config::{self, Settings};
use crate::error::{CliError, Result};
use crate::output::{self, Cell, Sink};
use crate::CommonArgs;

const KEYS: &[&str] =
    &["omega0", "tau", "alpha", "beta", "dt", "reverse", "samples", "steps", "out", "summary"];

#[derive(Debug, Args)]
pub struct AdiabaticArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// RK4 step; 0 picks the default for the schedule.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Run the alpha/beta loop first.
    #[arg(long)]
    pub reverse: bool,
    /// Approximate number of rows in the time series.
    #[arg(long)]
    pub samples: Option<usize>,
    /// JSON summary path; defaults to the CSV path with a `.json` extension,
    /// or standard error when the CSV goes to standard output.
    #[arg(long)]
    pub summary: Option<String>,
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct Summary {
    tool_version: &'static str,
    omega0: f64,
    tau: f64,
    alpha: f64,
    beta: f64,
    order: &'static str,
    dt: f64,
    rk4_steps: usize,
    holonomy_steps: usize,
    #[serde(rename = "P_B_max")]
    p_b_max: f64,
    max_norm_drift: f64,
    final_P0: f64,
    final_P1: f64,
    final_P2: f64,
    final_P3: f64,
    adiabatic_fidelity: f64,
    #[serde(rename = "P_full")]
    p_full: f64,
    #[serde(rename = "P_holonomy")]
    p_holonomy: f64,
    holonomy_P2: f64,
    U11_re: f64,
    U11_im: f64,
    U12_re: f64,
    U12_im: f64,
    U21_re: f64,
    U21_im: f64,
    U22_re: f64,
    U22_im: f64,
    wall_time_s: f64,
}

pub fn run(args: &AdiabaticArgs) -> Result<()> {
    let start = Instant::now();
    let mut s = Settings::load(args.common.config.as_deref(), KEYS)?;
    let omega0 = s.get("omega0", args.omega0, 100.0)?;
    let tau = s.get("tau", args.tau, 2.0)?;
    let alpha = s.get("alpha", args.alpha, 7.0)?;
    let beta = s.get("beta", args.beta, 0.5)?;
    let dt_requested = s.get("dt", args.dt, 0.0)?;
    let reverse = s.switch("reverse", args.reverse)?;
    let samples = s.get("samples", args.samples, 4000)?;
    let steps = s.get("steps", args.common.steps, DEFAULT_STEPS)?;
    let out = s.get("out", args.common.out.clone(), "-".to_string())?;
    let summary = s.optional("summary", args.summary.clone());
    config::check_steps(steps)?;
    if !dt_requested.is_finite() || dt_requested < 0.0 {
        return Err(CliError::Config(format!("dt must be non-negative, got {dt_requested}")));
    }
    if samples == 0 {
        return Err(CliError::Config("samples must be at least 1".into()));
    }

    let order = if reverse { Order::SecondThenFirst } else { Order::FirstThenSecond };
    let schedule =
        CompositeSchedule::new(LoopSpec::c1(omega0, tau)?, LoopSpec::new(omega0, tau, alpha, beta)?, order)?;
    let dt = if dt_requested > 0.0 { dt_requested } else { schrodinger::default_dt(&schedule) };
    let total_steps: usize = schedule.segments().iter().map(|(a, b)| ((b - a) / dt).ceil() as usize).sum();
    let stride = (total_steps / samples).max(1);

    let traj = schrodinger::evolve_sampled(&schedule, &schrodinger::initial_state(), dt, stride)?;
    let cmp = schrodinger::compare_with_holonomy(&schedule, &traj, steps)?;

    let columns = ["t", "P_D1", "P_D2", "P_B1", "P_B2", "norm"];
    let rows = traj.times.iter().zip(&traj.populations).zip(&traj.states).map(|((t, p), psi)| {
        [*t, p.d1, p.d2, p.b1, p.b2, psi.norm()].map(Cell::Num).into_iter().collect()
    });
    let sink = Sink::parse(&out);
    output::write_csv(&sink, "adiabatic", s.echo(), &columns, rows)?;

    let u = &cmp.holonomy;
    let fin = &cmp.final_state;
    let report = Summary {
        tool_version: output::VERSION,
        omega0,
        tau,
        alpha,
        beta,
        order: if reverse { "second-then-first" } else { "first-then-second" },
        dt: traj.dt,
        rk4_steps: traj.steps,
        holonomy_steps: steps,
        p_b_max: cmp.p_bright_max,
        max_norm_drift: traj.max_norm_drift,
        final_P0: fin[0].norm_sqr(),
        final_P1: fin[1].norm_sqr(),
        final_P2: fin[2].norm_sqr(),
        final_P3: fin[3].norm_sqr(),
        adiabatic_fidelity: cmp.fidelity,
        p_full: cmp.p_full,
        p_holonomy: cmp.p_holonomy,
        holonomy_P2: u[(0, 1)].norm_sqr(),
        U11_re: u[(0, 0)].re,
        U11_im: u[(0, 0)].im,
        U12_re: u[(0, 1)].re,
        U12_im: u[(0, 1)].im,
        U21_re: u[(1, 0)].re,
        U21_im: u[(1, 0)].im,
        U22_re: u[(1, 1)].re,
        U22_im: u[(1, 1)].im,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Some(summary) = &summary {
        output::write_json(&Sink::parse(summary), &report)
    } else if let Some(path) = sink.path() {
        output::write_json(&Sink::File(path.with_extension("json")), &report)
    } else {
        eprintln!("{}", serde_json::to_string_pretty(&report).expect("summary serialises"));
        Ok(())
    }
}
