//! Single-loop holonomy dump.

use clap::Args;
use geophase_core::holonomy::{self, ParamPath, DEFAULT_STEPS};
use geophase_core::tripod::LoopSpec;
use serde::Serialize;

use crate::config::{self, Settings};
use crate::error::{CliError, Result};
use crate::output::{self, Cell, Sink};
use crate::CommonArgs;

const KEYS: &[&str] = &["omega0", "tau", "alpha", "beta", "steps", "converge", "out", "path_out", "path_stride"];

#[derive(Debug, Args)]
pub struct HolonomyArgs {
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
    /// Refine by step doubling until successive holonomies agree.
    #[arg(long)]
    pub converge: bool,
    /// Also write the sampled loop `(s, theta, phi, varphi, omega)` as CSV.
    #[arg(long)]
    pub path_out: Option<String>,
    /// Keep every n-th path sample in `--path-out`.
    #[arg(long)]
    pub path_stride: Option<usize>,
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
struct Dump {
    tool_version: &'static str,
    label: String,
    alpha: f64,
    beta: f64,
    steps: usize,
    refined: bool,
    converged: bool,
    unitarity_defect: f64,
    det_re: f64,
    det_im: f64,
    U11_re: f64,
    U11_im: f64,
    U12_re: f64,
    U12_im: f64,
    U21_re: f64,
    U21_im: f64,
    U22_re: f64,
    U22_im: f64,
}

pub fn run(args: &HolonomyArgs) -> Result<()> {
    let mut s = Settings::load(args.common.config.as_deref(), KEYS)?;
    let omega0 = s.get("omega0", args.omega0, 100.0)?;
    let tau = s.get("tau", args.tau, 2.0)?;
    let alpha = s.get("alpha", args.alpha, 1.0)?;
    let beta = s.get("beta", args.beta, 0.0)?;
    let steps = s.get("steps", args.common.steps, DEFAULT_STEPS)?;
    let converge = s.switch("converge", args.converge)?;
    let out = s.get("out", args.common.out.clone(), "-".to_string())?;
    let path_out = s.optional("path_out", args.path_out.clone());
    let path_stride = s.get("path_stride", args.path_stride, 100)?;
    config::check_steps(steps)?;
    if path_stride == 0 {
        return Err(CliError::Config("path_stride must be at least 1".into()));
    }
    let spec = LoopSpec::new(omega0, tau, alpha, beta)?;

    let h = if converge {
        holonomy::converged_loop_holonomy(&spec, steps)?
    } else {
        holonomy::loop_holonomy(&spec, steps)?
    };
    if !h.converged {
        return Err(CliError::Convergence(format!("unitarity defect {:.3e} at {} steps", h.unitarity_defect, h.steps)));
    }
    let u = &h.matrix;
    let det = u.determinant()?;
    let dump = Dump {
        tool_version: output::VERSION,
        label: h.label.clone(),
        alpha,
        beta,
        steps: h.steps,
        refined: converge,
        converged: h.converged,
        unitarity_defect: h.unitarity_defect,
        det_re: det.re,
        det_im: det.im,
        U11_re: u[(0, 0)].re,
        U11_im: u[(0, 0)].im,
        U12_re: u[(0, 1)].re,
        U12_im: u[(0, 1)].im,
        U21_re: u[(1, 0)].re,
        U21_im: u[(1, 0)].im,
        U22_re: u[(1, 1)].re,
        U22_im: u[(1, 1)].im,
    };
    output::write_json(&Sink::parse(&out), &dump)?;

    if let Some(path_out) = &path_out {
        let path = ParamPath::for_loop(&spec, h.steps)?;
        let last = path.len() - 1;
        let rows = path
            .samples()
            .iter()
            .enumerate()
            .filter(|(i, _)| i % path_stride == 0 || *i == last)
            .map(|(_, (s, p))| [*s, p.theta, p.phi, p.varphi, p.omega].map(Cell::Num).into_iter().collect());
        output::write_csv(
            &Sink::parse(path_out),
            "holonomy",
            s.echo(),
            &["s", "theta", "phi", "varphi", "omega"],
            rows,
        )?;
    }
    Ok(())
}
