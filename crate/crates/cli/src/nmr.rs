//! Spin-3/2 quadrupole contrast case: connection checks, fixed-polar-angle
//! commutativity and the spectrum.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use clap::Args;
use geophase_core::holonomy::{self, numeric_gauge_potential, DEFAULT_STEPS};
use geophase_core::linalg::ComplexMatrix;
use geophase_core::nqr::{self, NqrPoint, Sector};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::{self, Settings};
use crate::error::{CliError, Result};
use crate::output::{self, Sink};
use crate::CommonArgs;

const KEYS: &[&str] = &["b", "steps", "out"];
const CHECK_POINTS: usize = 64;
const FD_STEP: f64 = 1e-5;

#[derive(Debug, Args)]
pub struct NmrArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Field strength scale B.
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Report {
    tool_version: &'static str,
    b: f64,
    steps: usize,
    check_points: usize,
    connection_closed_form_residual: f64,
    connection_finite_difference_residual: f64,
    m32_offdiagonal_max: f64,
    fixed_theta: f64,
    fixed_theta_commutator: f64,
    fixed_theta_ordering_residual: f64,
    varying_loops_commutator: f64,
    eigen_residual: f64,
    degeneracy: BTreeMap<String, usize>,
}

/// Deterministic low-discrepancy points in `(theta, varphi)`.
fn check_points() -> impl Iterator<Item = (f64, f64)> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (0..CHECK_POINTS).map(move |k| {
        let theta = 0.05 + (PI - 0.1) * (k as f64 + 0.5) / CHECK_POINTS as f64;
        let varphi = -PI + TAU * ((k as f64 * golden) % 1.0);
        (theta, varphi)
    })
}

fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut ev: Vec<f64> =
        DMatrix::from_fn(n, n, |r, c| m[(r, c)]).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Groups sorted eigenvalues that agree to `tol` (relative to the largest).
fn degeneracy(ev: &[f64], tol: f64) -> BTreeMap<String, usize> {
    let scale = ev.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for &e in ev {
        match groups.last_mut() {
            Some((rep, n)) if (e - *rep).abs() <= tol * scale => *n += 1,
            _ => groups.push((e, 1)),
        }
    }
    groups.into_iter().map(|(e, n)| (format!("{}", (e * 1e9).round() / 1e9), n)).collect()
}

pub fn run(args: &NmrArgs) -> Result<()> {
    let mut s = Settings::load(args.common.config.as_deref(), KEYS)?;
    let b = s.get("b", args.b, 1.0)?;
    let steps = s.get("steps", args.common.steps, DEFAULT_STEPS)?;
    let out = s.get("out", args.common.out.clone(), "-".to_string())?;
    config::check_steps(steps)?;
    if !b.is_finite() || b <= 0.0 {
        return Err(CliError::Config(format!("b must be positive, got {b}")));
    }

    let mut closed_form = 0.0f64;
    let mut finite_diff = 0.0f64;
    let mut m32_off = 0.0f64;
    let mut eigen_residual = 0.0f64;
    for (theta, varphi) in check_points() {
        let block = nqr::nqr_gauge_potential(theta, Sector::M12);
        let closed = nqr::m12_connection_closed_form(theta);
        closed_form = closed_form.max(block.theta.distance(&closed.theta)).max(block.varphi.distance(&closed.varphi));
        let fd = numeric_gauge_potential(nqr::sector_frame(Sector::M12), &[theta, varphi], FD_STEP)?;
        finite_diff = finite_diff.max(fd[0].distance(&closed.theta)).max(fd[1].distance(&closed.varphi));
        for a in nqr::nqr_gauge_potential(theta, Sector::M32).iter() {
            m32_off = m32_off.max(a[(0, 1)].norm()).max(a[(1, 0)].norm());
        }
        let p = NqrPoint::new(b, theta, varphi);
        let h = nqr::nqr_hamiltonian(&p);
        for (v, e) in nqr::nqr_frame(&p).iter().zip(nqr::frame_energies(&p)) {
            eigen_residual = eigen_residual.max(h.mul_vec(v).distance(&v.scale(e.into())));
        }
    }

    let theta = nqr::demo_theta();
    let loops = [nqr::latitude_loop(theta, 0.0, TAU, steps)?, nqr::latitude_loop(theta, 0.7, -0.6 * PI, steps)?];
    let fixed = [nqr::transport_m12(&loops[0], "latitude_full")?, nqr::transport_m12(&loops[1], "latitude_arc")?];
    let fixed_commutator = holonomy::commutator_norm(&fixed[0].matrix, &fixed[1].matrix);
    let mut ordering = 0.0f64;
    for (path, h) in loops.iter().zip(&fixed) {
        let sweep = path.last().varphi - path.first().varphi;
        ordering = ordering.max(h.matrix.distance(&nqr::fixed_theta_holonomy(theta.cos(), sweep)?));
    }
    let (a, bl) = nqr::default_demo_loops(steps)?;
    let demo = nqr::nqr_noncommutativity_demo(&a, &bl)?;

    let spectrum = eigenvalues(&nqr::nqr_hamiltonian_direct(&NqrPoint::new(b, 0.7, 1.3)));
    let report = Report {
        tool_version: output::VERSION,
        b,
        steps,
        check_points: CHECK_POINTS,
        connection_closed_form_residual: closed_form,
        connection_finite_difference_residual: finite_diff,
        m32_offdiagonal_max: m32_off,
        fixed_theta: theta,
        fixed_theta_commutator: fixed_commutator,
        fixed_theta_ordering_residual: ordering,
        varying_loops_commutator: demo.commutator_norm,
        eigen_residual,
        degeneracy: degeneracy(&spectrum, 1e-9),
    };
    output::write_json(&Sink::parse(&out), &report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_groups_close_values() {
        let d = degeneracy(&[0.25, 0.25 + 1e-13, 2.25, 2.25], 1e-9);
        assert_eq!(d.len(), 2);
        assert_eq!(d["0.25"], 2);
        assert_eq!(d["2.25"], 2);
    }

    #[test]
    fn check_points_stay_inside_the_chart() {
        for (t, v) in check_points() {
            assert!(t > 0.0 && t < PI);
            assert!((-PI..PI).contains(&v));
        }
    }
}
