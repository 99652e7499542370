//! Parallel transport of a degenerate eigenframe along parameter paths.
//!
//! A path is sampled at increasing `s in [0, 1]`; each interval contributes
//! a factor `exp(-(A_theta dtheta + A_phi dphi + A_varphi dvarphi))` with the
//! connection evaluated at the interval midpoint, and later factors multiply
//! from the left. This exponential midpoint rule is second order in the step
//! and exactly unitary for an antihermitian connection, so the product is a
//! discrete path-ordered exponential.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix, StateVector};
use crate::tripod::{self, LoopSpec, ParamPoint};

/// Default number of grid points along one loop.
pub const DEFAULT_STEPS: usize = 20_001;
/// A holonomy whose unitarity defect exceeds this is flagged unconverged.
pub const UNITARITY_TOL: f64 = 1e-8;
/// Step-doubling stops once successive holonomies are this close.
pub const REFINE_TOL: f64 = 1e-9;
pub const MAX_REFINEMENTS: usize = 4;
/// Overlap defect above which neighbouring frames are considered gauge-jumped.
const GAUGE_JUMP_TOL: f64 = 0.1;

/// Connection components along `(theta, phi, varphi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeComponents {
    pub theta: ComplexMatrix,
    pub phi: ComplexMatrix,
    pub varphi: ComplexMatrix,
}

impl GaugeComponents {
    pub fn new(theta: ComplexMatrix, phi: ComplexMatrix, varphi: ComplexMatrix) -> Self {
        Self { theta, phi, varphi }
    }

    pub fn dim(&self) -> usize {
        self.theta.rows()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        [&self.theta, &self.phi, &self.varphi].into_iter()
    }

    pub fn map(&self, mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self::new(f(&self.theta), f(&self.phi), f(&self.varphi))
    }

    /// `A_theta dtheta + A_phi dphi + A_varphi dvarphi`.
    pub fn contract(&self, d_theta: f64, d_phi: f64, d_varphi: f64) -> ComplexMatrix {
        let mut g = self.theta.scale_re(d_theta);
        g = &g + &self.phi.scale_re(d_phi);
        &g + &self.varphi.scale_re(d_varphi)
    }
}

/// A sampled path in control space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPath {
    samples: Vec<(f64, ParamPoint)>,
}

impl ParamPath {
    /// Builds a path from `(s, point)` samples; `s` must rise strictly from 0
    /// to 1.
    pub fn new(samples: Vec<(f64, ParamPoint)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSpec("a path needs at least two samples".into()));
        }
        if samples[0].0 != 0.0 || samples[samples.len() - 1].0 != 1.0 {
            return Err(Error::InvalidSpec("path parameter must run from 0 to 1".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSpec("path parameter must increase strictly".into()));
        }
        Ok(Self { samples })
    }

    /// Samples `curve` on `n` uniformly spaced values of `s`.
    pub fn sample(n: usize, mut curve: impl FnMut(f64) -> ParamPoint) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 samples, got {n}")));
        }
        let last = (n - 1) as f64;
        let samples = (0..n)
            .map(|k| {
                let s = if k == n - 1 { 1.0 } else { k as f64 / last };
                (s, curve(s))
            })
            .collect();
        Self::new(samples)
    }

    /// The loop of `spec` on a uniform time grid of `n` points.
    pub fn for_loop(spec: &LoopSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        Self::sample(n, |s| tripod::loop_point_normalized(spec, 2.0 * s - 1.0))
    }

    pub fn samples(&self) -> &[(f64, ParamPoint)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &ParamPoint {
        &self.samples[0].1
    }

    pub fn last(&self) -> &ParamPoint {
        &self.samples[self.samples.len() - 1].1
    }

    /// First and last points agree in `(theta, phi)` and the laser phase has
    /// wound by a whole number of turns.
    pub fn is_closed(&self) -> bool {
        let (a, b) = (self.first(), self.last());
        let turns = (b.varphi - a.varphi) / TAU;
        (a.theta - b.theta).abs() <= 1e-12
            && (a.phi - b.phi).abs() <= 1e-12
            && (turns - turns.round()).abs() <= 1e-9
    }

    /// The same geometric path traversed backwards.
    pub fn reversed(&self) -> Self {
        let samples = self.samples.iter().rev().map(|&(s, p)| (1.0 - s, p)).collect();
        Self { samples }
    }
}

/// Transport result over a (typically closed) path.
#[derive(Debug, Clone, PartialEq)]
pub struct Holonomy {
    pub matrix: ComplexMatrix,
    /// Number of path samples used.
    pub steps: usize,
    pub unitarity_defect: f64,
    pub label: String,
    pub converged: bool,
}

impl Holonomy {
    pub fn new(matrix: ComplexMatrix, steps: usize, label: impl Into<String>) -> Self {
        let unitarity_defect = linalg::unitarity_defect(&matrix);
        Self {
            matrix,
            steps,
            unitarity_defect,
            label: label.into(),
            converged: unitarity_defect <= UNITARITY_TOL,
        }
    }
}

fn midpoint(a: &ParamPoint, b: &ParamPoint) -> ParamPoint {
    ParamPoint {
        theta: 0.5 * (a.theta + b.theta),
        phi: 0.5 * (a.phi + b.phi),
        varphi: 0.5 * (a.varphi + b.varphi),
        omega: 0.5 * (a.omega + b.omega),
    }
}

/// Path-ordered exponential of `-A` along `path`.
pub fn transport<F>(path: &ParamPath, potential: F, label: &str) -> Holonomy
where
    F: Fn(&ParamPoint) -> GaugeComponents,
{
    let samples = path.samples();
    let dim = potential(&samples[0].1).dim();
    let mut u = ComplexMatrix::identity(dim);
    for w in samples.windows(2) {
        let (a, b) = (&w[0].1, &w[1].1);
        let gen = potential(&midpoint(a, b)).contract(
            b.theta - a.theta,
            b.phi - a.phi,
            b.varphi - a.varphi,
        );
        let step = linalg::expm(&gen.scale_re(-1.0)).expect("connection components are square");
        u = &step * &u;
    }
    Holonomy::new(u, samples.len(), label)
}

/// Transports a continuous curve, doubling the number of intervals until two
/// successive holonomies agree to [`REFINE_TOL`] (at most [`MAX_REFINEMENTS`]
/// refinements).
pub fn transport_converged<C, F>(curve: C, potential: F, steps: usize, label: &str) -> Result<Holonomy>
where
    C: Fn(f64) -> ParamPoint,
    F: Fn(&ParamPoint) -> GaugeComponents,
{
    let mut n = steps.max(2);
    let mut current = transport(&ParamPath::sample(n, &curve)?, &potential, label);
    let mut difference = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        n = 2 * (n - 1) + 1;
        let finer = transport(&ParamPath::sample(n, &curve)?, &potential, label);
        difference = finer.matrix.distance(&current.matrix);
        current = finer;
        if difference < REFINE_TOL && current.converged {
            return Ok(current);
        }
    }
    Err(Error::Unconverged { difference, defect: current.unitarity_defect, steps: n })
}

fn loop_label(spec: &LoopSpec) -> String {
    format!("alpha={},beta={}", spec.alpha, spec.beta)
}

/// Holonomy of one tripod loop with the analytic dark-state connection.
pub fn loop_holonomy(spec: &LoopSpec, steps: usize) -> Result<Holonomy> {
    let path = ParamPath::for_loop(spec, steps)?;
    Ok(transport(&path, |p| tripod::gauge_potential_tripod(p.theta), &loop_label(spec)))
}

/// [`loop_holonomy`] under the step-doubling convergence policy.
pub fn converged_loop_holonomy(spec: &LoopSpec, steps: usize) -> Result<Holonomy> {
    spec.validate()?;
    transport_converged(
        |s| tripod::loop_point_normalized(spec, 2.0 * s - 1.0),
        |p| tripod::gauge_potential_tripod(p.theta),
        steps,
        &loop_label(spec),
    )
}

/// Bare-state populations after the two composite orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationDifference {
    /// `|(U2 U1)_22|^2`: first loop 1, then loop 2.
    pub p: f64,
    /// `|(U1 U2)_22|^2`: first loop 2, then loop 1.
    pub p_prime: f64,
    /// `p_prime - p`.
    pub p_d: f64,
}

/// Population-difference observable for two loop holonomies. The `(2,2)`
/// entry is the `|D2> -> |D2>` amplitude.
pub fn population_difference(u1: &ComplexMatrix, u2: &ComplexMatrix) -> PopulationDifference {
    let forward = u2 * u1;
    let backward = u1 * u2;
    let p = forward[(1, 1)].norm_sqr();
    let p_prime = backward[(1, 1)].norm_sqr();
    PopulationDifference { p, p_prime, p_d: p_prime - p }
}

/// `||U2 U1 - U1 U2||_F`.
pub fn commutator_norm(u1: &ComplexMatrix, u2: &ComplexMatrix) -> f64 {
    linalg::commutator_norm(u2, u1)
}

/// Central-difference estimate of `A_{ab mu} = <eta_a| d_mu |eta_b>` for a
/// frame given as a function of raw coordinates, one matrix per coordinate.
pub fn numeric_gauge_potential<F>(frame: F, chi: &[f64], h: f64) -> Result<Vec<ComplexMatrix>>
where
    F: Fn(&[f64]) -> Vec<StateVector>,
{
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidSpec(format!("finite-difference step must be positive, got {h}")));
    }
    let centre = frame(chi);
    let n = centre.len();
    let mut shifted = chi.to_vec();
    let mut out = Vec::with_capacity(chi.len());
    for mu in 0..chi.len() {
        shifted[mu] = chi[mu] + h;
        let plus = frame(&shifted);
        shifted[mu] = chi[mu] - h;
        let minus = frame(&shifted);
        shifted[mu] = chi[mu];
        if plus.len() != n || minus.len() != n {
            return Err(Error::Dimension("frame size changed between evaluations".into()));
        }
        for side in [&plus, &minus] {
            let overlap = ComplexMatrix::from_fn(n, n, |a, b| centre[a].inner(&side[b]));
            let defect = overlap.distance(&ComplexMatrix::identity(n));
            if defect > GAUGE_JUMP_TOL {
                return Err(Error::GaugeJump { defect });
            }
        }
        out.push(ComplexMatrix::from_fn(n, n, |a, b| {
            (centre[a].inner(&plus[b]) - centre[a].inner(&minus[b])) * c64(0.5 / h, 0.0)
        }));
    }
    Ok(out)
}
