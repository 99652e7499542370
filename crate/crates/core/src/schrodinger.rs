//! Full four-level dynamics `i d/dt psi = H(t) psi` under a pulse sequence,
//! integrated with classical fixed-step RK4.
//!
//! No renormalisation is applied: the norm drift is the convergence
//! diagnostic. Each integration step lies inside one schedule segment, so
//! the discontinuity where one loop hands over to the next falls exactly on a
//! step boundary.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy;
use crate::linalg::{c64, Complex64, ComplexMatrix, StateVector, ZERO};
use crate::tripod::{self, LoopSpec, ParamPoint, PulseTriple};

/// Norm drift beyond this aborts the run.
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Default step is at most `tau / DEFAULT_STEPS_PER_TAU`.
pub const DEFAULT_STEPS_PER_TAU: f64 = 20_000.0;
/// Default step keeps `peak Rabi frequency * dt` at or below this.
pub const DEFAULT_PHASE_PER_STEP: f64 = 0.02;
/// Stored samples per run when no stride is given.
const DEFAULT_SAMPLES: usize = 4000;

/// A time-dependent drive made of contiguous segments.
pub trait DriveSchedule {
    /// `[start, end)` windows in increasing order, each starting where the
    /// previous one ended.
    fn segments(&self) -> Vec<(f64, f64)>;

    fn pulses(&self, segment: usize, t: f64) -> PulseTriple;

    /// Control-space point used for the instantaneous frame.
    fn frame_point(&self, segment: usize, t: f64) -> ParamPoint;

    /// Upper bound on the total Rabi frequency.
    fn peak_rabi(&self) -> f64;

    /// Time scale used for the default step.
    fn time_scale(&self) -> f64;
}

/// Traversal order of the two loops of a composite path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    FirstThenSecond,
    SecondThenFirst,
}

/// Two loops run back to back: the leading loop on `[-tau, tau]`, the
/// trailing loop on `[tau, 3 tau]` with its proper time shifted by `2 tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeSchedule {
    pub first: LoopSpec,
    pub second: LoopSpec,
    pub order: Order,
    pub tau: f64,
}

impl CompositeSchedule {
    pub fn new(first: LoopSpec, second: LoopSpec, order: Order) -> Result<Self> {
        first.validate()?;
        second.validate()?;
        if first.tau != second.tau {
            return Err(Error::InvalidSpec(alloc::format!(
                "composite loops must share tau ({} vs {})",
                first.tau,
                second.tau
            )));
        }
        Ok(Self { first, second, order, tau: first.tau })
    }

    /// The loop traversed during `[-tau, tau]`.
    pub fn leading(&self) -> &LoopSpec {
        match self.order {
            Order::FirstThenSecond => &self.first,
            Order::SecondThenFirst => &self.second,
        }
    }

    /// The loop traversed during `[tau, 3 tau]`.
    pub fn trailing(&self) -> &LoopSpec {
        match self.order {
            Order::FirstThenSecond => &self.second,
            Order::SecondThenFirst => &self.first,
        }
    }

    fn segment_loop(&self, segment: usize) -> (&LoopSpec, f64) {
        if segment == 0 {
            (self.leading(), 0.0)
        } else {
            (self.trailing(), 2.0 * self.tau)
        }
    }

    fn normalized_time(&self, segment: usize, t: f64) -> (&LoopSpec, f64) {
        let (spec, offset) = self.segment_loop(segment);
        (spec, ((t - offset) / self.tau).clamp(-1.0, 1.0))
    }
}

impl DriveSchedule for CompositeSchedule {
    fn segments(&self) -> Vec<(f64, f64)> {
        vec![(-self.tau, self.tau), (self.tau, 3.0 * self.tau)]
    }

    fn pulses(&self, segment: usize, t: f64) -> PulseTriple {
        let (spec, u) = self.normalized_time(segment, t);
        tripod::pulses_normalized(spec, u)
    }

    fn frame_point(&self, segment: usize, t: f64) -> ParamPoint {
        let (spec, u) = self.normalized_time(segment, t);
        tripod::loop_point_normalized(spec, u)
    }

    fn peak_rabi(&self) -> f64 {
        self.first.peak_rabi_bound().max(self.second.peak_rabi_bound())
    }

    fn time_scale(&self) -> f64 {
        self.tau
    }
}

/// Time-independent pulses held for `duration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantDrive {
    pub pulses: PulseTriple,
    pub duration: f64,
}

impl DriveSchedule for ConstantDrive {
    fn segments(&self) -> Vec<(f64, f64)> {
        vec![(0.0, self.duration)]
    }

    fn pulses(&self, _segment: usize, _t: f64) -> PulseTriple {
        self.pulses
    }

    fn frame_point(&self, _segment: usize, _t: f64) -> ParamPoint {
        tripod::angles(&self.pulses).unwrap_or(ParamPoint::new(0.0, 0.0, 0.0).with_omega(0.0))
    }

    fn peak_rabi(&self) -> f64 {
        self.pulses.total()
    }

    fn time_scale(&self) -> f64 {
        self.duration
    }
}

/// Instantaneous populations of the dark and bright frame vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub d1: f64,
    pub d2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Populations {
    pub fn dark(&self) -> f64 {
        self.d1 + self.d2
    }

    pub fn bright(&self) -> f64 {
        self.b1 + self.b2
    }

    pub fn total(&self) -> f64 {
        self.dark() + self.bright()
    }
}

/// `|<frame_k|psi>|^2` for `(|D1>, |D2>, |B1>, |B2>)` at `p`.
pub fn project_populations(psi: &StateVector, p: &ParamPoint) -> Populations {
    let [d1, d2, b1, b2] = tripod::frame(p).map(|v| v.overlap_sqr(psi));
    Populations { d1, d2, b1, b2 }
}

/// Sampled solution of the Schrodinger equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub populations: Vec<Populations>,
    /// Maximum bright population over every integration step, not only the
    /// stored samples.
    pub max_bright: f64,
    pub max_norm_drift: f64,
    /// Step actually used (the requested step rounded to fit each segment).
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

/// Default step for a schedule: `min(T / 20000, 0.02 / peak Rabi frequency)`.
pub fn default_dt<S: DriveSchedule + ?Sized>(schedule: &S) -> f64 {
    let by_time = schedule.time_scale() / DEFAULT_STEPS_PER_TAU;
    let peak = schedule.peak_rabi();
    if peak > 0.0 {
        by_time.min(DEFAULT_PHASE_PER_STEP / peak)
    } else {
        by_time
    }
}

type State4 = [Complex64; 4];

#[inline]
fn deriv(p: &PulseTriple, psi: &State4) -> State4 {
    // -i H psi
    tripod::apply_hamiltonian(p, psi).map(|z| c64(z.im, -z.re))
}

#[inline]
fn axpy(y: &State4, a: f64, x: &State4) -> State4 {
    [y[0] + x[0] * a, y[1] + x[1] * a, y[2] + x[2] * a, y[3] + x[3] * a]
}

fn norm4(psi: &State4) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Integrates with the default sampling stride.
pub fn evolve<S: DriveSchedule + ?Sized>(schedule: &S, psi0: &StateVector, dt: f64) -> Result<Trajectory> {
    let total: f64 = schedule.segments().iter().map(|(a, b)| b - a).sum();
    let stride = ((total / dt) as usize / DEFAULT_SAMPLES).max(1);
    evolve_sampled(schedule, psi0, dt, stride)
}

/// Integrates, storing every `stride`-th step plus the endpoints.
pub fn evolve_sampled<S: DriveSchedule + ?Sized>(
    schedule: &S,
    psi0: &StateVector,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    if psi0.dim() != 4 {
        return Err(Error::Dimension(alloc::format!("initial state has dimension {}", psi0.dim())));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidSpec(alloc::format!("time step must be positive, got {dt}")));
    }
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSpec("initial state must be normalised".into()));
    }
    let stride = stride.max(1);
    let segments = schedule.segments();

    let mut psi: State4 = [psi0[0], psi0[1], psi0[2], psi0[3]];
    let start = segments[0].0;
    let p0 = schedule.frame_point(0, start);
    let pops0 = project_populations(psi0, &p0);

    let mut traj = Trajectory {
        times: vec![start],
        states: vec![psi0.clone()],
        populations: vec![pops0],
        max_bright: pops0.bright(),
        max_norm_drift: 0.0,
        dt,
        steps: 0,
    };

    let mut used_dt = dt;
    for (seg, &(a, b)) in segments.iter().enumerate() {
        let n = ((b - a) / dt).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        used_dt = used_dt.min(h);
        for k in 0..n {
            let t = a + h * k as f64;
            let t_half = t + 0.5 * h;
            let t_next = if k + 1 == n { b } else { a + h * (k + 1) as f64 };
            let p_start = schedule.pulses(seg, t);
            let p_half = schedule.pulses(seg, t_half);
            let p_end = schedule.pulses(seg, t_next);

            let k1 = deriv(&p_start, &psi);
            let k2 = deriv(&p_half, &axpy(&psi, 0.5 * h, &k1));
            let k3 = deriv(&p_half, &axpy(&psi, 0.5 * h, &k2));
            let k4 = deriv(&p_end, &axpy(&psi, h, &k3));
            for i in 0..4 {
                psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
            traj.steps += 1;

            let drift = (norm4(&psi) - 1.0).abs();
            traj.max_norm_drift = traj.max_norm_drift.max(drift);
            if drift > MAX_NORM_DRIFT {
                return Err(Error::StepSize { drift, dt: h });
            }

            let state = StateVector::new(psi.to_vec());
            let pops = project_populations(&state, &schedule.frame_point(seg, t_next));
            traj.max_bright = traj.max_bright.max(pops.bright());
            let last = seg + 1 == segments.len() && k + 1 == n;
            if traj.steps.is_multiple_of(stride) || last {
                traj.times.push(t_next);
                traj.states.push(state);
                traj.populations.push(pops);
            }
        }
    }
    traj.dt = used_dt;
    Ok(traj)
}

/// Full dynamics against the adiabatic holonomy prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticComparison {
    /// `|<psi_holonomy|psi_full>|^2` at the end of the composite path.
    pub fidelity: f64,
    /// Final bare `|1>` population from the full dynamics.
    pub p_full: f64,
    /// Final bare `|1>` population predicted by the holonomy.
    pub p_holonomy: f64,
    /// Largest bright-state population seen during the evolution.
    pub p_bright_max: f64,
    /// `U_trailing U_leading`.
    pub holonomy: ComplexMatrix,
    pub final_state: StateVector,
}

/// Initial state `|1>`, the `|D2>` dark state at the loop endpoints.
pub fn initial_state() -> StateVector {
    StateVector::basis(4, 1)
}

/// State predicted by the composite holonomy for the initial state `|1>`:
/// `-U_12 |2> + U_22 |1>`.
pub fn holonomy_prediction(u: &ComplexMatrix) -> StateVector {
    StateVector::new(vec![ZERO, u[(1, 1)], -u[(0, 1)], ZERO])
}

/// Compares an existing composite-schedule trajectory (started from `|1>`)
/// with the holonomy computed on `steps` grid points per loop.
pub fn compare_with_holonomy(
    schedule: &CompositeSchedule,
    trajectory: &Trajectory,
    steps: usize,
) -> Result<AdiabaticComparison> {
    let u_lead = holonomy::loop_holonomy(schedule.leading(), steps)?;
    let u_trail = holonomy::loop_holonomy(schedule.trailing(), steps)?;
    let u = &u_trail.matrix * &u_lead.matrix;
    let predicted = holonomy_prediction(&u);
    let final_state = trajectory.final_state().clone();
    Ok(AdiabaticComparison {
        fidelity: predicted.overlap_sqr(&final_state),
        p_full: final_state[1].norm_sqr(),
        p_holonomy: predicted[1].norm_sqr(),
        p_bright_max: trajectory.max_bright,
        holonomy: u,
        final_state,
    })
}

/// Runs the full dynamics from `|1>` and compares with the holonomy.
pub fn adiabatic_fidelity(schedule: &CompositeSchedule, steps: usize, dt: f64) -> Result<AdiabaticComparison> {
    let traj = evolve(schedule, &initial_state(), dt)?;
    compare_with_holonomy(schedule, &traj, steps)
}
