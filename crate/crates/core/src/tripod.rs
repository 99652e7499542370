//! The tripod atom: three ground states `|1>, |2>, |3>` resonantly coupled
//! to one excited state `|0>` by three pulsed lasers.
//!
//! Basis order is `(|0>, |1>, |2>, |3>)` everywhere. Units have hbar = 1, so
//! Rabi frequencies are angular frequencies in inverse time units.
//!
//! The two loops in control space share one pulse family:
//!
//! ```text
//! Omega1 = Omega0 f(t)
//! Omega2 = alpha Omega0 f(t)^2
//! Omega3 = Omega0 exp(-(t - beta tau)^2 / tau^2) exp(i pi t / tau)
//! f(t)   = cos(pi t / 2 tau) on [-tau, tau], 0 outside
//! ```
//!
//! with `alpha = 1, beta = 0` giving the reference loop C1.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy::GaugeComponents;
use crate::linalg::{c64, Complex64, ComplexMatrix, StateVector, I, ZERO};

/// Eigenvalue signs of `(|B1>, |B2>)` in units of the total Rabi frequency.
///
/// With `H = -(sum_i Omega_i |0><i|) + h.c.`, the bright state carrying
/// `+e^{i varphi}|0>` sits at `-Omega` and the one carrying `-e^{i varphi}|0>`
/// at `+Omega`.
pub const BRIGHT_EIGENVALUE_SIGNS: [f64; 2] = [-1.0, 1.0];

/// Relative slack on the loop window so that grid endpoints computed in
/// floating point still count as inside.
const WINDOW_SLACK: f64 = 1e-12;

/// Pulse-schedule parameters of one closed loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSpec {
    /// Rabi-frequency scale.
    pub omega0: f64,
    /// Half the loop duration.
    pub tau: f64,
    /// Scale of `Omega2` relative to the reference loop.
    pub alpha: f64,
    /// Delay of the `Omega3` envelope, in units of `tau`.
    pub beta: f64,
}

impl LoopSpec {
    pub fn new(omega0: f64, tau: f64, alpha: f64, beta: f64) -> Result<Self> {
        let spec = Self { omega0, tau, alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    /// Reference loop C1 (`alpha = 1`, `beta = 0`).
    pub fn c1(omega0: f64, tau: f64) -> Result<Self> {
        Self::new(omega0, tau, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.tau, self.alpha, self.beta].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidSpec("non-finite loop parameter".into()));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidSpec("omega0 must be positive".into()));
        }
        if self.tau <= 0.0 {
            return Err(Error::InvalidSpec("tau must be positive".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidSpec("alpha must be positive".into()));
        }
        if self.beta < 0.0 {
            return Err(Error::InvalidSpec("beta must be non-negative".into()));
        }
        Ok(())
    }

    /// Upper bound on the total Rabi frequency over the loop.
    pub fn peak_rabi_bound(&self) -> f64 {
        self.omega0 * (2.0 + self.alpha * self.alpha).sqrt()
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t.abs() > self.tau * (1.0 + WINDOW_SLACK) {
            return Err(Error::OutOfWindow { t, tau: self.tau });
        }
        Ok((t / self.tau).clamp(-1.0, 1.0))
    }
}

/// Instantaneous complex Rabi frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseTriple {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub omega3: Complex64,
}

impl PulseTriple {
    pub fn new(omega1: Complex64, omega2: Complex64, omega3: Complex64) -> Self {
        Self { omega1, omega2, omega3 }
    }

    /// Total Rabi frequency `sqrt(|O1|^2 + |O2|^2 + |O3|^2)`.
    pub fn total(&self) -> f64 {
        (self.omega1.norm_sqr() + self.omega2.norm_sqr() + self.omega3.norm_sqr()).sqrt()
    }
}

/// A point in control space: mixing angles, laser phase and total Rabi
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub theta: f64,
    pub phi: f64,
    /// Laser phase, kept unwrapped along a path.
    pub varphi: f64,
    pub omega: f64,
}

impl ParamPoint {
    pub fn new(theta: f64, phi: f64, varphi: f64) -> Self {
        Self { theta, phi, varphi, omega: 1.0 }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Pulses realising this point with `Omega1, Omega2` real and the phase on
    /// `Omega3`.
    pub fn pulses(&self) -> PulseTriple {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        PulseTriple::new(
            c64(self.omega * st * cp, 0.0),
            c64(self.omega * st * sp, 0.0),
            Complex64::from_polar(self.omega * ct, self.varphi),
        )
    }

    /// `[theta, phi, varphi]`.
    pub fn coords(&self) -> [f64; 3] {
        [self.theta, self.phi, self.varphi]
    }
}

/// The envelope `f` in normalised time `u = t / tau`.
fn envelope(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (FRAC_PI_2 * u).cos()
    }
}

pub(crate) fn pulses_normalized(spec: &LoopSpec, u: f64) -> PulseTriple {
    let f = envelope(u);
    let shift = u - spec.beta;
    PulseTriple::new(
        c64(spec.omega0 * f, 0.0),
        c64(spec.alpha * spec.omega0 * f * f, 0.0),
        Complex64::from_polar(spec.omega0 * (-shift * shift).exp(), PI * u),
    )
}

/// Rabi frequencies of the loop at proper time `t in [-tau, tau]`.
pub fn pulses(spec: &LoopSpec, t: f64) -> Result<PulseTriple> {
    let u = spec.check_time(t)?;
    Ok(pulses_normalized(spec, u))
}

/// Mixing angles from a pulse triple.
///
/// `varphi` is the principal argument of `Omega3`; paths unwrap it. When
/// `|Omega1| = |Omega2| = 0` the angle `phi` takes its limiting value 0 along
/// the loop schedules (`tan phi = alpha f -> 0`).
pub fn angles(p: &PulseTriple) -> Result<ParamPoint> {
    let (a1, a2, a3) = (p.omega1.norm(), p.omega2.norm(), p.omega3.norm());
    if a1 == 0.0 && a2 == 0.0 && a3 == 0.0 {
        return Err(Error::DegeneratePoint);
    }
    let phi = if a1 == 0.0 && a2 == 0.0 { 0.0 } else { a2.atan2(a1) };
    let theta = a1.hypot(a2).atan2(a3);
    Ok(ParamPoint { theta, phi, varphi: p.omega3.arg(), omega: p.total() })
}

/// Control-space point on the loop at normalised time `u = t / tau`.
///
/// `phi` comes from the schedule (`tan phi = alpha f(u)`), which is finite at
/// the endpoints where both `Omega1` and `Omega2` vanish, and `varphi = pi u`
/// is the unwrapped laser phase.
pub fn loop_point_normalized(spec: &LoopSpec, u: f64) -> ParamPoint {
    let p = pulses_normalized(spec, u);
    let f = envelope(u);
    let a1 = p.omega1.re;
    let a2 = p.omega2.re;
    ParamPoint {
        theta: a1.hypot(a2).atan2(p.omega3.norm()),
        phi: (spec.alpha * f).atan(),
        varphi: PI * u,
        omega: p.total(),
    }
}

/// Control-space point on the loop at proper time `t`.
pub fn loop_point(spec: &LoopSpec, t: f64) -> Result<ParamPoint> {
    let u = spec.check_time(t)?;
    Ok(loop_point_normalized(spec, u))
}

/// Atom-laser Hamiltonian `-(O1|0><1| + O2|0><2| + O3|0><3|) + h.c.`.
pub fn hamiltonian(p: &PulseTriple) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4, 4);
    for (k, &om) in [p.omega1, p.omega2, p.omega3].iter().enumerate() {
        h[(0, k + 1)] = -om;
        h[(k + 1, 0)] = -om.conj();
    }
    h
}

/// `H psi` without building the matrix.
#[inline]
pub fn apply_hamiltonian(p: &PulseTriple, psi: &[Complex64; 4]) -> [Complex64; 4] {
    [
        -(p.omega1 * psi[1] + p.omega2 * psi[2] + p.omega3 * psi[3]),
        -p.omega1.conj() * psi[0],
        -p.omega2.conj() * psi[0],
        -p.omega3.conj() * psi[0],
    ]
}

/// The two zero-energy states `(|D1>, |D2>)`:
///
/// ```text
/// |D1> = sin(phi) e^{i varphi}|1> - cos(phi) e^{i varphi}|2>
/// |D2> = cos(theta) cos(phi) e^{i varphi}|1> + cos(theta) sin(phi) e^{i varphi}|2> - sin(theta)|3>
/// ```
pub fn dark_states(p: &ParamPoint) -> (StateVector, StateVector) {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let e = Complex64::from_polar(1.0, p.varphi);
    let d1 = StateVector::new(vec![ZERO, e * sp, -e * cp, ZERO]);
    let d2 = StateVector::new(vec![ZERO, e * (ct * cp), e * (ct * sp), c64(-st, 0.0)]);
    (d1, d2)
}

/// The two bright states `(|B1>, |B2>)`, differing in the sign of their
/// excited-state amplitude; eigenvalues per [`BRIGHT_EIGENVALUE_SIGNS`].
pub fn bright_states(p: &ParamPoint) -> (StateVector, StateVector) {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let e = Complex64::from_polar(FRAC_1_SQRT_2, p.varphi);
    let common = [e * (st * cp), e * (st * sp), c64(FRAC_1_SQRT_2 * ct, 0.0)];
    let b1 = StateVector::new(vec![e, common[0], common[1], common[2]]);
    let b2 = StateVector::new(vec![-e, common[0], common[1], common[2]]);
    (b1, b2)
}

/// `(|D1>, |D2>, |B1>, |B2>)` at a point.
pub fn frame(p: &ParamPoint) -> [StateVector; 4] {
    let (d1, d2) = dark_states(p);
    let (b1, b2) = bright_states(p);
    [d1, d2, b1, b2]
}

/// Dark frame as a function of raw coordinates `[theta, phi, varphi]`, for
/// finite-difference connection estimates.
pub fn dark_frame(chi: &[f64]) -> Vec<StateVector> {
    let (d1, d2) = dark_states(&ParamPoint::new(chi[0], chi[1], chi[2]));
    vec![d1, d2]
}

/// Analytic dark-subspace connection `A_mu = <D_a| d_mu |D_b>`:
///
/// ```text
/// A_theta  = 0
/// A_phi    = [[0, -cos theta], [cos theta, 0]]
/// A_varphi = diag(i, i cos^2 theta)
/// ```
pub fn gauge_potential_tripod(theta: f64) -> GaugeComponents {
    let ct = theta.cos();
    let a_phi = ComplexMatrix::mat2(ZERO, c64(-ct, 0.0), c64(ct, 0.0), ZERO);
    let a_varphi = ComplexMatrix::mat2(I, ZERO, ZERO, I * (ct * ct));
    GaugeComponents::new(ComplexMatrix::zeros(2, 2), a_phi, a_varphi)
}

/// The same connection written as `i((1+cos^2)/2 I + sin^2/2 sigma_z) dvarphi - i sigma_y cos dphi`,
/// returned per component for cross-checking.
pub fn gauge_potential_tripod_pauli_form(theta: f64) -> GaugeComponents {
    let (st, ct) = theta.sin_cos();
    let a_varphi = &ComplexMatrix::identity(2).scale(I * ((1.0 + ct * ct) / 2.0))
        + &crate::linalg::pauli_z().scale(I * (st * st / 2.0));
    let a_phi = crate::linalg::pauli_y().scale(-I * ct);
    GaugeComponents::new(ComplexMatrix::zeros(2, 2), a_phi, a_varphi)
}

/// Projectors onto the four frame vectors summed; the identity when the frame
/// is complete.
pub fn frame_resolution(p: &ParamPoint) -> ComplexMatrix {
    frame(p)
        .iter()
        .fold(ComplexMatrix::zeros(4, 4), |acc, v| &acc + &ComplexMatrix::outer(v, v))
}
