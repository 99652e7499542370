//! Spin-3/2 nuclear quadrupole resonance in a rotating field.
//!
//! `H = B^2 (S.n)^2` with `n = (sin theta cos varphi, sin theta sin varphi,
//! cos theta)` has two doubly degenerate levels, `m = +-3/2` and
//! `m = +-1/2`. Its eigenframe is `|eta_a> = e^{-i varphi S_z} e^{-i theta S_y} |a>`
//! and the Wilczek-Zee connection on each pair is the corresponding 2x2 block
//! of
//!
//! ```text
//! A_varphi = -i (cos theta S_z - sin theta S_x)
//! A_theta  = -i S_y
//! ```
//!
//! The `+-3/2` block is diagonal for every `theta` (Abelian); the `+-1/2`
//! block is not. On the `+-1/2` pair the blocks read
//! `A_varphi = -i (cos theta sigma_z / 2 - sin theta sigma_x)` and
//! `A_theta = -i sigma_y`.
//!
//! Paths here live in the `(theta, varphi)` plane; the tripod angle `phi` of
//! [`ParamPoint`] is unused and held at zero.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy::{self, GaugeComponents, Holonomy, ParamPath};
use crate::linalg::{self, c64, ComplexMatrix, StateVector, I, ZERO};
use crate::tripod::ParamPoint;

/// Spin operators in the `S_z` eigenbasis ordered `m = s, s-1, ..., -s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

impl SpinOperators {
    /// Spin `two_s / 2`.
    pub fn new(two_s: usize) -> Self {
        let n = two_s + 1;
        let s = two_s as f64 / 2.0;
        let m = |k: usize| s - k as f64;
        // <m+1| S+ |m> = sqrt(s(s+1) - m(m+1)); row k-1 holds m(k)+1.
        let raise = ComplexMatrix::from_fn(n, n, |r, c| {
            if c == r + 1 {
                c64((s * (s + 1.0) - m(c) * (m(c) + 1.0)).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let lower = raise.adjoint();
        Self {
            sx: (&raise + &lower).scale_re(0.5),
            sy: (&raise - &lower).scale(c64(0.0, -0.5)),
            sz: ComplexMatrix::diagonal(&(0..n).map(|k| c64(m(k), 0.0)).collect::<Vec<_>>()),
        }
    }

    pub fn three_halves() -> Self {
        Self::new(3)
    }

    pub fn dim(&self) -> usize {
        self.sz.rows()
    }

    /// `S_x^2 + S_y^2 + S_z^2`.
    pub fn casimir(&self) -> ComplexMatrix {
        let sq = |m: &ComplexMatrix| m * m;
        &(&sq(&self.sx) + &sq(&self.sy)) + &sq(&self.sz)
    }
}

/// Field magnitude and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NqrPoint {
    pub b: f64,
    pub theta: f64,
    pub varphi: f64,
}

impl NqrPoint {
    pub fn new(b: f64, theta: f64, varphi: f64) -> Self {
        Self { b, theta, varphi }
    }
}

/// A degenerate pair of the spin-3/2 quadrupole levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `(|3/2>, |-3/2>)`.
    M32,
    /// `(|1/2>, |-1/2>)`.
    M12,
}

impl Sector {
    /// Positions of the pair in the `(3/2, 1/2, -1/2, -3/2)` basis.
    pub fn indices(self) -> [usize; 2] {
        match self {
            Sector::M32 => [0, 3],
            Sector::M12 => [1, 2],
        }
    }

    /// Energy in units of `B^2`.
    pub fn energy(self) -> f64 {
        match self {
            Sector::M32 => 2.25,
            Sector::M12 => 0.25,
        }
    }
}

/// `e^{-i varphi S_z} e^{-i theta S_y}`.
pub fn rotation(spin: &SpinOperators, theta: f64, varphi: f64) -> ComplexMatrix {
    let phase: Vec<_> = (0..spin.dim())
        .map(|k| {
            let m = spin.sz[(k, k)].re;
            c64(0.0, -varphi * m).exp()
        })
        .collect();
    let polar = linalg::mat_exp(&spin.sy.scale(c64(0.0, -theta))).expect("spin operators are square and small");
    &ComplexMatrix::diagonal(&phase) * &polar
}

/// `B^2 R S_z^2 R^dagger` with `R` from [`rotation`].
pub fn nqr_hamiltonian(p: &NqrPoint) -> ComplexMatrix {
    let spin = SpinOperators::three_halves();
    let r = rotation(&spin, p.theta, p.varphi);
    let sz2 = &spin.sz * &spin.sz;
    (&(&r * &sz2) * &r.adjoint()).scale_re(p.b * p.b)
}

/// `B^2 (S.n)^2` assembled directly from the field direction.
pub fn nqr_hamiltonian_direct(p: &NqrPoint) -> ComplexMatrix {
    let spin = SpinOperators::three_halves();
    let (st, ct) = p.theta.sin_cos();
    let (sv, cv) = p.varphi.sin_cos();
    let sn = &(&spin.sx.scale_re(st * cv) + &spin.sy.scale_re(st * sv)) + &spin.sz.scale_re(ct);
    (&sn * &sn).scale_re(p.b * p.b)
}

/// The rotated basis `|eta_a>`, in the order `(3/2, 1/2, -1/2, -3/2)`.
pub fn nqr_frame(p: &NqrPoint) -> [StateVector; 4] {
    let r = rotation(&SpinOperators::three_halves(), p.theta, p.varphi);
    core::array::from_fn(|c| StateVector::new((0..4).map(|row| r[(row, c)]).collect()))
}

/// Frame vectors of one sector as a function of `[theta, varphi]`, for
/// finite-difference connection estimates.
pub fn sector_frame(sector: Sector) -> impl Fn(&[f64]) -> Vec<StateVector> {
    move |chi: &[f64]| {
        let frame = nqr_frame(&NqrPoint::new(1.0, chi[0], chi[1]));
        sector.indices().iter().map(|&k| frame[k].clone()).collect()
    }
}

/// Full 4x4 connection `(A_theta, A_varphi)` in the rotated frame.
pub fn nqr_connection_full(theta: f64) -> (ComplexMatrix, ComplexMatrix) {
    let spin = SpinOperators::three_halves();
    let (st, ct) = theta.sin_cos();
    let a_theta = spin.sy.scale(-I);
    let a_varphi = (&spin.sz.scale_re(ct) - &spin.sx.scale_re(st)).scale(-I);
    (a_theta, a_varphi)
}

/// Connection restricted to one degenerate pair. The `phi` slot is zero.
pub fn nqr_gauge_potential(theta: f64, sector: Sector) -> GaugeComponents {
    let (a_theta, a_varphi) = nqr_connection_full(theta);
    let idx = sector.indices();
    GaugeComponents::new(a_theta.select(&idx), ComplexMatrix::zeros(2, 2), a_varphi.select(&idx))
}

/// Closed form of the `+-1/2` block:
/// `A = -i[(cos theta sigma_z / 2 - (a/2) sin theta sigma_x) dvarphi + (a/2) sigma_y dtheta]`
/// with `a = S + 1/2 = 2`.
pub fn m12_connection_closed_form(theta: f64) -> GaugeComponents {
    let spin = 1.5;
    let half_alpha = (spin + 0.5) / 2.0;
    let (st, ct) = theta.sin_cos();
    let a_varphi = (&linalg::pauli_z().scale_re(0.5 * ct) - &linalg::pauli_x().scale_re(half_alpha * st)).scale(-I);
    let a_theta = linalg::pauli_y().scale(-I * half_alpha);
    GaugeComponents::new(a_theta, ComplexMatrix::zeros(2, 2), a_varphi)
}

/// Holonomy of a fixed-`theta` excursion of the field azimuth on the
/// `+-1/2` pair, `exp(-dvarphi A_varphi(theta))`. The generator is constant
/// along such a path, so no ordering is needed.
pub fn fixed_theta_holonomy(cos_theta: f64, delta_varphi: f64) -> Result<ComplexMatrix> {
    if cos_theta.is_nan() || cos_theta.abs() > 1.0 {
        return Err(Error::InvalidSpec(alloc::format!("cos(theta) = {cos_theta} out of range")));
    }
    let a = nqr_gauge_potential(cos_theta.acos(), Sector::M12);
    linalg::exp2(&a.varphi.scale_re(-delta_varphi))
}

fn nqr_point(theta: f64, varphi: f64) -> ParamPoint {
    ParamPoint::new(theta, 0.0, varphi)
}

/// Latitude circle at fixed `theta`, azimuth `varphi0 -> varphi0 + sweep`.
pub fn latitude_loop(theta: f64, varphi0: f64, sweep: f64, n: usize) -> Result<ParamPath> {
    ParamPath::sample(n, |s| nqr_point(theta, varphi0 + sweep * s))
}

/// Ellipse in the `(theta, varphi)` plane, traversed once anticlockwise.
pub fn ellipse_loop(theta_c: f64, varphi_c: f64, semi_theta: f64, semi_varphi: f64, n: usize) -> Result<ParamPath> {
    ParamPath::sample(n, |s| {
        let (sa, ca) = (core::f64::consts::TAU * s).sin_cos();
        nqr_point(theta_c + semi_theta * ca, varphi_c + semi_varphi * sa)
    })
}

/// Polar angle of the default fixed-`theta` loops, `cos theta = 1/sqrt(3)`.
pub fn demo_theta() -> f64 {
    (1.0 / 3f64.sqrt()).acos()
}

/// Default loop pair with both coordinates varying along the second loop:
/// a full latitude circle and an ellipse around `(pi/3, pi/2)`.
pub fn default_demo_loops(n: usize) -> Result<(ParamPath, ParamPath)> {
    let a = latitude_loop(demo_theta(), 0.0, core::f64::consts::TAU, n)?;
    let b = ellipse_loop(core::f64::consts::FRAC_PI_3, core::f64::consts::FRAC_PI_2, 0.4, 1.0, n)?;
    Ok((a, b))
}

/// Holonomies of two loops on the `+-1/2` pair and their commutator norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NqrDemo {
    pub commutator_norm: f64,
    pub ua: Holonomy,
    pub ub: Holonomy,
}

pub fn transport_m12(path: &ParamPath, label: &str) -> Result<Holonomy> {
    let h = holonomy::transport(path, |p| nqr_gauge_potential(p.theta, Sector::M12), label);
    if !h.converged {
        return Err(Error::Unconverged { difference: f64::NAN, defect: h.unitarity_defect, steps: h.steps });
    }
    Ok(h)
}

pub fn nqr_noncommutativity_demo(loop_a: &ParamPath, loop_b: &ParamPath) -> Result<NqrDemo> {
    let ua = transport_m12(loop_a, "loop_a")?;
    let ub = transport_m12(loop_b, "loop_b")?;
    Ok(NqrDemo { commutator_norm: holonomy::commutator_norm(&ua.matrix, &ub.matrix), ua, ub })
}

/// Energies `<eta_a|H|eta_a>` of the rotated frame, in frame order.
pub fn frame_energies(p: &NqrPoint) -> [f64; 4] {
    let h = nqr_hamiltonian(p);
    let frame = nqr_frame(p);
    core::array::from_fn(|k| frame[k].inner(&h.mul_vec(&frame[k])).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::numeric_gauge_potential;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, PI, TAU};

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed ^ 0xD1B5_4A32_D192_ED03;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn spin_algebra() {
        let s = SpinOperators::three_halves();
        // [Sx, Sy] = i Sz and cyclic
        assert!(s.sx.commutator(&s.sy).distance(&s.sz.scale(I)) < 1e-14);
        assert!(s.sy.commutator(&s.sz).distance(&s.sx.scale(I)) < 1e-14);
        assert!(s.sz.commutator(&s.sx).distance(&s.sy.scale(I)) < 1e-14);
        assert!(s.casimir().distance(&ComplexMatrix::identity(4).scale_re(3.75)) < 1e-14);
        let diag: Vec<f64> = (0..4).map(|k| s.sz[(k, k)].re).collect();
        assert_eq!(diag, vec![1.5, 0.5, -0.5, -1.5]);
    }

    #[test]
    fn hamiltonian_at_north_pole_is_sz_squared() {
        let h = nqr_hamiltonian(&NqrPoint::new(2.0, 0.0, 0.7));
        let expected = ComplexMatrix::diagonal(&[c64(9.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(9.0, 0.0)]);
        assert!(h.distance(&expected) < 1e-13);
    }

    #[test]
    fn two_hamiltonian_constructions_agree() {
        let mut rng = lcg(3);
        for _ in 0..50 {
            let p = NqrPoint::new(0.5 + rng(), PI * rng(), TAU * (rng() - 0.5) * 2.0);
            let a = nqr_hamiltonian(&p);
            let b = nqr_hamiltonian_direct(&p);
            assert!(a.is_hermitian(1e-13));
            assert!(a.distance(&b) < 1e-12, "{}", a.distance(&b));
        }
    }

    #[test]
    fn frame_diagonalises_hamiltonian() {
        let mut rng = lcg(5);
        for _ in 0..50 {
            let p = NqrPoint::new(0.3 + 2.0 * rng(), PI * rng(), TAU * rng());
            let h = nqr_hamiltonian(&p);
            let frame = nqr_frame(&p);
            let energies = [2.25, 0.25, 0.25, 2.25];
            for (eta, e) in frame.iter().zip(energies) {
                let r = h.mul_vec(eta).distance(&eta.scale(c64(e * p.b * p.b, 0.0)));
                assert!(r <= 1e-12 * (1.0 + p.b * p.b), "{r}");
            }
            for a in 0..4 {
                for b in 0..4 {
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((frame[a].inner(&frame[b]) - c64(expect, 0.0)).norm() < 1e-13);
                }
            }
        }
        let frame = nqr_frame(&NqrPoint::new(1.0, 0.0, 0.0));
        for (k, v) in frame.iter().enumerate() {
            assert!(v.distance(&StateVector::basis(4, k)) < 1e-15);
        }
    }

    #[test]
    fn m32_block_is_diagonal_for_every_theta() {
        for k in 0..=40 {
            let a = nqr_gauge_potential(PI * k as f64 / 40.0, Sector::M32);
            for m in [&a.theta, &a.varphi] {
                assert_eq!(m[(0, 1)], ZERO);
                assert_eq!(m[(1, 0)], ZERO);
            }
        }
    }

    #[test]
    fn m12_block_at_theta_zero() {
        let a = nqr_gauge_potential(0.0, Sector::M12);
        assert!(a.varphi.distance(&linalg::pauli_z().scale(c64(0.0, -0.5))) < 1e-15);
        assert!(a.theta.distance(&linalg::pauli_y().scale(-I)) < 1e-15);
    }

    #[test]
    fn m12_block_matches_closed_form_and_offdiagonal_magnitude() {
        for k in 0..=40 {
            let theta = PI * k as f64 / 40.0;
            let a = nqr_gauge_potential(theta, Sector::M12);
            let b = m12_connection_closed_form(theta);
            assert!(a.theta.distance(&b.theta) < 1e-14);
            assert!(a.varphi.distance(&b.varphi) < 1e-14);
        }
        let a = nqr_gauge_potential(FRAC_PI_2, Sector::M12);
        assert!((a.varphi[(0, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn connection_matches_finite_differences() {
        let mut rng = lcg(11);
        for _ in 0..50 {
            let theta = 0.05 + (PI - 0.1) * rng();
            let varphi = TAU * rng();
            for sector in [Sector::M12, Sector::M32] {
                let fd = numeric_gauge_potential(sector_frame(sector), &[theta, varphi], 1e-5).unwrap();
                let exact = nqr_gauge_potential(theta, sector);
                assert!(fd[0].distance(&exact.theta) < 1e-6);
                assert!(fd[1].distance(&exact.varphi) < 1e-6);
            }
        }
    }

    #[test]
    fn fixed_theta_holonomy_is_identity_without_sweep() {
        let u = fixed_theta_holonomy(1.0 / 3f64.sqrt(), 0.0).unwrap();
        assert!(u.distance(&ComplexMatrix::identity(2)) < 1e-15);
        assert!(fixed_theta_holonomy(1.5, 1.0).is_err());
    }

    #[test]
    fn fixed_theta_holonomy_matches_ordered_transport() {
        let c = 1.0 / 3f64.sqrt();
        for sweep in [TAU, 1.3, -4.0] {
            let path = latitude_loop(c.acos(), 0.2, sweep, 2001).unwrap();
            let ordered = transport_m12(&path, "lat").unwrap();
            let closed = fixed_theta_holonomy(c, sweep).unwrap();
            assert!(ordered.matrix.distance(&closed) < 1e-10);
        }
    }

    #[test]
    fn fixed_theta_holonomies_commute() {
        let c = 0.3;
        let a = fixed_theta_holonomy(c, 1.0).unwrap();
        let b = fixed_theta_holonomy(c, 2.7).unwrap();
        assert!(holonomy::commutator_norm(&a, &b) < 1e-12);
    }

    #[test]
    fn varying_loops_do_not_commute() {
        let (a, b) = default_demo_loops(4001).unwrap();
        let demo = nqr_noncommutativity_demo(&a, &b).unwrap();
        assert!(demo.commutator_norm > 1e-3, "{}", demo.commutator_norm);
    }

    #[test]
    fn loop_and_its_reverse_commute() {
        let (_, b) = default_demo_loops(2001).unwrap();
        let demo = nqr_noncommutativity_demo(&b, &b.reversed()).unwrap();
        assert!(demo.commutator_norm < 1e-12);
    }

    #[test]
    fn frame_energies_are_pairwise_degenerate() {
        let e = frame_energies(&NqrPoint::new(1.2, 0.9, 2.0));
        let b2 = 1.44;
        assert!((e[0] - 2.25 * b2).abs() < 1e-12 && (e[3] - 2.25 * b2).abs() < 1e-12);
        assert!((e[1] - 0.25 * b2).abs() < 1e-12 && (e[2] - 0.25 * b2).abs() < 1e-12);
    }
}
