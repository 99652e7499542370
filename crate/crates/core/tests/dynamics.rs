use geophase_core::holonomy::{loop_holonomy, population_difference, DEFAULT_STEPS};
use geophase_core::linalg::{c64, mat_exp, StateVector};
use geophase_core::schrodinger::{
    adiabatic_fidelity, default_dt, evolve, evolve_sampled, initial_state, CompositeSchedule, ConstantDrive, Order,
};
use geophase_core::tripod::{self, LoopSpec, ParamPoint};

fn headline(omega0: f64, tau: f64, order: Order) -> CompositeSchedule {
    CompositeSchedule::new(
        LoopSpec::c1(omega0, tau).unwrap(),
        LoopSpec::new(omega0, tau, 7.0, 0.5).unwrap(),
        order,
    )
    .unwrap()
}

#[test]
fn fidelity_improves_towards_the_adiabatic_limit() {
    let slow = headline(100.0, 2.0, Order::FirstThenSecond);
    let fast = headline(1000.0, 2.0, Order::FirstThenSecond);
    let a = adiabatic_fidelity(&slow, DEFAULT_STEPS, default_dt(&slow)).unwrap();
    let b = adiabatic_fidelity(&fast, DEFAULT_STEPS, default_dt(&fast)).unwrap();
    assert!(b.fidelity > a.fidelity, "{} vs {}", b.fidelity, a.fidelity);
    assert!(b.fidelity >= 0.98);
    assert!(b.p_bright_max <= 0.01);
    assert!((b.p_full - b.p_holonomy).abs() <= 0.02);
    assert!((a.p_full - a.p_holonomy).abs() <= 0.02);
}

#[test]
fn longer_pulses_match_stronger_pulses() {
    // Only the product Omega0 * tau enters the dynamics.
    let a = headline(500.0, 2.0, Order::FirstThenSecond);
    let b = headline(100.0, 10.0, Order::FirstThenSecond);
    let fa = evolve(&a, &initial_state(), default_dt(&a)).unwrap();
    let fb = evolve(&b, &initial_state(), default_dt(&b)).unwrap();
    assert!(fa.final_state().overlap_sqr(fb.final_state()) > 1.0 - 1e-8);
}

#[test]
fn reversed_order_realises_the_swapped_product() {
    let spec1 = LoopSpec::c1(1000.0, 2.0).unwrap();
    let spec2 = LoopSpec::new(1000.0, 2.0, 7.0, 0.5).unwrap();
    let u1 = loop_holonomy(&spec1, DEFAULT_STEPS).unwrap().matrix;
    let u2 = loop_holonomy(&spec2, DEFAULT_STEPS).unwrap().matrix;
    let pd = population_difference(&u1, &u2);
    let sched = CompositeSchedule::new(spec1, spec2, Order::SecondThenFirst).unwrap();
    let cmp = adiabatic_fidelity(&sched, DEFAULT_STEPS, default_dt(&sched)).unwrap();
    assert!((cmp.p_holonomy - pd.p_prime).abs() < 1e-12);
    assert!((cmp.p_full - pd.p_prime).abs() < 0.02);
}

#[test]
fn default_step_keeps_norm_and_populations_tight() {
    let sched = headline(100.0, 2.0, Order::FirstThenSecond);
    let traj = evolve(&sched, &initial_state(), default_dt(&sched)).unwrap();
    assert!(traj.max_norm_drift <= 1e-7, "drift {}", traj.max_norm_drift);
    for (psi, pops) in traj.states.iter().zip(&traj.populations) {
        assert!((psi.norm() - 1.0).abs() <= 1e-8);
        assert!((pops.total() - 1.0).abs() <= 1e-8);
    }
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(traj.times.first().copied(), Some(-2.0));
    assert!((traj.times.last().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn trivial_dark_drive_leaves_the_state_alone() {
    let p = ParamPoint::new(0.0, 0.0, 0.3).with_omega(100.0);
    let drive = ConstantDrive { pulses: p.pulses(), duration: 4.0 };
    let traj = evolve(&drive, &initial_state(), default_dt(&drive)).unwrap();
    assert!(initial_state().overlap_sqr(traj.final_state()) >= 1.0 - 1e-6);
}

#[test]
fn constant_drive_matches_matrix_exponential() {
    let p = ParamPoint::new(0.7, 0.3, 1.1).with_omega(5.0);
    let drive = ConstantDrive { pulses: p.pulses(), duration: 2.0 };
    let psi0 = StateVector::new(vec![c64(0.0, 0.0), c64(0.6, 0.0), c64(0.0, 0.8), c64(0.0, 0.0)]);
    let traj = evolve(&drive, &psi0, default_dt(&drive)).unwrap();
    let u = mat_exp(&tripod::hamiltonian(&p.pulses()).scale(c64(0.0, -2.0))).unwrap();
    assert!(traj.final_state().distance(&u.mul_vec(&psi0)) < 1e-9);
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let sched = headline(10.0, 1.0, Order::FirstThenSecond);
    let run = |dt: f64| evolve_sampled(&sched, &initial_state(), dt, usize::MAX).unwrap().final_state().clone();
    let dt = 5e-4;
    let reference = run(dt / 4.0);
    let e1 = run(dt).distance(&reference);
    let e2 = run(dt / 2.0).distance(&reference);
    // Against a dt/4 reference the exact ratio is (1 - 4^-4) / (2^-4 - 4^-4) = 17.
    let ratio = e1 / e2;
    assert!((13.0..21.0).contains(&ratio), "ratio {ratio} ({e1}, {e2})");
}
