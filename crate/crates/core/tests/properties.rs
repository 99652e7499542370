use geophase_core::holonomy::{transport, ParamPath};
use geophase_core::linalg::{self, c64, mat_exp, pauli_exp, ComplexMatrix, StateVector};
use geophase_core::nqr::{self, NqrPoint};
use geophase_core::schrodinger::project_populations;
use geophase_core::tripod::{self, ParamPoint};
use proptest::prelude::*;

fn complex_matrix(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-scale..scale, -scale..scale), n * n).prop_map(move |v| {
        ComplexMatrix::from_row_major(n, n, v.into_iter().map(|(re, im)| c64(re, im)).collect()).unwrap()
    })
}

fn antihermitian(n: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n, scale).prop_map(|m| (&m - &m.adjoint()).scale_re(0.5))
}

fn point() -> impl Strategy<Value = ParamPoint> {
    (0.0..std::f64::consts::PI, -3.2..3.2f64, -7.0..7.0f64).prop_map(|(t, p, v)| ParamPoint::new(t, p, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_inverts(m in complex_matrix(3, 0.8)) {
        let a = mat_exp(&m).unwrap();
        let b = mat_exp(&m.scale_re(-1.0)).unwrap();
        prop_assert!((&a * &b).distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn antihermitian_exponential_is_unitary(m in antihermitian(4, 3.0)) {
        prop_assert!(linalg::unitarity_defect(&mat_exp(&m).unwrap()) < 1e-12);
    }

    #[test]
    fn pauli_closed_form_agrees_with_series(m in antihermitian(2, 4.0)) {
        let (c0, v) = linalg::pauli_decompose(&m).unwrap();
        let closed = pauli_exp(c0, v);
        let series = mat_exp(&m).unwrap();
        prop_assert!(closed.distance(&series) < 1e-12);
    }

    #[test]
    fn determinant_of_exponential(m in complex_matrix(3, 0.7)) {
        let lhs = mat_exp(&m).unwrap().determinant().unwrap();
        let rhs = m.trace().exp();
        prop_assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn tripod_frame_resolves_identity(p in point()) {
        prop_assert!(tripod::frame_resolution(&p).distance(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn dark_states_are_annihilated(p in point(), omega in 0.1..50.0f64) {
        let p = p.with_omega(omega);
        let h = tripod::hamiltonian(&p.pulses());
        let (d1, d2) = tripod::dark_states(&p);
        prop_assert!(h.mul_vec(&d1).norm() < 1e-12 * omega);
        prop_assert!(h.mul_vec(&d2).norm() < 1e-12 * omega);
    }

    #[test]
    fn tripod_connection_is_antihermitian(theta in 0.0..std::f64::consts::PI) {
        for a in tripod::gauge_potential_tripod(theta).iter() {
            prop_assert!(a.is_antihermitian(1e-15));
        }
    }

    #[test]
    fn populations_sum_to_norm(amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4), p in point()) {
        let psi = StateVector::new(amps.into_iter().map(|(re, im)| c64(re, im)).collect());
        prop_assume!(psi.norm() > 1e-3);
        let pops = project_populations(&psi.normalized(), &p);
        prop_assert!((pops.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nqr_frame_diagonalises_hamiltonian(b in 0.2..3.0f64, theta in 0.0..std::f64::consts::PI, varphi in -7.0..7.0f64) {
        let p = NqrPoint::new(b, theta, varphi);
        let h = nqr::nqr_hamiltonian(&p);
        for (v, e) in nqr::nqr_frame(&p).iter().zip(nqr::frame_energies(&p)) {
            prop_assert!(h.mul_vec(v).distance(&v.scale(c64(e, 0.0))) < 1e-12 * b * b);
        }
    }

    #[test]
    fn transport_is_unitary_on_random_ellipses(
        tc in 0.3..1.3f64, pc in -1.0..1.0f64, vc in -2.0..2.0f64,
        a in 0.0..0.3f64, b in 0.0..1.0f64, c in 0.0..3.0f64,
    ) {
        let path = ParamPath::sample(2001, |s| {
            let t = std::f64::consts::TAU * s;
            ParamPoint::new(tc + a * t.cos(), pc + b * t.sin(), vc + c * (t + 0.3).sin())
        }).unwrap();
        let h = transport(&path, |q| tripod::gauge_potential_tripod(q.theta), "random");
        prop_assert!(h.unitarity_defect < 1e-12);
        let back = transport(&path.reversed(), |q| tripod::gauge_potential_tripod(q.theta), "random");
        prop_assert!((&back.matrix * &h.matrix).distance(&ComplexMatrix::identity(2)) < 1e-12);
    }
}
