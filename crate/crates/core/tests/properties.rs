use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use obsclone::jointmeas::{measured_variance, nc_product, optimal_theta, product_bound, uncertainty_product};
use obsclone::machines::{machine_conjugated, machine_nc, ObservableClass};
use obsclone::qcore::*;
use obsclone::verify::{estimate_noises, CloneMeans};

fn bloch_in_ball() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("inside the ball", |(x, y, z)| x * x + y * y + z * z <= 1.0)
        .prop_map(|(x, y, z)| BlochVector::new(x, y, z))
}

fn complex2() -> impl Strategy<Value = ComplexMatrix2> {
    prop::array::uniform8(-1.0f64..1.0).prop_map(|v| {
        ComplexMatrix2::new(C64::new(v[0], v[1]), C64::new(v[2], v[3]), C64::new(v[4], v[5]), C64::new(v[6], v[7]))
    })
}

fn hermitian2() -> impl Strategy<Value = ComplexMatrix2> {
    complex2().prop_map(|m| (m + m.adjoint()) * C64::from(0.5))
}

fn su2() -> impl Strategy<Value = ComplexMatrix2> {
    (-PI..PI, -PI..PI, -PI..PI).prop_map(|(a, b, c)| euler_zyz(a, b, c))
}

fn two_qubit_unitary() -> impl Strategy<Value = ComplexMatrix4> {
    (su2(), su2(), su2(), su2(), -PI..PI, -PI..PI, -PI..PI).prop_map(|(a1, b1, a2, b2, t1, t2, t3)| {
        tensor(&a2, &b2) * cartan_kernel(&CartanParams::new(t1, t2, t3).unwrap()) * tensor(&a1, &b1)
    })
}

fn interior_theta() -> impl Strategy<Value = f64> {
    0.02f64..(FRAC_PI_2 - 0.02)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bloch_roundtrip(s in bloch_in_ball()) {
        let back = DensityMatrix::from_bloch(s).unwrap().bloch();
        for j in 0..3 {
            prop_assert!((back[j] - s[j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn constructed_states_are_valid(s in bloch_in_ball()) {
        let rho = DensityMatrix::from_bloch(s).unwrap();
        prop_assert!(DensityMatrix::new(*rho.matrix()).is_ok());
        prop_assert!(rho.eigenvalues()[0] >= -1e-12);
    }

    #[test]
    fn partial_trace_is_adjoint_to_tensoring(
        s in bloch_in_ball(), t in bloch_in_ball(), u in two_qubit_unitary(), x in hermitian2()
    ) {
        let r = evolve(&DensityMatrix::from_bloch(s).unwrap(), &DensityMatrix::from_bloch(t).unwrap(), &u).unwrap();
        let lhs = (r.matrix() * tensor(&x, &sigma0())).trace();
        let rhs = (partial_trace(r.matrix(), Keep::Signal) * x).trace();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
        let lhs = (r.matrix() * tensor(&sigma0(), &x)).trace();
        let rhs = (partial_trace(r.matrix(), Keep::Probe) * x).trace();
        prop_assert!((lhs - rhs).norm() <= 1e-12);
        prop_assert!((partial_trace(r.matrix(), Keep::Probe).trace() - r.matrix().trace()).norm() <= 1e-14);
    }

    #[test]
    fn evolution_preserves_spectrum(s in bloch_in_ball(), t in bloch_in_ball(), u in two_qubit_unitary()) {
        let rho = DensityMatrix::from_bloch(s).unwrap();
        let probe = DensityMatrix::from_bloch(t).unwrap();
        let r = evolve(&rho, &probe, &u).unwrap();
        prop_assert!(JointState::new(*r.matrix()).is_ok());
        let before = JointState::product(&rho, &probe).eigenvalues();
        let after = r.eigenvalues();
        for k in 0..4 {
            prop_assert!((before[k] - after[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn expectation_is_linear_in_observable_and_affine_in_bloch(
        s in bloch_in_ball(), x in hermitian2(), y in hermitian2(), a in -2.0f64..2.0
    ) {
        let rho = DensityMatrix::from_bloch(s).unwrap();
        let combo = x * C64::from(a) + y;
        let lhs = rho.expectation(&combo).unwrap();
        let rhs = a * rho.expectation(&x).unwrap() + rho.expectation(&y).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
        // Tr[ρX] = ½Tr[X] + ½ Σ sⱼ Tr[σⱼX]
        let affine = 0.5 * x.trace().re
            + 0.5 * (0..3).map(|j| s[j] * (pauli(j + 1).unwrap() * x).trace().re).sum::<f64>();
        prop_assert!((rho.expectation(&x).unwrap() - affine).abs() <= 1e-12);
        prop_assert!(rho.variance(&x).unwrap() >= -1e-12);
    }

    #[test]
    fn kernel_is_unitary(t1 in -10.0f64..10.0, t2 in -10.0f64..10.0, t3 in -10.0f64..10.0) {
        let k = cartan_kernel(&CartanParams::new(t1, t2, t3).unwrap());
        prop_assert!(unitarity_deviation(&k) <= 1e-12);
    }

    #[test]
    fn nc_shrinks_equatorial_components(theta in interior_theta(), s in bloch_in_ball()) {
        let m = machine_nc(theta).unwrap();
        let rho = DensityMatrix::from_bloch(s).unwrap();
        let [o1x, o2x] = m.clone_means(&rho, &sigma1()).unwrap();
        let [o1y, o2y] = m.clone_means(&rho, &sigma2()).unwrap();
        let (c, sn) = (theta.cos(), theta.sin());
        prop_assert!((o1x - c * s[0]).abs() <= 1e-10 && (o1y - c * s[1]).abs() <= 1e-10);
        prop_assert!((o2x - sn * s[0]).abs() <= 1e-10 && (o2y - sn * s[1]).abs() <= 1e-10);
    }

    #[test]
    fn class_members_pass_membership(c in -5.0f64..5.0, d in -5.0f64..5.0, v in su2()) {
        let class = ObservableClass::noncommuting().conjugated(&v);
        let x = class.generator_a * C64::from(c) + class.generator_b * C64::from(d);
        prop_assert!(class.membership_residual(&x) <= 1e-12);
    }

    #[test]
    fn conjugated_machines_share_the_noise_law(theta in interior_theta(), v in su2()) {
        let r = estimate_noises(&machine_conjugated(&v, theta).unwrap(), 8, 3, 1e-9).unwrap();
        prop_assert!((r.g1_fit - 1.0 / theta.cos()).abs() <= 1e-9);
        prop_assert!((r.g2_fit - 1.0 / theta.sin()).abs() <= 1e-9);
        prop_assert!(r.state_independent);
    }

    #[test]
    fn measured_variance_matches_rewritten_forms(theta in interior_theta(), s in bloch_in_ball()) {
        let m = machine_nc(theta).unwrap();
        let rho = DensityMatrix::from_bloch(s).unwrap();
        let r = uncertainty_product(&m, &rho).unwrap();
        let di1 = rho.variance(&sigma1()).unwrap();
        let di2 = rho.variance(&sigma2()).unwrap();
        let t2 = theta.tan().powi(2);
        prop_assert!((r.dm1 - (t2 + di1)).abs() <= 1e-10 * (1.0 + t2));
        prop_assert!((r.dm2 - (1.0 / t2 + di2)).abs() <= 1e-10 * (1.0 + 1.0 / t2));
        prop_assert!(r.dm1 >= di1 && r.dm2 >= di2);
        prop_assert!(r.product >= r.bound - 1e-9);
        prop_assert_eq!(r.saturated, (r.product - r.bound).abs() <= 1e-9);
    }

    #[test]
    fn product_respects_bound(theta in 1e-3f64..(FRAC_PI_2 - 1e-3), di1 in 1e-3f64..1.0, di2 in 1e-3f64..1.0) {
        let p = nc_product(theta, di1, di2);
        prop_assert!(p >= product_bound(di1, di2) * (1.0 - 1e-12));
    }

    #[test]
    fn minimum_uncertainty_products_never_beat_four(theta in 1e-3f64..(FRAC_PI_2 - 1e-3), z in prop::bool::ANY) {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, if z { 1.0 } else { -1.0 })).unwrap();
        let r = uncertainty_product(&machine_nc(theta).unwrap(), &rho).unwrap();
        prop_assert!(r.product >= 4.0 - 1e-9);
    }

    #[test]
    fn optimal_theta_depends_only_on_ratio(di1 in 1e-3f64..1.0, di2 in 1e-3f64..1.0, scale in 0.01f64..100.0) {
        let a = optimal_theta(di1, di2).unwrap();
        let b = optimal_theta(scale * di1, scale * di2).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!(a > 0.0 && a < FRAC_PI_2);
        let amgm = di1 / a.tan().powi(2) + di2 * a.tan().powi(2);
        prop_assert!((amgm - 2.0 * (di1 * di2).sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn measured_variance_ignores_sign_of_noise(g in 1.0f64..10.0, m in -1.0f64..1.0) {
        prop_assert_eq!(measured_variance(g, m).unwrap(), measured_variance(-g, m).unwrap());
    }
}
