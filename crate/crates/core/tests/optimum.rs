mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::PI;
use zeno_core::optimize::{
    alpha0, grid_oracle, nelder_mead, normalize_angles, optimal_amplitude_damping, optimal_dephasing,
    stationarity_check, variational_residual, SimplexOptions,
};
use zeno_core::qubit::{preset_amplitude_damping, preset_dephasing, rate_controlled_bloch, BlochVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dephasing_optimum_is_a_lower_bound((a, b) in angles(), n in direction(), mu in 0.1..3.0f64) {
        let opt = optimal_dephasing(a, b, mu).unwrap();
        let g = preset_dephasing(mu).unwrap();
        let r = BlochVector::from_angles(a, b);
        prop_assert!(opt.gamma_opt <= rate_controlled_bloch(&g, r, n).unwrap() + 1e-12);
        prop_assert!((rate_controlled_bloch(&g, r, opt.direction()).unwrap() - opt.gamma_opt).abs() < 1e-12);
        let k = opt.kappa.unwrap();
        prop_assert!((0.5 - 1e-12..=0.5625 + 1e-12).contains(&k));
    }

    #[test]
    fn amplitude_damping_optimum_is_a_lower_bound((a, b) in angles(), n in direction(), mu in 0.1..3.0f64) {
        let opt = optimal_amplitude_damping(a, b, mu).unwrap();
        let g = preset_amplitude_damping(mu).unwrap();
        let r = BlochVector::from_angles(a, b);
        prop_assert!(opt.gamma_opt <= rate_controlled_bloch(&g, r, n).unwrap() + 1e-12);
        prop_assert!((opt.kappa.unwrap() - 0.375).abs() < 1e-12);
    }

    #[test]
    fn analytic_optima_are_stationary((a, b) in angles()) {
        let r = BlochVector::from_angles(a, b);
        let ad = preset_amplitude_damping(1.0).unwrap();
        let opt = optimal_amplitude_damping(a, b, 1.0).unwrap();
        prop_assert!(variational_residual(&ad, r, opt.direction()).unwrap() < 1e-8);
        let st = stationarity_check(&ad, r, opt.direction()).unwrap();
        prop_assert!(st.residual_theta < 1e-6 && st.residual_phi < 1e-6);

        let dep = preset_dephasing(1.0).unwrap();
        let opt = optimal_dephasing(a, b, 1.0).unwrap();
        prop_assert!(variational_residual(&dep, r, opt.direction()).unwrap() < 1e-8);
    }

    #[test]
    fn angle_normalization_keeps_the_axis(t in -10.0..10.0f64, p in -10.0..10.0f64) {
        let (nt, np) = normalize_angles(t, p);
        prop_assert!((0.0..=PI).contains(&nt));
        prop_assert!((0.0..2.0 * PI).contains(&np));
        let u = BlochVector::from_angles(t, p);
        let v = BlochVector::from_angles(nt, np);
        prop_assert!(u.distance(v) < 1e-12);
        prop_assert_eq!(normalize_angles(nt, np), (nt, np));
    }
}

#[test]
fn grid_oracle_agrees_with_dephasing_closed_form() {
    let g = preset_dephasing(1.0).unwrap();
    for a in [
        0.2,
        alpha0() - 0.05,
        1.2,
        PI / 2.0,
        2.0,
        PI - alpha0() + 0.05,
        3.0,
    ] {
        let grid = grid_oracle(&g, BlochVector::from_angles(a, 0.7), 64, 128).unwrap();
        let exact = optimal_dephasing(a, 0.7, 1.0).unwrap();
        assert!((grid.gamma_opt - exact.gamma_opt).abs() < 1e-8, "alpha={a}");
    }
}

#[test]
fn simplex_finds_the_rosenbrock_valley() {
    let opts = SimplexOptions {
        max_iter: 20_000,
        ..SimplexOptions::default()
    };
    let res = nelder_mead(
        |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
        &[-1.2, 1.0],
        opts,
    );
    assert!((res.x[0] - 1.0).abs() < 1e-4 && (res.x[1] - 1.0).abs() < 1e-4);
}
