mod common;

use common::*;
use proptest::prelude::*;
use zeno_core::control::{
    hamiltonian_first_order_contribution, zeno_limit_rate_controlled, ControlHamiltonian, DEFAULT_ORDER,
};
use zeno_core::qubit::{
    ad_rate_controlled, dephasing_rate_controlled, dissipator_from_gamma, gamma_to_channels,
    preset_amplitude_damping, preset_dephasing, rate_controlled_bloch, rate_free_bloch, ControlDirection,
    GammaMatrix,
};
use zeno_core::zeno::{first_order_coefficient_free, variance, zeno_limit_rate_free};
use zeno_core::SystemModel;

fn channel_model(g: &GammaMatrix) -> SystemModel {
    SystemModel::noise_only(2, gamma_to_channels(g).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn channels_reproduce_the_dissipator(g in gamma()) {
        let direct = dissipator_from_gamma(&g);
        let via = channel_model(&g).dissipator().unwrap();
        prop_assert!(direct.max_abs_diff(&via) < 1e-12);
    }

    #[test]
    fn free_rate_matches_liouville_form(g in gamma(), r in bloch()) {
        let bloch_form = rate_free_bloch(&g, r).unwrap();
        let liouville = zeno_limit_rate_free(&channel_model(&g), &r.to_state()).unwrap();
        prop_assert!((bloch_form - liouville).abs() < 1e-11 * (1.0 + g.trace()));
        prop_assert!(bloch_form >= -1e-12);
    }

    #[test]
    fn controlled_rate_matches_frame_average(g in gamma(), r in bloch(), n in direction()) {
        let bloch_form = rate_controlled_bloch(&g, r, n).unwrap();
        let ctrl = ControlHamiltonian::qubit(n, 1);
        let averaged = zeno_limit_rate_controlled(&channel_model(&g), &ctrl, &r.to_state(), DEFAULT_ORDER).unwrap();
        prop_assert!((bloch_form - averaged).abs() < 1e-9 * (1.0 + g.trace()));
        prop_assert!(bloch_form >= -1e-12);
    }

    #[test]
    fn controlled_rate_is_even_in_the_axis(g in gamma(), r in bloch(), n in direction()) {
        let flipped = ControlDirection::new(std::f64::consts::PI - n.theta, n.phi + std::f64::consts::PI);
        let a = rate_controlled_bloch(&g, r, n).unwrap();
        let b = rate_controlled_bloch(&g, r, flipped).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + g.trace()));
    }

    #[test]
    fn rates_scale_linearly(g in gamma(), r in bloch(), n in direction(), s in 0.0..5.0f64) {
        let gs = g.scale(s).unwrap();
        prop_assert!((rate_free_bloch(&gs, r).unwrap() - s * rate_free_bloch(&g, r).unwrap()).abs() < 1e-10 * (1.0 + s));
        prop_assert!((rate_controlled_bloch(&gs, r, n).unwrap() - s * rate_controlled_bloch(&g, r, n).unwrap()).abs() < 1e-10 * (1.0 + s));
    }

    #[test]
    fn trigonometric_forms_match(a in 0.0..std::f64::consts::PI, b in 0.0..6.3f64, n in direction(), mu in 0.1..3.0f64) {
        let r = zeno_core::qubit::BlochVector::from_angles(a, b);
        let dep = rate_controlled_bloch(&preset_dephasing(mu).unwrap(), r, n).unwrap();
        prop_assert!((dep - dephasing_rate_controlled(a, b, n.theta, n.phi, mu)).abs() < 1e-10);
        let ad = rate_controlled_bloch(&preset_amplitude_damping(mu).unwrap(), r, n).unwrap();
        prop_assert!((ad - ad_rate_controlled(a, b, n.theta, n.phi, mu)).abs() < 1e-10);
    }

    #[test]
    fn hamiltonian_drops_out_at_first_order(h0 in hermitian(2, 3.0), r in bloch(), n in direction(), k in 1i64..4) {
        let model = SystemModel::new(h0, vec![]).unwrap();
        let ctrl = ControlHamiltonian::qubit(n, 2 * k);
        let v = hamiltonian_first_order_contribution(&model, &ctrl, &r.to_state(), DEFAULT_ORDER).unwrap();
        prop_assert!(v.abs() < 1e-12);
    }

    #[test]
    fn unitary_first_order_coefficient_is_the_variance(h0 in hermitian(3, 2.0), r in bloch()) {
        let psi = zeno_core::PureState::normalized(vec![r.to_state().amplitudes()[0], r.to_state().amplitudes()[1], c(0.3, -0.2)]).unwrap();
        let c1 = first_order_coefficient_free(&SystemModel::new(h0.clone(), vec![]).unwrap(), &psi).unwrap();
        prop_assert!((c1 - variance(&h0, &psi)).abs() < 1e-11);
    }
}
