#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use zeno_core::qubit::{BlochVector, ControlDirection, GammaMatrix};
use zeno_core::{CMatrix, NoiseChannel, Operator, SystemModel};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex_matrix(d: usize, scale: f64) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d).prop_map(move |v| {
        CMatrix::from_row_major(
            d,
            d,
            v.into_iter().map(|(a, b)| c(scale * a, scale * b)).collect(),
        )
    })
}

pub fn hermitian(d: usize, scale: f64) -> impl Strategy<Value = Operator> {
    complex_matrix(d, scale).prop_map(|a| {
        let h = (&a + &a.adjoint()).scale_re(0.5);
        Operator::hermitian(h).unwrap()
    })
}

pub fn model(d: usize) -> impl Strategy<Value = SystemModel> {
    (
        hermitian(d, 1.0),
        prop::collection::vec((0.0..2.0f64, complex_matrix(d, 1.0)), 1..3),
    )
        .prop_map(move |(h0, chans)| {
            let chans = chans
                .into_iter()
                .map(|(rate, v)| NoiseChannel::new(rate, Operator::new(v).unwrap()).unwrap())
                .collect();
            SystemModel::new(h0, chans).unwrap()
        })
}

/// `Γ = A A†` for a random complex 3×3 `A`.
pub fn gamma() -> impl Strategy<Value = GammaMatrix> {
    complex_matrix(3, 1.0).prop_map(|a| GammaMatrix::new(&a * &a.adjoint()).unwrap())
}

pub fn angles() -> impl Strategy<Value = (f64, f64)> {
    (0.0..std::f64::consts::PI, 0.0..2.0 * std::f64::consts::PI)
}

pub fn bloch() -> impl Strategy<Value = BlochVector> {
    angles().prop_map(|(a, b)| BlochVector::from_angles(a, b))
}

pub fn direction() -> impl Strategy<Value = ControlDirection> {
    angles().prop_map(|(t, p)| ControlDirection::new(t, p))
}
