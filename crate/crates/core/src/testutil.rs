//! Proptest strategies shared by the unit tests.

use crate::state::{Amplitudes, AsdParams};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

pub fn amplitudes() -> impl Strategy<Value = Amplitudes> {
    prop::array::uniform16(-1.0f64..1.0).prop_filter_map("zero vector", |x| {
        let raw: [Complex64; 8] = std::array::from_fn(|i| Complex64::new(x[2 * i], x[2 * i + 1]));
        Amplitudes::normalize(raw).ok()
    })
}

pub fn asd_params() -> impl Strategy<Value = AsdParams> {
    (prop::array::uniform5(0.0f64..1.0), 0.0..TAU)
        .prop_filter_map("zero vector", |(l, phi)| AsdParams::normalized(l, phi).ok())
}
