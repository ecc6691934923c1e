//! Named states used throughout the tests and the command line.

use crate::error::{Error, Result};
use crate::state::{Amplitudes, AsdParams};
use std::f64::consts::FRAC_1_SQRT_2;

fn asd(lambda: [f64; 5]) -> AsdParams {
    AsdParams::new(lambda, 0.0).expect("preset is normalized")
}

pub fn ghz_asd() -> AsdParams {
    asd([FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2])
}

/// (|000⟩ + |101⟩ + |110⟩)/√3, a W-class state in Schmidt form.
pub fn w_asd() -> AsdParams {
    let t = 1.0 / 3f64.sqrt();
    asd([t, 0.0, t, t, 0.0])
}

/// (|000⟩ + |101⟩ + |110⟩ + |111⟩)/2
pub fn g_state_asd() -> AsdParams {
    asd([0.5, 0.0, 0.5, 0.5, 0.5])
}

/// (2/3)|000⟩ + (1/2)|101⟩ + (1/2)|110⟩ + (√2/6)|111⟩
pub fn kappa_asd() -> AsdParams {
    asd([2.0 / 3.0, 0.0, 0.5, 0.5, 2f64.sqrt() / 6.0])
}

/// (√5/10)(3|000⟩ + |101⟩ + |110⟩ + 3|111⟩)
pub fn vartheta_asd() -> AsdParams {
    let k = 5f64.sqrt() / 10.0;
    asd([3.0 * k, 0.0, k, k, 3.0 * k])
}

/// λ0 = λ2 = λ3 with the given λ4, which must lie in [0, 1).
pub fn omega(lambda4: f64) -> Result<AsdParams> {
    if !(0.0..1.0).contains(&lambda4) {
        return Err(Error::NonPositive {
            name: "1 - lambda4^2",
            value: 1.0 - lambda4 * lambda4,
        });
    }
    let l0 = ((1.0 - lambda4 * lambda4) / 3.0).sqrt();
    AsdParams::new([l0, 0.0, l0, l0, lambda4], 0.0)
}

/// λ4 = λ0 and λ3 = λ2 with the given λ2, which must lie in [0, 1/√2).
pub fn varkappa(lambda2: f64) -> Result<AsdParams> {
    if !(0.0..FRAC_1_SQRT_2).contains(&lambda2) {
        return Err(Error::NonPositive {
            name: "1/2 - lambda2^2",
            value: 0.5 - lambda2 * lambda2,
        });
    }
    let l0 = (0.5 - lambda2 * lambda2).sqrt();
    AsdParams::new([l0, 0.0, lambda2, lambda2, l0], 0.0)
}

pub fn ghz() -> Amplitudes {
    ghz_asd().to_amplitudes()
}

pub fn w() -> Amplitudes {
    w_asd().to_amplitudes()
}

pub fn g_state() -> Amplitudes {
    g_state_asd().to_amplitudes()
}

pub fn kappa() -> Amplitudes {
    kappa_asd().to_amplitudes()
}

pub fn vartheta() -> Amplitudes {
    vartheta_asd().to_amplitudes()
}

/// The five fixed rows of the reference table, in display order.
pub fn table_states() -> Vec<(&'static str, AsdParams)> {
    vec![
        ("GHZ", ghz_asd()),
        ("W", w_asd()),
        ("G", g_state_asd()),
        ("kappa", kappa_asd()),
        ("vartheta", vartheta_asd()),
    ]
}

/// Published entropies are rounded to two or three decimals.
pub const PUBLISHED_ENTROPY_TOL: f64 = 5e-3;

/// A row of the reference table as printed: tangles (τ_AB, τ_AC, τ_BC,
/// τ_ABC) and entropies (S_A, S_B, S_C).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedRow {
    pub name: &'static str,
    pub state: AsdParams,
    pub tangles: [f64; 4],
    pub entropies: [f64; 3],
}

pub fn published_table() -> Vec<PublishedRow> {
    let ln2 = std::f64::consts::LN_2;
    let delta = 0.63651;
    vec![
        PublishedRow {
            name: "GHZ",
            state: ghz_asd(),
            tangles: [0.0, 0.0, 0.0, 1.0],
            entropies: [ln2; 3],
        },
        PublishedRow {
            name: "W",
            state: w_asd(),
            tangles: [4.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0, 0.0],
            entropies: [delta; 3],
        },
        PublishedRow {
            name: "G",
            state: g_state_asd(),
            tangles: [0.25; 4],
            entropies: [0.56; 3],
        },
        PublishedRow {
            name: "kappa",
            state: kappa_asd(),
            tangles: [4.0 / 9.0, 4.0 / 9.0, 0.25, 8.0 / 81.0],
            entropies: [0.687, 0.587, 0.587],
        },
        PublishedRow {
            name: "vartheta",
            state: vartheta_asd(),
            tangles: [0.09, 0.09, 0.01, 0.81],
            entropies: [0.688, 0.647, 0.647],
        },
    ]
}

/// Looks a preset up by name: `ghz`, `w`, `g`, `kappa`, `vartheta`,
/// `omega:<lambda4>` or `varkappa:<lambda2>`.
pub fn by_name(name: &str) -> Option<Result<AsdParams>> {
    let lower = name.trim().to_ascii_lowercase();
    let (head, arg) = match lower.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (lower.as_str(), None),
    };
    let param = || arg.and_then(|a| a.trim().parse::<f64>().ok());
    Some(match (head, arg) {
        ("ghz", None) => Ok(ghz_asd()),
        ("w", None) => Ok(w_asd()),
        ("g", None) => Ok(g_state_asd()),
        ("kappa", None) => Ok(kappa_asd()),
        ("vartheta", None) => Ok(vartheta_asd()),
        ("omega", Some(_)) => omega(param()?),
        ("varkappa", Some(_)) => varkappa(param()?),
        _ => return None,
    })
}
