//! SLOCC classes, vanishing-tangle patterns in the GHZ class, states with
//! no vanishing measure, and reconstruction of a state from its tangles.

use crate::closed_form::{
    alphas, entropy_set, invariants_asd, tangles_asd, tangles_closed_form, EntropySet, TangleSet,
};
use crate::error::{Error, Result};
use crate::state::{Amplitudes, AsdParams, Qubit};
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, TAU};
use std::fmt;

/// Cutoff below which a product of λ's, a tangle or an α counts as zero.
pub const ZERO_TOL: f64 = 1e-9;
/// A measure must exceed this to count as non-vanishing.
pub const NONVANISHING_TOL: f64 = 1e-12;
/// How close all three entropies must be to ln 2 to trigger the GHZ witness.
pub const WITNESS_ENTROPY_TOL: f64 = 1e-10;
/// Allowed deviation of the witnessed λ's from the GHZ values. An entropy
/// gap of 1e-10 still leaves the λ's free at the 1e-5 level, since S is
/// quadratic in the λ's near GHZ.
pub const WITNESS_LAMBDA_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SloccClass {
    Ghz,
    W,
    ABc,
    BAc,
    CAb,
    Product,
}

impl SloccClass {
    pub const ALL: [SloccClass; 6] = [
        SloccClass::Ghz,
        SloccClass::W,
        SloccClass::ABc,
        SloccClass::BAc,
        SloccClass::CAb,
        SloccClass::Product,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SloccClass::Ghz => "GHZ",
            SloccClass::W => "W",
            SloccClass::ABc => "A-BC",
            SloccClass::BAc => "B-AC",
            SloccClass::CAb => "C-AB",
            SloccClass::Product => "A-B-C",
        }
    }

    fn biseparable(q: Qubit) -> Self {
        match q {
            Qubit::A => SloccClass::ABc,
            Qubit::B => SloccClass::BAc,
            Qubit::C => SloccClass::CAb,
        }
    }
}

impl fmt::Display for SloccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A class together with the quantities that landed close to the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub class: SloccClass,
    pub warnings: Vec<String>,
}

fn near_cutoff(name: &str, value: f64, warnings: &mut Vec<String>) {
    if value > ZERO_TOL && value < 10.0 * ZERO_TOL {
        warnings.push(format!("{name} = {value:e} is within a factor 10 of the zero cutoff"));
    }
}

// Decides among the product and biseparable classes from the marginal
// determinants: a qubit is unentangled with the rest iff its marginal is pure.
fn class_from_alphas(a: [f64; 3], warnings: &mut Vec<String>) -> Option<SloccClass> {
    for (q, x) in Qubit::ALL.iter().zip(a) {
        near_cutoff(&format!("alpha_{}", q.label()), x, warnings);
    }
    let zero: Vec<Qubit> = Qubit::ALL
        .into_iter()
        .zip(a)
        .filter(|(_, x)| *x <= ZERO_TOL)
        .map(|(q, _)| q)
        .collect();
    match zero.len() {
        0 => None,
        3 => Some(SloccClass::Product),
        1 => Some(SloccClass::biseparable(zero[0])),
        _ => {
            warnings.push(format!("two marginals are pure but the third is not: alpha = {a:?}"));
            let q = Qubit::ALL
                .into_iter()
                .zip(a)
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(q, _)| q)
                .expect("three qubits");
            Some(SloccClass::biseparable(q))
        }
    }
}

/// Classification of a Schmidt-form state. GHZ iff λ0λ4 ≠ 0, W iff λ4 = 0
/// and λ0λ2λ3 ≠ 0; the rest is settled by which marginals are pure.
pub fn classify_asd(p: &AsdParams) -> Classification {
    let l = p.lambda();
    let mut warnings = Vec::new();
    let ghz = l[0] * l[4];
    let w = l[0] * l[2] * l[3];
    near_cutoff("lambda0*lambda4", ghz, &mut warnings);
    if ghz > ZERO_TOL {
        return Classification {
            class: SloccClass::Ghz,
            warnings,
        };
    }
    near_cutoff("lambda4", l[4], &mut warnings);
    near_cutoff("lambda0*lambda2*lambda3", w, &mut warnings);
    if l[4] <= ZERO_TOL && w > ZERO_TOL {
        return Classification {
            class: SloccClass::W,
            warnings,
        };
    }
    let a = alphas(&tangles_asd(p)).expect("tangles of a valid state");
    let class = class_from_alphas(a, &mut warnings).unwrap_or_else(|| {
        warnings.push(format!("no marginal is pure, alpha = {a:?}; reporting W"));
        SloccClass::W
    });
    Classification { class, warnings }
}

pub fn slocc_class_asd(p: &AsdParams) -> SloccClass {
    classify_asd(p).class
}

/// Classification of an arbitrary amplitude vector from its invariants:
/// τ_ABC ≠ 0 means GHZ, otherwise pure marginals decide, and a state with
/// τ_ABC = 0 and no pure marginal is W.
pub fn classify_amplitudes(s: &Amplitudes) -> Classification {
    let t = tangles_closed_form(s);
    let mut warnings = Vec::new();
    near_cutoff("tau_abc", t.tau_abc, &mut warnings);
    if t.tau_abc > ZERO_TOL {
        return Classification {
            class: SloccClass::Ghz,
            warnings,
        };
    }
    let a = alphas(&t).expect("tangles of a valid state");
    let class = class_from_alphas(a, &mut warnings).unwrap_or(SloccClass::W);
    Classification { class, warnings }
}

pub fn slocc_class_amplitudes(s: &Amplitudes) -> SloccClass {
    classify_amplitudes(s).class
}

/// Which of the GHZ-class vanishing patterns holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VanishingProperty {
    /// Only τ_AB = 0: λ3 = 0 and λ1λ2 ≠ 0.
    OnlyAb,
    /// Only τ_AC = 0: λ2 = 0 and λ1λ3 ≠ 0.
    OnlyAc,
    /// Only τ_BC = 0: λ1λ4 = λ2λ3 ≠ 0 and φ = 0.
    OnlyBc,
    /// τ_AB = τ_AC = 0 ≠ τ_BC: λ2 = λ3 = 0, λ1 ≠ 0.
    AbAc,
    /// τ_AB = τ_BC = 0 ≠ τ_AC: λ1 = λ3 = 0, λ2 ≠ 0.
    AbBc,
    /// τ_AC = τ_BC = 0 ≠ τ_AB: λ1 = λ2 = 0, λ3 ≠ 0.
    AcBc,
    /// All pairwise tangles vanish: λ1 = λ2 = λ3 = 0.
    All,
    /// No pairwise tangle vanishes.
    None,
}

impl VanishingProperty {
    /// Property number as listed for the GHZ class.
    pub fn label(self) -> &'static str {
        match self {
            VanishingProperty::OnlyAb => "3.1",
            VanishingProperty::OnlyAc => "3.2",
            VanishingProperty::OnlyBc => "3.3",
            VanishingProperty::AbAc => "4.1",
            VanishingProperty::AbBc => "4.2",
            VanishingProperty::AcBc => "4.3",
            VanishingProperty::All => "5",
            VanishingProperty::None => "6",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanishingProfile {
    pub zero_ab: bool,
    pub zero_ac: bool,
    pub zero_bc: bool,
    pub property: VanishingProperty,
    /// Whether the λ conditions of the matched property hold as well.
    pub lambda_conditions_hold: bool,
}

fn phi_is_zero(phi: f64) -> bool {
    phi <= ZERO_TOL || TAU - phi <= ZERO_TOL
}

/// Vanishing pattern of the pairwise tangles of a GHZ-class state.
pub fn vanishing_profile(p: &AsdParams) -> Result<VanishingProfile> {
    let l = p.lambda();
    if l[0] * l[4] <= ZERO_TOL {
        return Err(Error::NotGhzClass(l[0] * l[4]));
    }
    let t = tangles_asd(p);
    let (zab, zac, zbc) = (t.tau_ab <= ZERO_TOL, t.tau_ac <= ZERO_TOL, t.tau_bc <= ZERO_TOL);
    let z = |x: f64| x <= ZERO_TOL;
    let (property, lam) = match (zab, zac, zbc) {
        (true, false, false) => (VanishingProperty::OnlyAb, z(l[3]) && !z(l[1] * l[2])),
        (false, true, false) => (VanishingProperty::OnlyAc, z(l[2]) && !z(l[1] * l[3])),
        (false, false, true) => (
            VanishingProperty::OnlyBc,
            z((l[1] * l[4] - l[2] * l[3]).abs()) && !z(l[2] * l[3]) && phi_is_zero(p.phi()),
        ),
        (true, true, false) => (VanishingProperty::AbAc, z(l[2]) && z(l[3]) && !z(l[1])),
        (true, false, true) => (VanishingProperty::AbBc, z(l[1]) && z(l[3]) && !z(l[2])),
        (false, true, true) => (VanishingProperty::AcBc, z(l[1]) && z(l[2]) && !z(l[3])),
        (true, true, true) => (VanishingProperty::All, z(l[1]) && z(l[2]) && z(l[3])),
        (false, false, false) => (
            VanishingProperty::None,
            (!z(l[2] * l[3]) && z(l[1]))
                || (!z(l[1] * l[2] * l[3] * (l[1] * l[4] - l[2] * l[3]).abs()) && phi_is_zero(p.phi()))
                || (!z(l[1] * l[2] * l[3]) && !phi_is_zero(p.phi())),
        ),
    };
    Ok(VanishingProfile {
        zero_ab: zab,
        zero_ac: zac,
        zero_bc: zbc,
        property,
        lambda_conditions_hold: lam,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonvanishingKind {
    /// λ1 = 0, λ2λ3 ≠ 0.
    Varpi1,
    /// φ = 0, λ1λ2λ3 ≠ 0, λ1λ4 ≠ λ2λ3.
    Varpi2,
    /// φ ≠ 0, λ1λ2λ3 ≠ 0.
    Varpi3,
}

impl NonvanishingKind {
    pub fn label(self) -> &'static str {
        match self {
            NonvanishingKind::Varpi1 => "varpi1",
            NonvanishingKind::Varpi2 => "varpi2",
            NonvanishingKind::Varpi3 => "varpi3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonvanishingForm {
    pub kind: Option<NonvanishingKind>,
    pub lambda: [f64; 5],
    pub phi: f64,
}

fn all_measures_positive(t: &TangleSet, e: &EntropySet) -> bool {
    t.pairwise().iter().chain([&t.tau_abc]).all(|&x| x > NONVANISHING_TOL)
        && e.as_array().iter().all(|&x| x > NONVANISHING_TOL)
}

/// Which of the three families a state with no vanishing tangle, 3-tangle
/// or entropy belongs to; `kind` is `None` when some measure vanishes.
pub fn nonvanishing_form(p: &AsdParams) -> NonvanishingForm {
    let l = p.lambda();
    let s = p.to_amplitudes();
    let t = tangles_closed_form(&s);
    let kind = match entropy_set(&s) {
        Ok(e) if all_measures_positive(&t, &e) => Some(if l[1] <= ZERO_TOL {
            NonvanishingKind::Varpi1
        } else if phi_is_zero(p.phi()) {
            NonvanishingKind::Varpi2
        } else {
            NonvanishingKind::Varpi3
        }),
        _ => None,
    };
    NonvanishingForm {
        kind,
        lambda: *l,
        phi: p.phi(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction {
    pub params: AsdParams,
    /// λ4 vanished, so the state lies in the W class.
    pub w_class: bool,
}

/// The λ1 = 0, φ = 0 state whose pairwise tangles are (τ_AB, τ_AC, τ_BC):
/// with p⁴ = τ_AB, q⁴ = τ_AC, r⁴ = τ_BC,
/// λ0 = pq/(√2 r), λ2 = qr/(√2 p), λ3 = pr/(√2 q), λ4² = 1 − λ0² − λ2² − λ3².
pub fn reconstruct_from_tangles(tau_ab: f64, tau_ac: f64, tau_bc: f64) -> Result<Reconstruction> {
    for (name, value) in [("tau_ab", tau_ab), ("tau_ac", tau_ac), ("tau_bc", tau_bc)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    let (p, q, r) = (tau_ab.powf(0.25), tau_ac.powf(0.25), tau_bc.powf(0.25));
    let l0 = FRAC_1_SQRT_2 * p * q / r;
    let l2 = FRAC_1_SQRT_2 * q * r / p;
    let l3 = FRAC_1_SQRT_2 * p * r / q;
    let l4_sq = 1.0 - (l0 * l0 + l2 * l2 + l3 * l3);
    if l4_sq < -1e-12 {
        return Err(Error::InfeasibleTangles { lambda4_sq: l4_sq });
    }
    let w_class = l4_sq.abs() <= 1e-12;
    let l4 = if w_class { 0.0 } else { l4_sq.sqrt() };
    let params = AsdParams::new([l0, 0.0, l2, l3, l4], 0.0)?;
    Ok(Reconstruction { params, w_class })
}

/// J4 = √(J2J3/J1) − (J2J3/J1 + J2 + J3), valid on the λ1 = 0 family.
pub fn j4_from_j123(j1: f64, j2: f64, j3: f64) -> Result<f64> {
    if !(j1 > 0.0) {
        return Err(Error::NonPositive { name: "j1", value: j1 });
    }
    let k = j2 * j3 / j1;
    Ok(k.sqrt() - (k + j2 + j3))
}

/// True iff all three marginal entropies equal ln 2. In that case the
/// parameters must be those of the GHZ state; anything else is returned as
/// a counterexample error.
pub fn ghz_uniqueness_witness(p: &AsdParams) -> Result<bool> {
    let e = crate::closed_form::EntropySet::from_tangles(&tangles_asd(p))?;
    if e.as_array().iter().any(|s| (s - LN_2).abs() > WITNESS_ENTROPY_TOL) {
        return Ok(false);
    }
    let l = p.lambda();
    let ok = (l[0] - FRAC_1_SQRT_2).abs() <= WITNESS_LAMBDA_TOL
        && (l[4] - FRAC_1_SQRT_2).abs() <= WITNESS_LAMBDA_TOL
        && l[1..4].iter().all(|&x| x <= WITNESS_LAMBDA_TOL);
    if ok {
        Ok(true)
    } else {
        Err(Error::GhzUniquenessCounterexample { lambda: *l })
    }
}

/// Pairwise tangles of a W-class Schmidt state: (4λ0²λ3², 4λ0²λ2², 4λ2²λ3²).
pub fn w_class_tangles(p: &AsdParams) -> [f64; 3] {
    let l = p.lambda();
    [
        4.0 * (l[0] * l[3]).powi(2),
        4.0 * (l[0] * l[2]).powi(2),
        4.0 * (l[2] * l[3]).powi(2),
    ]
}

/// J1..J3 → J4 identity residual for a Schmidt state.
pub fn j4_identity_residual(p: &AsdParams) -> Result<f64> {
    let j = invariants_asd(p);
    Ok(j4_from_j123(j.j1, j.j2, j.j3)? - j.j4)
}
