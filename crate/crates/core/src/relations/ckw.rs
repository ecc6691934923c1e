//! Bounds on τ_AB + τ_AC + τ_BC for GHZ-class states, split by which of
//! λ1, λ2, λ3 vanish.

use super::extrema::AverageTangle;
use super::{Check, SuiteReport, Witness};
use crate::classify::ZERO_TOL;
use crate::closed_form::tangles_asd;
use crate::error::{Error, Result};
use crate::optimize::{multistart_ascent, MULTISTART, OPT_TOL};
use crate::state::AsdParams;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{PI, TAU};

/// Slack allowed on the non-strict bounds.
pub const BOUND_TOL: f64 = 1e-9;
/// Size given to the coefficients that must not vanish when an optimum on
/// the boundary is pulled back inside its case.
const NUDGE: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CkwCase(u8);

impl CkwCase {
    pub const ALL: [CkwCase; 8] = [
        CkwCase(1),
        CkwCase(2),
        CkwCase(3),
        CkwCase(4),
        CkwCase(5),
        CkwCase(6),
        CkwCase(7),
        CkwCase(8),
    ];

    pub fn new(id: u8) -> Option<Self> {
        (1..=8).contains(&id).then_some(CkwCase(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    /// Which of (λ1, λ2, λ3) are non-zero in this case.
    pub fn pattern(self) -> [bool; 3] {
        match self.0 {
            1 => [false, false, false],
            2 => [false, false, true],
            3 => [false, true, false],
            4 => [true, false, false],
            5 => [false, true, true],
            6 => [true, false, true],
            7 => [true, true, false],
            _ => [true, true, true],
        }
    }

    pub fn bound(self) -> f64 {
        match self.0 {
            1 => 0.0,
            2..=4 => 1.0,
            5 => 4.0 / 3.0,
            6 | 7 => 0.5,
            _ => 1.0,
        }
    }

    pub fn strict(self) -> bool {
        (2..=5).contains(&self.0)
    }

    pub fn from_lambda(l: &[f64; 5]) -> Self {
        let nz = [l[1] > ZERO_TOL, l[2] > ZERO_TOL, l[3] > ZERO_TOL];
        *Self::ALL
            .iter()
            .find(|c| c.pattern() == nz)
            .expect("eight patterns cover all cases")
    }

    /// Whether `sum` respects the case bound.
    pub fn admits(self, sum: f64) -> bool {
        if self.strict() {
            sum < self.bound()
        } else {
            sum <= self.bound() + BOUND_TOL
        }
    }

    fn free_indices(self) -> Vec<usize> {
        let p = self.pattern();
        let mut free = vec![0];
        free.extend((1..4).filter(|&i| p[i - 1]));
        free.push(4);
        free
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkwCheck {
    pub case: CkwCase,
    pub sum: f64,
    pub satisfied: bool,
}

/// Case, pairwise-tangle sum and bound verdict for a GHZ-class state.
pub fn ckw_case_check(p: &AsdParams) -> Result<CkwCheck> {
    let l = p.lambda();
    if l[0] * l[4] <= ZERO_TOL {
        return Err(Error::NotGhzClass(l[0] * l[4]));
    }
    let case = CkwCase::from_lambda(l);
    let sum = tangles_asd(p).pairwise().iter().sum();
    Ok(CkwCheck {
        case,
        sum,
        satisfied: case.admits(sum),
    })
}

/// Random GHZ-class state in the given case: non-zero coefficients from
/// |N(0,1)| (redrawn while below 1e-3), φ uniform.
pub fn sample_case<R: Rng + ?Sized>(case: CkwCase, rng: &mut R) -> Result<AsdParams> {
    let mut l = [0.0; 5];
    for i in case.free_indices() {
        l[i] = loop {
            let v: f64 = StandardNormal.sample(rng);
            if v.abs() > 1e-3 {
                break v.abs();
            }
        };
    }
    AsdParams::normalized(l, rng.random_range(0.0..TAU))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CkwCaseSummary {
    pub case: CkwCase,
    pub samples: usize,
    pub violations: usize,
    pub max_sampled: f64,
    pub max_sampled_at: Option<AsdParams>,
    /// Supremum of the sum over the closure of the case (φ = π).
    pub supremum: f64,
    /// A state strictly inside the case near the supremum.
    pub witness: AsdParams,
    pub witness_sum: f64,
}

impl CkwCaseSummary {
    pub fn bound_holds(&self) -> bool {
        self.violations == 0 && self.case.admits(self.witness_sum)
    }
}

// Moves an optimizer output back inside the case by lifting vanished
// coefficients that the case requires to be non-zero.
fn nudge_into_case(case: CkwCase, l: [f64; 5], phi: f64) -> Result<AsdParams> {
    let mut l = l;
    for i in case.free_indices() {
        if l[i] <= NUDGE {
            l[i] = NUDGE;
        }
    }
    AsdParams::normalized(l, phi)
}

/// Samples each case `samples` times and maximizes the sum within it.
pub fn ckw_case_summary<R: Rng + ?Sized>(case: CkwCase, samples: usize, rng: &mut R) -> Result<CkwCaseSummary> {
    let mut violations = 0;
    let mut max_sampled = f64::NEG_INFINITY;
    let mut max_sampled_at = None;
    for _ in 0..samples {
        let p = sample_case(case, rng)?;
        let c = ckw_case_check(&p)?;
        debug_assert_eq!(c.case, case);
        if !c.satisfied {
            violations += 1;
        }
        if c.sum > max_sampled {
            max_sampled = c.sum;
            max_sampled_at = Some(p);
        }
    }
    // φ = π maximizes τ_BC for non-negative λ, the other tangles ignore φ
    let f = AverageTangle::new(case.free_indices(), [0.0; 5], PI);
    let best = &multistart_ascent(&f, 1.0, MULTISTART, OPT_TOL, rng)[0];
    let witness = nudge_into_case(case, f.lambda(&best.x), PI)?;
    let witness_check = ckw_case_check(&witness)?;
    Ok(CkwCaseSummary {
        case,
        samples,
        violations,
        max_sampled,
        max_sampled_at,
        supremum: 3.0 * best.value,
        witness,
        witness_sum: witness_check.sum,
    })
}

/// Runs every case and folds the results into a suite report.
pub fn ckw_suite<R: Rng + ?Sized>(samples_per_case: usize, rng: &mut R) -> Result<(SuiteReport, Vec<CkwCaseSummary>)> {
    let mut report = SuiteReport::new("ckw");
    let mut summaries = Vec::new();
    for case in CkwCase::ALL {
        let s = ckw_case_summary(case, samples_per_case, rng)?;
        let mut check = Check::new(
            format!(
                "case {} sum {} {}",
                case.id(),
                if case.strict() { "<" } else { "<=" },
                case.bound()
            ),
            "CKW cases",
        );
        // sampled states, then the in-case witness near the supremum
        check.evaluated = s.samples;
        check.violations = s.violations;
        check.worst = s.max_sampled;
        if s.violations > 0 {
            check.first_counterexample = s.max_sampled_at.map(Witness::Asd);
        }
        let witness = s.witness;
        check.record(case.admits(s.witness_sum), s.witness_sum, || Witness::Asd(witness));
        report.samples += s.samples;
        report
            .stats
            .push((format!("case{}_max_sampled", case.id()), s.max_sampled));
        report.stats.push((format!("case{}_supremum", case.id()), s.supremum));
        report
            .stats
            .push((format!("case{}_witness_sum", case.id()), s.witness_sum));
        report.checks.push(check);
        summaries.push(s);
    }
    Ok((report, summaries))
}
