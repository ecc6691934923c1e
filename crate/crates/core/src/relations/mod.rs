//! Numerical verification suites for the tangle/entropy relations, the CKW
//! case bounds and the constrained extrema of the average measures.

pub mod ckw;
pub mod extrema;
pub mod suites;

pub use ckw::{ckw_case_check, ckw_suite, CkwCase, CkwCaseSummary, CkwCheck};
pub use extrema::{
    extrema_suite, maximize_avg_entropy_w_class, maximize_avg_tangle_case, CaseExtremum, ExtremumResult, TangleCase,
    WClassExtremum,
};
pub use suites::{averages_relation_suite, monogamy_suite, proposition_suite};

use crate::state::{Amplitudes, AsdParams};
use std::fmt;

/// A state that broke a check, kept in the form it was sampled in.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Asd(AsdParams),
    Amplitudes(Amplitudes),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Asd(p) => {
                let l: Vec<String> = p.lambda().iter().map(|x| format!("{x:.17e}")).collect();
                write!(f, "asd lambda [{}], phi {:.17e}", l.join(", "), p.phi())
            }
            Witness::Amplitudes(s) => {
                let parts: Vec<String> = s
                    .coeffs()
                    .iter()
                    .map(|c| format!("({:.17e}, {:.17e})", c.re, c.im))
                    .collect();
                write!(f, "amplitudes [{}]", parts.join(", "))
            }
        }
    }
}

/// One hard assertion evaluated over many samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// Which claim this is, e.g. "Prop 1".
    pub anchor: &'static str,
    pub evaluated: usize,
    pub violations: usize,
    /// Largest offending (or, without violations, largest observed) magnitude.
    pub worst: f64,
    pub first_counterexample: Option<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str) -> Self {
        Self {
            name: name.into(),
            anchor,
            evaluated: 0,
            violations: 0,
            worst: 0.0,
            first_counterexample: None,
        }
    }

    /// Records one evaluation; `magnitude` is tracked as the worst value.
    pub fn record(&mut self, ok: bool, magnitude: f64, witness: impl FnOnce() -> Witness) {
        self.evaluated += 1;
        if ok {
            if self.violations == 0 && magnitude > self.worst {
                self.worst = magnitude;
            }
            return;
        }
        if self.violations == 0 {
            self.worst = magnitude;
            self.first_counterexample = Some(witness());
        } else if magnitude > self.worst {
            self.worst = magnitude;
        }
        self.violations += 1;
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Combines counts from another run of the same check.
    pub fn merge(&mut self, other: Check) {
        self.evaluated += other.evaluated;
        if self.violations == 0 && other.violations > 0 {
            self.worst = other.worst;
            self.first_counterexample = other.first_counterexample;
        } else if (self.violations == 0) == (other.violations == 0) {
            self.worst = self.worst.max(other.worst);
        }
        self.violations += other.violations;
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} [{}] {}: {}/{} violations, worst {:.3e}",
            self.anchor, self.name, self.violations, self.evaluated, self.worst
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub samples: usize,
    pub checks: Vec<Check>,
    /// Reported quantities that are not asserted.
    pub stats: Vec<(String, f64)>,
}

impl SuiteReport {
    pub fn new(suite: &'static str) -> Self {
        Self {
            suite,
            samples: 0,
            checks: Vec::new(),
            stats: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn stat(&self, name: &str) -> Option<f64> {
        self.stats.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} ({} samples)", self.suite, self.samples)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        for (name, v) in &self.stats {
            writeln!(f, "  stat {name} = {v:.6e}")?;
        }
        Ok(())
    }
}

/// Running min / max / mean of a reported quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    sum: f64,
}

impl Default for Summary {
    fn default() -> Self {
        Self {
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }
}

impl Summary {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.sum += v;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.sum / self.count as f64
        }
    }

    fn export(&self, prefix: &str, out: &mut Vec<(String, f64)>) {
        out.push((format!("{prefix}_count"), self.count as f64));
        if self.count > 0 {
            out.push((format!("{prefix}_min"), self.min));
            out.push((format!("{prefix}_max"), self.max));
            out.push((format!("{prefix}_mean"), self.mean()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_keeps_first_counterexample() {
        let mut c = Check::new("x", "test");
        c.record(true, 0.1, || Witness::Amplitudes(Amplitudes::basis(0)));
        c.record(false, 2.0, || Witness::Amplitudes(Amplitudes::basis(1)));
        c.record(false, 3.0, || Witness::Amplitudes(Amplitudes::basis(2)));
        assert_eq!(c.violations, 2);
        assert_eq!(c.worst, 3.0);
        assert_eq!(c.first_counterexample, Some(Witness::Amplitudes(Amplitudes::basis(1))));
        assert!(!c.passed());
    }

    #[test]
    fn merge_is_order_independent_in_counts() {
        let mut a = Check::new("x", "t");
        a.record(true, 1.0, || unreachable!());
        let mut b = Check::new("x", "t");
        b.record(false, 5.0, || Witness::Amplitudes(Amplitudes::basis(3)));
        let mut ab = a.clone();
        ab.merge(b.clone());
        let mut ba = b;
        ba.merge(a);
        assert_eq!(ab.evaluated, ba.evaluated);
        assert_eq!(ab.violations, ba.violations);
        assert_eq!(ab.worst, ba.worst);
    }

    #[test]
    fn summary_tracks_extremes() {
        let mut s = Summary::default();
        for v in [3.0, -1.0, 4.0] {
            s.push(v);
        }
        assert_eq!((s.min, s.max, s.count), (-1.0, 4.0, 3));
        assert!((s.mean() - 2.0).abs() < 1e-15);
    }
}
