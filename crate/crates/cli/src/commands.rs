use crate::input::{parse_scalar, read_state, StateInput};
use crate::record::{columns, Record};
use crate::{Cli, CliError, Suite, SweepKind};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::io::Write;
use triqubit::classify::{
    classify_asd, nonvanishing_form, reconstruct_from_tangles, vanishing_profile, SloccClass, VanishingProperty,
};
use triqubit::closed_form::{measure_report, tangles_asd, TAYLOR_OFFSET};
use triqubit::oracle::measures_oracle;
use triqubit::presets;
use triqubit::relations::{
    averages_relation_suite, ckw_suite, extrema_suite, monogamy_suite, proposition_suite, CkwCaseSummary, SuiteReport,
};
use triqubit::state::{random_asd, random_state};

type Out<'a> = &'a mut dyn Write;

/// Largest closed-form/oracle disagreement tolerated by `measures --oracle`.
pub const ORACLE_TOL: f64 = 1e-9;
/// Slack on the per-row checks of a sweep.
const SWEEP_TOL: f64 = 1e-9;

/// Six significant digits, switching to exponent form for very small or
/// large magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (5 - e).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn write_json(out: Out, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn describe_input(s: &StateInput) -> String {
    match s {
        StateInput::Asd(p) => {
            let l: Vec<String> = p.lambda().iter().map(|&x| sig6(x)).collect();
            format!("asd lambda = ({}), phi = {}", l.join(", "), sig6(p.phi()))
        }
        StateInput::Amplitudes(a) => {
            let c: Vec<String> = a
                .coeffs()
                .iter()
                .map(|c| {
                    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                    format!("{}{sign}{}i", sig6(c.re), sig6(c.im.abs()))
                })
                .collect();
            format!("amplitudes ({})", c.join(", "))
        }
    }
}

pub fn measures(cli: &Cli, state: &str, out: Out) -> Result<(), CliError> {
    let input = read_state(state, cli.normalize)?;
    let kind = match input {
        StateInput::Asd(_) => "asd",
        StateInput::Amplitudes(_) => "amplitudes",
    };
    let rec = Record::new(input)?;
    let oracle = if cli.oracle {
        Some(measures_oracle(&rec.input.amplitudes())?)
    } else {
        None
    };
    let diff = oracle.as_ref().map(|o| rec.report.max_diff(o));

    if cli.json {
        let mut m = rec.json(None, kind);
        if let (Some(o), Some((field, d))) = (&oracle, diff) {
            for (name, v) in o.fields() {
                m.insert(format!("oracle_{name}"), json!(v));
            }
            m.insert("oracle_max_diff".into(), json!(d));
            m.insert("oracle_max_diff_field".into(), json!(field));
        }
        write_json(out, &Value::Object(m))?;
    } else {
        writeln!(out, "state: {}", describe_input(&rec.input))?;
        let class = match &rec.input {
            StateInput::Asd(p) => classify_asd(p).class,
            StateInput::Amplitudes(s) => triqubit::classify::slocc_class_amplitudes(s),
        };
        writeln!(out, "slocc class: {class}")?;
        let mut rows: Vec<(String, f64)> = rec
            .report
            .fields()
            .into_iter()
            .map(|(n, v)| (n.to_string(), v))
            .collect();
        if let Some(j) = rec.report.invariants {
            rows.extend(["j1", "j2", "j3", "j4"].iter().map(|n| n.to_string()).zip(j.as_array()));
        }
        match &oracle {
            None => {
                for (n, v) in rows {
                    writeln!(out, "  {n:<18} {:>14}", sig6(v))?;
                }
            }
            Some(o) => {
                let ov: Map<String, Value> = o.fields().into_iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
                writeln!(
                    out,
                    "  {:<18} {:>14} {:>14} {:>12}",
                    "quantity", "closed form", "oracle", "|diff|"
                )?;
                for (n, v) in rows {
                    match ov.get(&n).and_then(Value::as_f64) {
                        Some(w) => writeln!(
                            out,
                            "  {n:<18} {:>14} {:>14} {:>12.3e}",
                            sig6(v),
                            sig6(w),
                            (v - w).abs()
                        )?,
                        None => writeln!(out, "  {n:<18} {:>14}", sig6(v))?,
                    }
                }
            }
        }
        if let Some((field, d)) = diff {
            writeln!(out, "max closed-form/oracle discrepancy: {d:.3e} ({field})")?;
        }
    }
    match diff {
        Some((field, d)) if !(d <= ORACLE_TOL) => Err(CliError::Discrepancy(format!(
            "closed form and oracle disagree on {field} by {d:e} (tolerance {ORACLE_TOL:e})"
        ))),
        _ => Ok(()),
    }
}

pub fn table5(cli: &Cli, out: Out) -> Result<(), CliError> {
    const NAMES: [&str; 7] = ["tau_ab", "tau_ac", "tau_bc", "tau_abc", "s_a", "s_b", "s_c"];
    let mut rows = Vec::new();
    let mut worst_tangle: f64 = 0.0;
    let mut worst_entropy: f64 = 0.0;
    for row in presets::published_table() {
        let r = measure_report(&row.state.to_amplitudes())?;
        let t = &r.tangles;
        let e = &r.entropies;
        let computed = [t.tau_ab, t.tau_ac, t.tau_bc, t.tau_abc, e.s_a, e.s_b, e.s_c];
        let published: Vec<f64> = row.tangles.iter().chain(&row.entropies).copied().collect();
        let mut cells = Vec::new();
        for (i, name) in NAMES.iter().enumerate() {
            let dev = computed[i] - published[i];
            if i < 4 {
                worst_tangle = worst_tangle.max(dev.abs());
            } else {
                worst_entropy = worst_entropy.max(dev.abs());
            }
            cells.push((*name, computed[i], published[i], dev));
        }
        rows.push((row.name, cells));
    }
    let tangle_ok = worst_tangle <= 1e-12;
    let entropy_ok = worst_entropy <= presets::PUBLISHED_ENTROPY_TOL;

    if cli.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(name, cells)| {
                let c: Map<String, Value> = cells
                    .iter()
                    .map(|(n, v, p, d)| (n.to_string(), json!({"computed": v, "published": p, "deviation": d})))
                    .collect();
                json!({"state": name, "cells": c})
            })
            .collect();
        write_json(
            out,
            &json!({
                "rows": rows,
                "max_tangle_deviation": worst_tangle,
                "max_entropy_deviation": worst_entropy,
            }),
        )?;
    } else {
        write!(out, "{:<12}", "state")?;
        for n in NAMES {
            write!(out, " {n:>12}")?;
        }
        writeln!(out)?;
        for (name, cells) in &rows {
            write!(out, "{name:<12}")?;
            for (_, v, _, _) in cells {
                write!(out, " {:>12}", sig6(*v))?;
            }
            writeln!(out)?;
            write!(out, "{:<12}", "  published")?;
            for (_, _, p, _) in cells {
                write!(out, " {:>12}", sig6(*p))?;
            }
            writeln!(out)?;
            write!(out, "{:<12}", "  dev")?;
            for (_, _, _, d) in cells {
                write!(out, " {:>12.1e}", d)?;
            }
            writeln!(out)?;
        }
        writeln!(out, "max tangle deviation {worst_tangle:.3e} (tolerance 1e-12)")?;
        writeln!(
            out,
            "max entropy deviation {worst_entropy:.3e} (tolerance {:e}, published values are rounded)",
            presets::PUBLISHED_ENTROPY_TOL
        )?;
    }
    if tangle_ok && entropy_ok {
        Ok(())
    } else {
        Err(CliError::SuiteFailure(format!(
            "table deviates: tangles {worst_tangle:e}, entropies {worst_entropy:e}"
        )))
    }
}

// Checks every row must pass: the residual interval and the CKW inequality.
fn row_violation(rec: &Record) -> Option<String> {
    let r = rec.report.relation_residual;
    if !(-TAYLOR_OFFSET - SWEEP_TOL..=SWEEP_TOL).contains(&r) {
        return Some(format!("residual {r:e} outside [-(ln2 - 1/2), 0]"));
    }
    let t = &rec.report.tangles;
    let ckw = [
        (t.tau_ab + t.tau_ac, t.tau_a_bc, "A"),
        (t.tau_ab + t.tau_bc, t.tau_b_ac, "B"),
        (t.tau_ac + t.tau_bc, t.tau_c_ab, "C"),
    ];
    ckw.iter()
        .find(|(lhs, rhs, _)| lhs > &(rhs + SWEEP_TOL))
        .map(|(lhs, rhs, q)| format!("monogamy at {q}: {lhs} > {rhs}"))
}

/// One row per state; row i draws from stream i of the seeded generator, so
/// a row does not depend on how many rows precede it.
pub fn sweep(cli: &Cli, n: usize, kind: SweepKind, out: Out) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("n: must be at least 1".into()));
    }
    let label = match kind {
        SweepKind::Haar => "haar",
        SweepKind::Asd => "asd",
    };
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Input(format!("output: {e}"));
    w.write_record(columns()).map_err(csv_err)?;
    let mut violations = Vec::new();
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        rng.set_stream(i as u64);
        let input = match kind {
            SweepKind::Haar => StateInput::Amplitudes(random_state(&mut rng)),
            SweepKind::Asd => StateInput::Asd(random_asd(&mut rng)),
        };
        let rec = Record::new(input)?;
        if let Some(v) = row_violation(&rec) {
            violations.push(format!("row {i}: {v}"));
        }
        w.write_record(rec.fields(Some(cli.seed), label).iter().map(|f| f.csv()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    match violations.first() {
        None => Ok(()),
        Some(first) => Err(CliError::SuiteFailure(format!(
            "{} rows fail their checks; first {first}",
            violations.len()
        ))),
    }
}

fn report_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "anchor": c.anchor,
                "passed": c.passed(),
                "evaluated": c.evaluated,
                "violations": c.violations,
                "worst": c.worst,
                "first_counterexample": c.first_counterexample.as_ref().map(|w| w.to_string()),
            })
        })
        .collect();
    let stats: Map<String, Value> = r.stats.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
    json!({
        "suite": r.suite,
        "passed": r.passed(),
        "samples": r.samples,
        "checks": checks,
        "stats": stats,
    })
}

fn ckw_table(out: Out, summaries: &[CkwCaseSummary]) -> Result<(), CliError> {
    writeln!(out, "  case  bound      max sampled  supremum   in-case witness")?;
    for s in summaries {
        writeln!(
            out,
            "  {:<5} {}{:<9} {:<12} {:<10} {} ({})",
            s.case.id(),
            if s.case.strict() { "<" } else { "<=" },
            sig6(s.case.bound()),
            sig6(s.max_sampled),
            sig6(s.supremum),
            sig6(s.witness_sum),
            if s.bound_holds() { "holds" } else { "violated" },
        )?;
    }
    Ok(())
}

pub fn verify(cli: &Cli, suite: Suite, n: usize, out: Out) -> Result<(), CliError> {
    let suites = match suite {
        Suite::All => vec![
            Suite::Propositions,
            Suite::Averages,
            Suite::Monogamy,
            Suite::Ckw,
            Suite::Extrema,
        ],
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in suites {
        // each suite gets its own generator so `all` reproduces the single runs
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let (report, ckw) = match s {
            Suite::Propositions => (proposition_suite(n, &mut rng)?, None),
            Suite::Averages => (averages_relation_suite(n, &mut rng)?, None),
            Suite::Monogamy => (monogamy_suite(n, &mut rng)?, None),
            Suite::Ckw => {
                let (r, s) = ckw_suite(n, &mut rng)?;
                (r, Some(s))
            }
            Suite::Extrema => (extrema_suite(&mut rng)?, None),
            Suite::All => unreachable!("expanded above"),
        };
        if !cli.json {
            write!(out, "{report}")?;
            if let Some(s) = &ckw {
                ckw_table(out, s)?;
            }
        }
        reports.push(report);
    }
    if cli.json {
        let v: Vec<Value> = reports.iter().map(report_json).collect();
        write_json(out, &Value::Array(v))?;
    }
    let failed: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed()).collect();
    match failed.first().and_then(|r| r.first_failure().map(|c| (r, c))) {
        None => {
            if !cli.json {
                writeln!(out, "all checks passed")?;
            }
            Ok(())
        }
        Some((r, c)) => {
            let n_failed: usize = failed
                .iter()
                .map(|r| r.checks.iter().filter(|c| !c.passed()).count())
                .sum();
            let state = c
                .first_counterexample
                .as_ref()
                .map_or_else(|| "none recorded".to_string(), |w| w.to_string());
            Err(CliError::SuiteFailure(format!(
                "{n_failed} check(s) failed; first: suite {} [{}] {}\ncounterexample: {state}",
                r.suite, c.anchor, c.name
            )))
        }
    }
}

fn property_text(p: VanishingProperty) -> &'static str {
    match p {
        VanishingProperty::OnlyAb => "only tau_AB vanishes",
        VanishingProperty::OnlyAc => "only tau_AC vanishes",
        VanishingProperty::OnlyBc => "only tau_BC vanishes",
        VanishingProperty::AbAc => "tau_AB and tau_AC vanish",
        VanishingProperty::AbBc => "tau_AB and tau_BC vanish",
        VanishingProperty::AcBc => "tau_AC and tau_BC vanish",
        VanishingProperty::All => "all pairwise tangles vanish",
        VanishingProperty::None => "none vanish",
    }
}

pub fn classify(cli: &Cli, state: &str, out: Out) -> Result<(), CliError> {
    let p = match read_state(state, cli.normalize)? {
        StateInput::Asd(p) => p,
        StateInput::Amplitudes(_) => {
            return Err(CliError::Input(
                "amplitudes: classify needs Schmidt-form (asd) input; \
                 bringing a general amplitude vector to Schmidt form is not supported"
                    .into(),
            ))
        }
    };
    let c = classify_asd(&p);
    let profile = if c.class == SloccClass::Ghz {
        Some(vanishing_profile(&p)?)
    } else {
        None
    };
    let form = nonvanishing_form(&p).kind;
    if cli.json {
        let v = json!({
            "slocc_class": c.class.label(),
            "property": profile.map(|pr| pr.property.label()),
            "vanishing": profile.map(|pr| json!({
                "tau_ab": pr.zero_ab,
                "tau_ac": pr.zero_ac,
                "tau_bc": pr.zero_bc,
                "lambda_conditions_hold": pr.lambda_conditions_hold,
            })),
            "nonvanishing_form": form.map(|k| k.label()),
            "warnings": c.warnings,
        });
        write_json(out, &v)?;
    } else {
        let mut parts = vec![c.class.label().to_string()];
        if let Some(pr) = profile {
            parts.push(property_text(pr.property).into());
            parts.push(format!("Property ({})", pr.property.label()));
        }
        if let Some(k) = form {
            parts.push(format!("form {}", k.label()));
        }
        writeln!(out, "{}", parts.join("; "))?;
        if let Some(pr) = profile.filter(|pr| !pr.lambda_conditions_hold) {
            writeln!(
                out,
                "warning: the lambda conditions of Property ({}) do not hold",
                pr.property.label()
            )?;
        }
        for w in &c.warnings {
            writeln!(out, "warning: {w}")?;
        }
    }
    Ok(())
}

pub fn reconstruct(cli: &Cli, args: [&String; 3], out: Out) -> Result<(), CliError> {
    let mut t = [0.0; 3];
    for (i, (name, s)) in ["p4", "q4", "r4"].iter().zip(args).enumerate() {
        t[i] = parse_scalar(s).ok_or_else(|| CliError::Input(format!("{name}: cannot parse {s:?}")))?;
    }
    let r = reconstruct_from_tangles(t[0], t[1], t[2])?;
    let back = tangles_asd(&r.params);
    let preset = presets::table_states()
        .into_iter()
        .find(|(_, q)| {
            q.lambda()
                .iter()
                .zip(r.params.lambda())
                .all(|(a, b)| (a - b).abs() <= 1e-12)
        })
        .map(|(name, _)| name);
    if cli.json {
        let v = json!({
            "lambda": r.params.lambda(),
            "phi": r.params.phi(),
            "w_class": r.w_class,
            "tau_ab": back.tau_ab,
            "tau_ac": back.tau_ac,
            "tau_bc": back.tau_bc,
            "tau_abc": back.tau_abc,
            "preset": preset,
        });
        write_json(out, &v)?;
    } else {
        writeln!(out, "state: {}", describe_input(&StateInput::Asd(r.params)))?;
        if r.w_class {
            writeln!(out, "W class: lambda4 = 0")?;
        }
        if let Some(name) = preset {
            writeln!(out, "matches preset {name}")?;
        }
        writeln!(
            out,
            "tangles: tau_AB = {}, tau_AC = {}, tau_BC = {}, tau_ABC = {}",
            sig6(back.tau_ab),
            sig6(back.tau_ac),
            sig6(back.tau_bc),
            sig6(back.tau_abc)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(LN_2), "0.693147");
        assert_eq!(sig6(4.0 / 9.0), "0.444444");
        assert_eq!(sig6(12.5), "12.5000");
        assert_eq!(sig6(-0.25), "-0.250000");
        assert_eq!(sig6(1.5e-12), "1.50000e-12");
        assert_eq!(sig6(0.0), "0");
    }
}
