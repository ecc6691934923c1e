//! Flat per-state records shared by the CSV sweep and `--json` output.

use crate::input::StateInput;
use serde_json::{Map, Value};
use triqubit::classify::{slocc_class_amplitudes, slocc_class_asd};
use triqubit::closed_form::{measure_report, measure_report_asd, MeasureReport};
use triqubit::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Empty,
}

impl Field {
    /// CSV cell: floats with 17 significant digits.
    pub fn csv(&self) -> String {
        match self {
            Field::Num(x) => format!("{x:.16e}"),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Field::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Field::Text(s) => Value::String(s.clone()),
            Field::Empty => Value::Null,
        }
    }
}

/// Column names of a sweep row, in file order.
pub fn columns() -> Vec<String> {
    let mut c: Vec<String> = vec!["seed".into(), "kind".into()];
    c.extend((0..5).map(|i| format!("lambda{i}")));
    c.push("phi".into());
    for i in 0..8 {
        c.push(format!("c{i}_re"));
        c.push(format!("c{i}_im"));
    }
    for n in [
        "tau_ab", "tau_ac", "tau_bc", "tau_abc", "s_a", "s_b", "s_c", "j1", "j2", "j3", "j4",
    ] {
        c.push(n.into());
    }
    for n in ["avg_tangle", "avg_entropy", "residual", "slocc_class"] {
        c.push(n.into());
    }
    c
}

/// A state together with its measures.
pub struct Record {
    pub input: StateInput,
    pub report: MeasureReport,
}

impl Record {
    pub fn new(input: StateInput) -> Result<Self> {
        let report = match &input {
            StateInput::Asd(p) => measure_report_asd(p)?,
            StateInput::Amplitudes(s) => measure_report(s)?,
        };
        Ok(Self { input, report })
    }

    /// Values in [`columns`] order.
    pub fn fields(&self, seed: Option<u64>, kind: &str) -> Vec<Field> {
        let mut f = vec![
            seed.map_or(Field::Empty, |s| Field::Text(s.to_string())),
            Field::Text(kind.into()),
        ];
        match &self.input {
            StateInput::Asd(p) => {
                f.extend(p.lambda().iter().map(|&x| Field::Num(x)));
                f.push(Field::Num(p.phi()));
            }
            StateInput::Amplitudes(_) => f.extend(std::iter::repeat_n(Field::Empty, 6)),
        }
        for c in self.input.amplitudes().coeffs() {
            f.push(Field::Num(c.re));
            f.push(Field::Num(c.im));
        }
        let t = &self.report.tangles;
        let e = &self.report.entropies;
        f.extend([t.tau_ab, t.tau_ac, t.tau_bc, t.tau_abc, e.s_a, e.s_b, e.s_c].map(Field::Num));
        match &self.report.invariants {
            Some(j) => f.extend(j.as_array().map(Field::Num)),
            None => f.extend(std::iter::repeat_n(Field::Empty, 4)),
        }
        f.push(Field::Num(self.report.avg_tangle));
        f.push(Field::Num(self.report.avg_entropy));
        f.push(Field::Num(self.report.relation_residual));
        let class = match &self.input {
            StateInput::Asd(p) => slocc_class_asd(p),
            StateInput::Amplitudes(s) => slocc_class_amplitudes(s),
        };
        f.push(Field::Text(class.label().into()));
        f
    }

    /// The sweep columns followed by the remaining report fields.
    pub fn json(&self, seed: Option<u64>, kind: &str) -> Map<String, Value> {
        let mut m: Map<String, Value> = columns()
            .into_iter()
            .zip(self.fields(seed, kind))
            .map(|(k, v)| (k, v.json()))
            .collect();
        for (name, v) in self.report.fields() {
            // already present as "residual"
            if name != "relation_residual" && !m.contains_key(name) {
                m.insert(name.into(), Field::Num(v).json());
            }
        }
        m
    }
}
