//! State input: preset names, or a JSON document read from a file or stdin.

use crate::CliError;
use num_complex::Complex64;
use serde_json::Value;
use std::io::Read;
use std::path::Path;
use triqubit::presets;
use triqubit::state::{Amplitudes, AsdParams};

#[derive(Clone, Debug, PartialEq)]
pub enum StateInput {
    Amplitudes(Amplitudes),
    Asd(AsdParams),
}

impl StateInput {
    pub fn amplitudes(&self) -> Amplitudes {
        match self {
            StateInput::Amplitudes(a) => *a,
            StateInput::Asd(p) => p.to_amplitudes(),
        }
    }
}

/// Parses a scalar: a plain number, `a/b`, or `sqrt(x)` nested freely,
/// e.g. "1/3", "1/sqrt(3)", "sqrt(1/2)".
pub fn parse_scalar(s: &str) -> Option<f64> {
    let s = s.trim();
    // split at the last '/' outside parentheses, so "sqrt(1/2)" stays whole
    let mut depth = 0i32;
    let mut slash = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => slash = Some(i),
            _ => {}
        }
    }
    let v = match slash {
        Some(i) => {
            let d = parse_scalar(&s[i + 1..])?;
            if d == 0.0 {
                return None;
            }
            parse_scalar(&s[..i])? / d
        }
        None => match s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => {
                let x = parse_scalar(inner)?;
                if x < 0.0 {
                    return None;
                }
                x.sqrt()
            }
            None => s.parse().ok()?,
        },
    };
    v.is_finite().then_some(v)
}

fn scalar(v: &Value, field: &str) -> Result<f64, CliError> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_scalar(s),
        _ => None,
    };
    x.ok_or_else(|| CliError::Input(format!("{field}: expected a number or a fraction string, got {v}")))
}

fn array<'a>(v: &'a Value, field: &str, len: usize) -> Result<&'a Vec<Value>, CliError> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(CliError::Input(format!("{field}: expected an array of {len} entries"))),
    }
}

/// Builds a state from a parsed JSON document.
pub fn from_json(doc: &Value, normalize: bool) -> Result<StateInput, CliError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::Input("input must be a JSON object".into()))?;
    match (obj.get("amplitudes"), obj.get("asd")) {
        (Some(_), Some(_)) => Err(CliError::Input(
            "amplitudes/asd: give exactly one of the two fields".into(),
        )),
        (None, None) => Err(CliError::Input("amplitudes/asd: neither field present".into())),
        (Some(a), None) => {
            let pairs = array(a, "amplitudes", 8)?;
            let mut c = [Complex64::new(0.0, 0.0); 8];
            for (i, pair) in pairs.iter().enumerate() {
                let field = format!("amplitudes[{i}]");
                let p = array(pair, &field, 2)?;
                c[i] = Complex64::new(scalar(&p[0], &field)?, scalar(&p[1], &field)?);
            }
            let s = if normalize {
                Amplitudes::normalize(c)
            } else {
                Amplitudes::new(c)
            };
            s.map(StateInput::Amplitudes)
                .map_err(|e| CliError::Input(format!("amplitudes: {e}")))
        }
        (None, Some(asd)) => {
            let lam = asd
                .get("lambda")
                .ok_or_else(|| CliError::Input("asd.lambda: missing".into()))?;
            let lam = array(lam, "asd.lambda", 5)?;
            let mut l = [0.0; 5];
            for (i, v) in lam.iter().enumerate() {
                l[i] = scalar(v, &format!("asd.lambda[{i}]"))?;
            }
            let phi = match asd.get("phi") {
                Some(v) => scalar(v, "asd.phi")?,
                None => 0.0,
            };
            let p = if normalize {
                AsdParams::normalized(l, phi)
            } else {
                AsdParams::new(l, phi)
            };
            p.map(StateInput::Asd).map_err(|e| CliError::Input(format!("asd: {e}")))
        }
    }
}

/// Resolves a positional state argument: a preset name, "-" for stdin, or
/// a path to a JSON file.
pub fn read_state(arg: &str, normalize: bool) -> Result<StateInput, CliError> {
    if let Some(p) = presets::by_name(arg) {
        return p
            .map(StateInput::Asd)
            .map_err(|e| CliError::Input(format!("preset {arg}: {e}")));
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    } else {
        return Err(CliError::Input(format!(
            "{arg}: not a preset (ghz, w, G, kappa, vartheta, omega:<l4>, varkappa:<l2>) or a readable file"
        )));
    };
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{arg}: invalid JSON: {e}")))?;
    from_json(&doc, normalize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("0.25"), Some(0.25));
        assert_eq!(parse_scalar("1/4"), Some(0.25));
        assert_eq!(parse_scalar(" 1 / 3 "), Some(1.0 / 3.0));
        assert_eq!(parse_scalar("1/sqrt(2)"), Some(1.0 / 2f64.sqrt()));
        assert_eq!(parse_scalar("sqrt(2)/2"), Some(2f64.sqrt() / 2.0));
        assert_eq!(parse_scalar("sqrt(1/2)"), Some(0.5f64.sqrt()));
        assert_eq!(parse_scalar("1/2/4"), Some(0.125));
        assert_eq!(parse_scalar("sqrt(2"), None);
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("sqrt(-1)"), None);
        assert_eq!(parse_scalar("abc"), None);
        assert_eq!(parse_scalar("inf"), None);
    }

    #[test]
    fn asd_document() {
        let doc = json!({"asd": {"lambda": ["1/sqrt(3)", 0, "1/sqrt(3)", "1/sqrt(3)", 0], "phi": 0}});
        let s = from_json(&doc, false).unwrap();
        assert_eq!(s, StateInput::Asd(presets::w_asd()));
    }

    #[test]
    fn amplitude_document_and_normalization() {
        let mut pairs = vec![json!([0, 0]); 8];
        pairs[0] = json!([1, 0]);
        pairs[7] = json!([1, 0]);
        let doc = json!({ "amplitudes": pairs });
        assert!(matches!(from_json(&doc, false), Err(CliError::Input(_))));
        let s = from_json(&doc, true).unwrap().amplitudes();
        assert!((s.coeffs()[7].re - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn errors_name_the_field() {
        let err = |doc: Value| match from_json(&doc, true) {
            Err(CliError::Input(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(err(json!({"asd": {"lambda": [1, 0, 0]}})).starts_with("asd.lambda"));
        assert!(err(json!({"asd": {"lambda": [1, 0, "x", 0, 0]}})).starts_with("asd.lambda[2]"));
        assert!(err(json!({"amplitudes": [[1, 0]]})).starts_with("amplitudes"));
        assert!(err(json!({})).contains("neither"));
        assert!(err(json!({"asd": {}, "amplitudes": []})).contains("exactly one"));
    }
}
