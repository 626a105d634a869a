use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub file: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, checked: usize, witness: Option<String>) -> Verdict {
        Verdict {
            name: name.to_string(),
            passed,
            checked,
            witness,
        }
    }
}

/// Everything a command prints. Key order is fixed, maps are sorted, and no
/// wall-clock data is included, so equal inputs give byte-identical output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    pub config_digest: String,
    pub window: String,
    pub result: Value,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: CommandEcho, config_digest: String, window: String, result: Value, verdicts: Vec<Verdict>) -> Report {
        let passed = verdicts.iter().all(|v| v.passed);
        Report {
            command,
            config_digest,
            window,
            result,
            verdicts,
            passed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        render(&v, 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
