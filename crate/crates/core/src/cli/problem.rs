use std::str::FromStr;

use num::{BigInt, BigRational};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::arrangement::{build_config, is_positive_definite, VectorConfig};
use crate::error::Error;
use crate::exactlin::{IntVector, RatVector};

/// A number written either as a JSON integer or as a string (`"12"`,
/// `"-3/4"`); strings avoid precision loss for large values.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<BigRational, String> {
        match self {
            Number::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Number::Text(s) => BigRational::from_str(s.trim()).map_err(|_| format!("not a rational number: {s:?}")),
        }
    }

    fn integer(&self) -> Result<BigInt, String> {
        let q = self.rational()?;
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(format!("expected an integer, got {q}"))
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dim: usize,
    vectors: Vec<Vec<Number>>,
    #[serde(default)]
    gram: Option<Vec<Vec<Number>>>,
    #[serde(default)]
    window_radius: Option<i64>,
    #[serde(default)]
    beta: Option<Vec<Number>>,
}

/// A validated problem file.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub config: VectorConfig,
    pub gram: Option<Vec<Vec<BigRational>>>,
    pub window_radius: Option<i64>,
    pub beta: Option<RatVector>,
}

/// A parse or validation failure, with the line it refers to when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Line of the `index`-th element of the top-level array stored under `key`.
fn element_line(text: &str, key: &str, index: usize) -> Option<usize> {
    let start = text.find(&format!("\"{key}\""))?;
    let open = start + text[start..].find('[')?;
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut in_string = false;
    let mut expecting = false;
    for (off, ch) in text[open..].char_indices() {
        if in_string {
            in_string = ch != '"';
            continue;
        }
        if depth == 1 && expecting && !ch.is_whitespace() && ch != ']' {
            if seen == index {
                return Some(text[..open + off].matches('\n').count() + 1);
            }
            seen += 1;
            expecting = false;
        }
        match ch {
            '[' => {
                depth += 1;
                expecting |= depth == 1;
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return None;
                }
            }
            ',' if depth == 1 => expecting = true,
            '"' => in_string = true,
            _ => {}
        }
    }
    None
}

fn fail(line: Option<usize>, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| fail(Some(e.line()), e.to_string()))?;
    let mut vectors = Vec::with_capacity(raw.vectors.len());
    for (i, v) in raw.vectors.iter().enumerate() {
        let line = element_line(text, "vectors", i);
        if v.len() != raw.dim {
            return Err(fail(
                line,
                format!("vectors[{i}] has {} coordinates, expected {}", v.len(), raw.dim),
            ));
        }
        let coords = v
            .iter()
            .map(Number::integer)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| fail(line, format!("vectors[{i}]: {m}")))?;
        vectors.push(IntVector::new(coords));
    }
    let config = build_config(raw.dim, vectors).map_err(|e| {
        let line = match &e {
            Error::ZeroVector { index } => element_line(text, "vectors", *index),
            _ => None,
        };
        fail(line, e.to_string())
    })?;

    let gram = match &raw.gram {
        None => None,
        Some(rows) => {
            if rows.len() != raw.dim || rows.iter().any(|r| r.len() != raw.dim) {
                return Err(fail(None, format!("gram must be a {0}x{0} matrix", raw.dim)));
            }
            let g = rows
                .iter()
                .map(|r| r.iter().map(Number::rational).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| fail(None, format!("gram: {m}")))?;
            let symmetric = (0..raw.dim).all(|i| (0..raw.dim).all(|j| g[i][j] == g[j][i]));
            if !symmetric || !is_positive_definite(&g) {
                return Err(fail(None, "gram must be symmetric positive definite"));
            }
            Some(g)
        }
    };
    let beta = match &raw.beta {
        None => None,
        Some(b) => {
            if b.len() != raw.dim {
                return Err(fail(None, format!("beta has {} coordinates, expected {}", b.len(), raw.dim)));
            }
            let c = b
                .iter()
                .map(Number::rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| fail(None, format!("beta: {m}")))?;
            Some(RatVector(c))
        }
    };
    if let Some(r) = raw.window_radius {
        if r < 0 {
            return Err(fail(None, "window_radius must be nonnegative"));
        }
    }
    Ok(ProblemFile {
        config,
        gram,
        window_radius: raw.window_radius,
        beta,
    })
}

/// Parses a comma-separated list of exact rationals, e.g. `2,1/3,-4`.
pub fn parse_point(text: &str, dim: usize) -> Result<RatVector, String> {
    let coords = text
        .split(',')
        .map(|s| BigRational::from_str(s.trim()).map_err(|_| format!("not a rational number: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(format!("point {text:?} has {} coordinates, expected {dim}", coords.len()));
    }
    Ok(RatVector(coords))
}

/// SHA-256 of a canonical rendering of the configuration, in hex.
pub fn config_digest(cfg: &VectorConfig) -> String {
    let mut canon = format!("dim={}", cfg.dim());
    for v in cfg.vectors() {
        canon.push(';');
        let parts: Vec<String> = v.0.iter().map(BigInt::to_string).collect();
        canon.push_str(&parts.join(","));
    }
    Sha256::digest(canon.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
