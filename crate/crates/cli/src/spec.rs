//! Arrangement files.
//!
//! ```json
//! {"ambient_dimension": 2, "modulus": 3,
//!  "subspaces": [{"name": "L1", "equations": [[1, 0, 0]]},
//!                {"name": "L2", "equations": [[0, 1, "1/2"]]}]}
//! ```
//!
//! A row `[a_1, .., a_n, b]` means `a_1 x_1 + .. + a_n x_n = b`. Entries are
//! JSON integers or strings `"p/q"`.

use std::path::Path;

use arrcoh::arrangement::{Arrangement, ArrangementError};
use arrcoh::linear::{format_rational, parse_rational, AffineSubspace};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    ambient_dimension: usize,
    #[serde(default)]
    modulus: Option<u64>,
    subspaces: Vec<RawSubspace>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubspace {
    name: String,
    equations: Vec<Vec<Value>>,
}

/// A single subspace file for `restrict`: `{"equations": [...]}`, optionally
/// with a name.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubspaceFile {
    #[serde(default)]
    name: Option<String>,
    equations: Vec<Vec<Value>>,
}

/// The input as echoed in reports, entries rendered as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecEcho {
    pub ambient_dimension: usize,
    pub modulus: u64,
    pub subspaces: Vec<SubspaceEcho>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceEcho {
    pub name: String,
    pub equations: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub arrangement: Arrangement,
    pub modulus: u64,
    pub echo: SpecEcho,
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Reads and validates an arrangement file. `modulus` overrides the one in
/// the file.
pub fn parse_spec(path: &Path, modulus: Option<u64>) -> Result<ParsedSpec, CliError> {
    parse_spec_str(&read_file(path)?, modulus)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::MalformedJson(e.to_string()))?;
    serde_json::from_value(value).map_err(|e| CliError::InvalidSpec(e.to_string()))
}

fn entry(name: &str, v: &Value) -> Result<BigRational, CliError> {
    let bad = || CliError::BadRational {
        name: name.to_string(),
        value: v.to_string(),
    };
    match v {
        Value::Number(x) if x.is_i64() || x.is_u64() => parse_rational(&x.to_string()).map_err(|_| bad()),
        Value::String(s) => parse_rational(s).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn subspace(n: usize, name: &str, rows: &[Vec<Value>]) -> Result<(AffineSubspace, SubspaceEcho), CliError> {
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != n + 1 {
            return Err(CliError::BadEquationRow {
                name: name.to_string(),
                expected: n + 1,
                found: row.len(),
            });
        }
        parsed.push(row.iter().map(|v| entry(name, v)).collect::<Result<Vec<_>, _>>()?);
    }
    let echo = SubspaceEcho {
        name: name.to_string(),
        equations: parsed.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
    };
    let s = AffineSubspace::from_equations(n, parsed).map_err(CliError::computation)?;
    if s.is_full() {
        return Err(CliError::NotProper(name.to_string()));
    }
    if s.is_empty() {
        return Err(CliError::EmptySubspace(name.to_string()));
    }
    Ok((s, echo))
}

pub fn parse_spec_str(text: &str, modulus: Option<u64>) -> Result<ParsedSpec, CliError> {
    let raw: RawSpec = parse_json(text)?;
    if raw.ambient_dimension == 0 {
        return Err(CliError::InvalidSpec("ambient_dimension must be positive".into()));
    }
    let modulus = modulus.or(raw.modulus).ok_or(CliError::MissingModulus)?;
    if modulus < 2 {
        return Err(CliError::BadModulus(modulus));
    }
    let n = raw.ambient_dimension;
    let mut members = Vec::new();
    let mut echoes = Vec::new();
    for s in &raw.subspaces {
        let (sub, echo) = subspace(n, &s.name, &s.equations)?;
        members.push((s.name.clone(), sub));
        echoes.push(echo);
    }
    let arrangement = Arrangement::new(n, members).map_err(|e| match e {
        ArrangementError::DuplicateName(name) => CliError::DuplicateName(name),
        ArrangementError::DuplicateSubspace(a, b) => CliError::DuplicateSubspace(a, b),
        ArrangementError::NotProper(name) => CliError::NotProper(name),
        other => CliError::computation(other),
    })?;
    Ok(ParsedSpec {
        arrangement,
        modulus,
        echo: SpecEcho {
            ambient_dimension: n,
            modulus,
            subspaces: echoes,
        },
    })
}

/// Reads the `--subspace` file of `restrict` in an ambient space of dimension `n`.
pub fn parse_subspace_str(text: &str, n: usize) -> Result<(AffineSubspace, SubspaceEcho), CliError> {
    let raw: RawSubspaceFile = parse_json(text)?;
    let name = raw.name.unwrap_or_else(|| "V'".to_string());
    let (s, echo) = subspace(n, &name, &raw.equations).or_else(|e| match e {
        // restricting to the whole space is allowed
        CliError::NotProper(_) => {
            let rows = raw
                .equations
                .iter()
                .map(|r| r.iter().map(|v| entry(&name, v)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let echo = SubspaceEcho {
                name: name.clone(),
                equations: rows.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            };
            Ok((AffineSubspace::full(n), echo))
        }
        other => Err(other),
    })?;
    Ok((s, echo))
}
