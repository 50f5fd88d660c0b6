//! Result documents and their JSON / TSV emission.

use equilibria::exact::{format_rational, parse_rational, Rational};
use equilibria::stochastic::{Player, PositionalStrategy};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const SOLVER: &str = "equilibria";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub solver: String,
    pub version: String,
    pub kind: String,
    pub command: String,
    pub method: Option<String>,
    /// The solution is exact (as opposed to ε-approximate).
    pub exact: bool,
    pub epsilon: Option<String>,
    pub seed: u64,
    pub counts: Value,
    pub solution: Value,
    pub certificate: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

pub fn parse_result(text: &str) -> CliResult<ResultDocument> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("result document: {e}")))
}

pub fn emit_result(r: &ResultDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("results serialize");
            s.push('\n');
            s
        }
        Format::Tsv => tsv_summary(r),
    }
}

/// Keys whose arrays are listed one element per line.
const ROW_KEYS: [&str; 9] = ["values", "x", "prices", "configuration", "profile", "winners", "cell", "cells", "equilibria"];

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(","),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// One line per node or coordinate, `index<TAB>value`. Mixed profiles get
/// `player<TAB>strategy<TAB>probability`. Scalar fields follow as
/// `key<TAB>value`.
fn tsv_summary(r: &ResultDocument) -> String {
    let mut out = String::new();
    let Value::Object(sol) = &r.solution else {
        return format!("{}\n", cell(&r.solution));
    };
    let rows = ROW_KEYS.iter().find_map(|k| sol.get(*k).map(|v| (*k, v)));
    if let Some((key, Value::Array(items))) = rows {
        for (i, item) in items.iter().enumerate() {
            match (key, item) {
                ("profile", Value::Array(block)) => {
                    for (j, p) in block.iter().enumerate() {
                        out.push_str(&format!("{i}\t{j}\t{}\n", cell(p)));
                    }
                }
                _ => out.push_str(&format!("{i}\t{}\n", cell(item))),
            }
        }
    }
    for (k, v) in sol {
        if rows.is_some_and(|(key, _)| key == k) || v.is_array() || v.is_object() {
            continue;
        }
        out.push_str(&format!("{k}\t{}\n", cell(v)));
    }
    out
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn rat_blocks(v: &[Vec<Rational>]) -> Value {
    Value::Array(v.iter().map(|b| rats(b)).collect())
}

pub fn strategy(s: &PositionalStrategy) -> Value {
    json!(s.choices)
}

pub fn player(p: Player) -> Value {
    json!(p.number())
}

fn bad(what: &str) -> CliError {
    CliError::Certification(format!("result field `{what}` is missing or malformed"))
}

/// Reading back fields of an emitted result.
pub struct Reader<'a> {
    pub value: &'a Value,
    pub path: String,
}

impl<'a> Reader<'a> {
    pub fn new(value: &'a Value, path: &str) -> Self {
        Reader { value, path: path.into() }
    }

    pub fn get(&self, key: &str) -> CliResult<Reader<'a>> {
        let path = format!("{}.{key}", self.path);
        let value = self.value.get(key).ok_or_else(|| bad(&path))?;
        Ok(Reader { value, path })
    }

    pub fn opt(&self, key: &str) -> Option<Reader<'a>> {
        self.value.get(key).filter(|v| !v.is_null()).map(|value| Reader { value, path: format!("{}.{key}", self.path) })
    }

    pub fn items(&self) -> CliResult<Vec<Reader<'a>>> {
        let a = self.value.as_array().ok_or_else(|| bad(&self.path))?;
        Ok(a.iter().enumerate().map(|(i, value)| Reader { value, path: format!("{}[{i}]", self.path) }).collect())
    }

    pub fn rational(&self) -> CliResult<Rational> {
        match self.value {
            Value::String(s) => parse_rational(s).ok_or_else(|| CliError::BadRational(s.clone())),
            Value::Number(n) => n.as_i64().map(|n| Rational::from_integer(n.into())).ok_or_else(|| bad(&self.path)),
            _ => Err(bad(&self.path)),
        }
    }

    pub fn rationals(&self) -> CliResult<Vec<Rational>> {
        self.items()?.iter().map(Reader::rational).collect()
    }

    pub fn rational_blocks(&self) -> CliResult<Vec<Vec<Rational>>> {
        self.items()?.iter().map(Reader::rationals).collect()
    }

    pub fn u64(&self) -> CliResult<u64> {
        self.value.as_u64().ok_or_else(|| bad(&self.path))
    }

    pub fn usize(&self) -> CliResult<usize> {
        Ok(self.u64()? as usize)
    }

    pub fn usizes(&self) -> CliResult<Vec<usize>> {
        self.items()?.iter().map(Reader::usize).collect()
    }

    pub fn i64(&self) -> CliResult<i64> {
        self.value.as_i64().ok_or_else(|| bad(&self.path))
    }

    pub fn str(&self) -> CliResult<&'a str> {
        self.value.as_str().ok_or_else(|| bad(&self.path))
    }

    pub fn player(&self) -> CliResult<Player> {
        Player::from_number(self.u64()?).ok_or_else(|| bad(&self.path))
    }

    pub fn strategy(&self) -> CliResult<PositionalStrategy> {
        let choices = self
            .items()?
            .iter()
            .map(|r| if r.value.is_null() { Ok(None) } else { r.usize().map(Some) })
            .collect::<CliResult<_>>()?;
        Ok(PositionalStrategy { choices })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use equilibria::rat as q;

    fn doc(solution: Value) -> ResultDocument {
        ResultDocument {
            solver: SOLVER.into(),
            version: "0".into(),
            kind: "mpg".into(),
            command: "solve".into(),
            method: None,
            exact: true,
            epsilon: None,
            seed: 0,
            counts: json!({}),
            solution,
            certificate: json!({}),
            wall_clock_ms: None,
        }
    }

    #[test]
    fn tsv_lists_values_per_node() {
        let r = doc(json!({"values": ["5", "-1/2"], "max_strategy": [1, null]}));
        assert_eq!(emit_result(&r, Format::Tsv), "0\t5\n1\t-1/2\n");
    }

    #[test]
    fn tsv_profiles_and_scalars() {
        let r = doc(json!({"profile": [["1/2", "1/2"], ["1"]], "holds": true}));
        assert_eq!(emit_result(&r, Format::Tsv), "0\t0\t1/2\n0\t1\t1/2\n1\t0\t1\nholds\ttrue\n");
    }

    #[test]
    fn json_round_trip_and_reader() {
        let r = doc(json!({"values": rats(&[q(1, 3), q(2, 1)]), "s": [null, 0]}));
        let back = parse_result(&emit_result(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
        let sol = Reader::new(&back.solution, "solution");
        assert_eq!(sol.get("values").unwrap().rationals().unwrap(), vec![q(1, 3), q(2, 1)]);
        assert_eq!(sol.get("s").unwrap().strategy().unwrap().choices, vec![None, Some(0)]);
        assert!(sol.get("nope").is_err());
    }
}
