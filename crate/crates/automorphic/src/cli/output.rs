use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

use crate::numerics::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// One output cell. Computed numbers always carry an error estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(i128),
    Bool(bool),
    Real { value: f64, err: f64 },
    Complex { value: Complex, err: f64 },
}

impl Field {
    pub fn real(value: f64, err: f64) -> Field {
        Field::Real { value, err }
    }

    pub fn complex(value: Complex, err: f64) -> Field {
        Field::Complex { value, err }
    }

    pub fn text(s: impl Into<String>) -> Field {
        Field::Text(s.into())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, field: Field) -> Self {
        self.0.push((key.to_string(), field));
        self
    }
}

/// Everything a command prints.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub records: Vec<Record>,
    pub passed: bool,
}

/// Round-trip formatting: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}

fn fmt_c(z: Complex) -> String {
    let im = fmt_f64(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fmt_f64(z.re))
}

fn json_f64(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn expand(key: &str, field: &Field) -> Vec<(String, String, Value)> {
    let k = |suffix: &str| format!("{key}{suffix}");
    match field {
        Field::Text(s) => vec![(k(""), s.clone(), Value::String(s.clone()))],
        Field::Bool(b) => vec![(k(""), b.to_string(), Value::Bool(*b))],
        Field::Int(n) => {
            let json = i64::try_from(*n).map_or_else(|_| Value::String(n.to_string()), |v| Value::Number(v.into()));
            vec![(k(""), n.to_string(), json), (k("_err"), "0".into(), Value::Number(0.into()))]
        }
        Field::Real { value, err } => vec![
            (k(""), fmt_f64(*value), json_f64(*value)),
            (k("_err"), fmt_f64(*err), json_f64(*err)),
        ],
        Field::Complex { value, err } => vec![
            (k("_re"), fmt_f64(value.re), json_f64(value.re)),
            (k("_im"), fmt_f64(value.im), json_f64(value.im)),
            (k("_err"), fmt_f64(*err), json_f64(*err)),
        ],
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("seed".into(), Value::Number(self.seed.into()));
        top.insert("tolerance".into(), self.tolerance.map_or(Value::Null, json_f64));
        top.insert("passed".into(), Value::Bool(self.passed));
        let records = self
            .records
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (key, field) in &r.0 {
                    for (k, _, v) in expand(key, field) {
                        m.insert(k, v);
                    }
                }
                Value::Object(m)
            })
            .collect();
        top.insert("records".into(), Value::Array(records));
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        out.push('\n');
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let tol = self.tolerance.map_or("none".to_string(), fmt_f64);
        let _ = writeln!(
            out,
            "# command={} seed={} tolerance={tol} passed={}",
            self.command, self.seed, self.passed
        );
        let mut header: Option<Vec<String>> = None;
        for r in &self.records {
            let cells: Vec<(String, String, Value)> = r.0.iter().flat_map(|(k, f)| expand(k, f)).collect();
            let keys: Vec<String> = cells.iter().map(|c| c.0.clone()).collect();
            if header.as_ref() != Some(&keys) {
                let _ = writeln!(out, "{}", keys.join(","));
                header = Some(keys);
            }
            let row: Vec<String> = cells.into_iter().map(|c| csv_escape(&c.1)).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let parts: Vec<String> = r
                .0
                .iter()
                .map(|(k, f)| match f {
                    Field::Text(s) => format!("{k}={s}"),
                    Field::Bool(b) => format!("{k}={b}"),
                    Field::Int(n) => format!("{k}={n}"),
                    Field::Real { value, err } => format!("{k}={} ±{}", fmt_f64(*value), fmt_f64(*err)),
                    Field::Complex { value, err } => format!("{k}={} ±{}", fmt_c(*value), fmt_f64(*err)),
                })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  "));
        }
        let tol = self.tolerance.map_or(String::new(), |t| format!(" tolerance={}", fmt_f64(t)));
        let status = if self.passed { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{} seed={}{tol}: {status}", self.command, self.seed);
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn sample() -> Report {
        Report {
            command: "demo".into(),
            seed: 42,
            tolerance: Some(1e-9),
            records: vec![
                Record::new()
                    .with("n", Field::Int(10))
                    .with("a", Field::Int(-115920))
                    .with("v", Field::complex(c(0.1, -1.0 / 3.0), 1e-16)),
                Record::new()
                    .with("n", Field::Int(11))
                    .with("a", Field::Int(534612))
                    .with("v", Field::complex(c(2.0, 0.0), 0.0)),
            ],
            passed: true,
        }
    }

    #[test]
    fn every_json_number_has_an_error_field() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        for rec in v["records"].as_array().unwrap() {
            let obj = rec.as_object().unwrap();
            for (k, val) in obj {
                if val.is_number() && !k.ends_with("_err") {
                    let base = k.trim_end_matches("_re").trim_end_matches("_im");
                    assert!(obj.contains_key(&format!("{base}_err")), "{k}");
                }
            }
        }
        assert_eq!(v["records"][0]["a"], -115920);
    }

    #[test]
    fn csv_round_trips_floats() {
        let out = sample().render(Format::Csv);
        let row = out.lines().nth(2).unwrap();
        let im: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
        assert_eq!(im, -1.0 / 3.0);
        assert!(out.starts_with("# command=demo seed=42"));
    }

    #[test]
    fn huge_integers_stay_exact() {
        let big = 12_345_678_901_234_567_890_123i128;
        let r = Report {
            records: vec![Record::new().with("a", Field::Int(big))],
            ..sample()
        };
        assert!(r.render(Format::Json).contains("\"12345678901234567890123\""));
        assert!(r.render(Format::Text).contains("a=12345678901234567890123"));
    }

    #[test]
    fn rendering_is_deterministic() {
        for f in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(sample().render(f), sample().render(f));
        }
    }
}
