//! Record writers.
//!
//! Curvature CSV columns: `plane_id, numerator, denominator, sectional, sign`
//! followed by one column per term label. Trajectory CSV columns: `t`, the
//! coordinate columns of the target, `energy`, and `status` for truncated torus
//! runs. JSON lines carry the same fields under the same names. Floats are
//! written as the shortest decimal that round-trips.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use semicurv::curvature::CurvatureBreakdown;

use crate::config::Format;
use crate::error::CliError;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                CliError::config(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// `-`, `0` or `+`, with `|K| <= zero_tol` counted as zero.
pub fn sign(k: f64, zero_tol: f64) -> &'static str {
    if k.abs() <= zero_tol {
        "0"
    } else if k < 0.0 {
        "-"
    } else {
        "+"
    }
}

pub struct CurvatureRecord {
    pub plane_id: usize,
    pub breakdown: CurvatureBreakdown,
}

impl CurvatureRecord {
    fn sign(&self, zero_tol: f64) -> &'static str {
        self.breakdown.sectional.map_or("", |k| sign(k, zero_tol))
    }
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct SignSummary {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl SignSummary {
    pub fn from_records(records: &[CurvatureRecord], zero_tol: f64) -> Self {
        let mut s = SignSummary::default();
        for k in records.iter().filter_map(|r| r.breakdown.sectional) {
            match sign(k, zero_tol) {
                "-" => s.negative += 1,
                "0" => s.zero += 1,
                _ => s.positive += 1,
            }
            s.min = Some(s.min.map_or(k, |m| m.min(k)));
            s.max = Some(s.max.map_or(k, |m| m.max(k)));
        }
        s
    }

    pub fn total(&self) -> usize {
        self.negative + self.zero + self.positive
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("negative".into(), self.negative.into());
        m.insert("zero".into(), self.zero.into());
        m.insert("positive".into(), self.positive.into());
        m.insert("min".into(), self.min.map_or(Value::Null, json_float));
        m.insert("max".into(), self.max.map_or(Value::Null, json_float));
        Value::Object(m)
    }
}

impl std::fmt::Display for SignSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let opt = |x: Option<f64>| x.map_or_else(|| "none".to_string(), float);
        write!(
            f,
            "negative {} zero {} positive {} min {} max {}",
            self.negative,
            self.zero,
            self.positive,
            opt(self.min),
            opt(self.max)
        )
    }
}

const CURVATURE_COLUMNS: [&str; 5] = ["plane_id", "numerator", "denominator", "sectional", "sign"];

pub fn write_curvature(
    out: &mut dyn Write,
    format: Format,
    records: &[CurvatureRecord],
    zero_tol: f64,
    summary: Option<&SignSummary>,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<&str> = CURVATURE_COLUMNS.to_vec();
            if let Some(first) = records.first() {
                header.extend(first.breakdown.labels());
            }
            w.write_record(&header)?;
            for r in records {
                let b = &r.breakdown;
                let mut row = vec![
                    r.plane_id.to_string(),
                    float(b.numerator),
                    float(b.denominator),
                    b.sectional.map_or_else(String::new, float),
                    r.sign(zero_tol).to_string(),
                ];
                row.extend(b.terms.iter().map(|t| float(t.value)));
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for r in records {
                let b = &r.breakdown;
                let mut m = Map::new();
                m.insert("plane_id".into(), r.plane_id.into());
                m.insert("numerator".into(), json_float(b.numerator));
                m.insert("denominator".into(), json_float(b.denominator));
                m.insert("sectional".into(), b.sectional.map_or(Value::Null, json_float));
                m.insert("sign".into(), r.sign(zero_tol).into());
                for t in &b.terms {
                    m.insert(t.label.into(), json_float(t.value));
                }
                writeln!(out, "{}", Value::Object(m))?;
            }
            if let Some(s) = summary {
                let mut m = Map::new();
                m.insert("summary".into(), s.to_json());
                writeln!(out, "{}", Value::Object(m))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub struct TrajectoryTable {
    pub columns: Vec<String>,
    pub rows: Vec<(f64, Vec<f64>, f64)>,
    pub status: Option<&'static str>,
}

pub fn write_trajectory(out: &mut dyn Write, format: Format, table: &TrajectoryTable) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["t".to_string()];
            header.extend(table.columns.iter().cloned());
            header.push("energy".into());
            if table.status.is_some() {
                header.push("status".into());
            }
            w.write_record(&header)?;
            for (t, coords, e) in &table.rows {
                let mut row = vec![float(*t)];
                row.extend(coords.iter().map(|x| float(*x)));
                row.push(float(*e));
                if let Some(s) = table.status {
                    row.push(s.into());
                }
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for (t, coords, e) in &table.rows {
                let mut m = Map::new();
                m.insert("t".into(), json_float(*t));
                for (name, x) in table.columns.iter().zip(coords) {
                    m.insert(name.clone(), json_float(*x));
                }
                m.insert("energy".into(), json_float(*e));
                if let Some(s) = table.status {
                    m.insert("status".into(), s.into());
                }
                writeln!(out, "{}", Value::Object(m))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use semicurv::curvature::Term;

    fn record(id: usize, k: f64) -> CurvatureRecord {
        CurvatureRecord {
            plane_id: id,
            breakdown: CurvatureBreakdown::from_terms(
                vec![
                    Term {
                        label: "a",
                        value: k / 2.0,
                    },
                    Term {
                        label: "b",
                        value: k / 2.0,
                    },
                ],
                (1.0, 1.0, 0.0),
            ),
        }
    }

    #[test]
    fn signs_and_summary() {
        assert_eq!(sign(1e-13, 1e-12), "0");
        assert_eq!(sign(-1e-3, 1e-12), "-");
        let recs = vec![record(0, -1.0), record(1, 0.0), record(2, 0.5), record(3, 2.0)];
        let s = SignSummary::from_records(&recs, 1e-12);
        assert_eq!((s.negative, s.zero, s.positive, s.total()), (1, 1, 2, 4));
        assert_eq!((s.min, s.max), (Some(-1.0), Some(2.0)));
    }

    #[test]
    fn csv_and_jsonl_mirror() {
        let recs = vec![record(0, 0.25), record(1, -0.1)];
        let mut buf = Vec::new();
        write_curvature(&mut buf, Format::Csv, &recs, 1e-12, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "plane_id,numerator,denominator,sectional,sign,a,b\n0,0.25,1.0,0.25,+,0.125,0.125\n1,-0.1,1.0,-0.1,-,-0.05,-0.05\n"
        );
        let mut buf = Vec::new();
        let s = SignSummary::from_records(&recs, 1e-12);
        write_curvature(&mut buf, Format::Jsonl, &recs, 1e-12, Some(&s)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("{\"plane_id\":0,\"numerator\":0.25"));
        assert!(lines[2].starts_with("{\"summary\""));
    }

    #[test]
    fn shortest_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }
}
