//! Reading algebra specs, plane files and initial states from TOML.
//!
//! Algebra spec file:
//!
//! ```toml
//! name = "heisenberg"
//! dim = 3
//! structure = [[1, 2, 3, 1.0]]   # (i, j, k, c), 1-based, i < j suffices
//! gram = "identity"              # or { diag = [1, 2, 3] } or [[...], ...]
//! ```
//!
//! A semidirect spec file has `[g]` and `[h]` tables of that shape plus a
//! top-level `action = [[g_index, h_row, h_col, value], ...]`, again 1-based.
//! TOML assigns keys to the most recent table, so `action` goes above `[g]`.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use toml::Value;

use semicurv::algebra::{MetricAlgebra, MetricAlgebraSpec, Tolerances};
use semicurv::semidirect::{ActionSpec, SemidirectAlgebra};
use semicurv::torus::{FieldTerm, Parity, TrigFunction, TrigVectorField};
use semicurv::Pair;

use crate::config::read_text;
use crate::error::CliError;

pub fn read_toml(path: &Path) -> Result<toml::Table, CliError> {
    let text = read_text(path)?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn number(v: &Value, what: &str) -> Result<f64, CliError> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(CliError::config(format!("{what}: expected a number, found {other}"))),
    }
}

fn integer(v: &Value, what: &str) -> Result<i64, CliError> {
    v.as_integer()
        .ok_or_else(|| CliError::config(format!("{what}: expected an integer, found {v}")))
}

fn index(v: &Value, what: &str) -> Result<usize, CliError> {
    let i = integer(v, what)?;
    if i < 1 {
        return Err(CliError::config(format!("{what}: indices are 1-based, found {i}")));
    }
    Ok(i as usize - 1)
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::config(format!("{what}: expected an array, found {v}")))
}

pub fn numbers(v: &Value, what: &str) -> Result<Vec<f64>, CliError> {
    array(v, what)?.iter().map(|x| number(x, what)).collect()
}

fn quadruples(v: &Value, what: &str) -> Result<Vec<(usize, usize, usize, f64)>, CliError> {
    array(v, what)?
        .iter()
        .map(|row| {
            let row = array(row, what)?;
            if row.len() != 4 {
                return Err(CliError::config(format!(
                    "{what}: entries have 4 fields, found {}",
                    row.len()
                )));
            }
            Ok((
                index(&row[0], what)?,
                index(&row[1], what)?,
                index(&row[2], what)?,
                number(&row[3], what)?,
            ))
        })
        .collect()
}

fn gram(v: Option<&Value>, dim: usize) -> Result<DMatrix<f64>, CliError> {
    match v {
        None => Ok(DMatrix::identity(dim, dim)),
        Some(Value::String(s)) if s == "identity" => Ok(DMatrix::identity(dim, dim)),
        Some(Value::Table(t)) if t.contains_key("diag") => {
            let d = numbers(&t["diag"], "gram.diag")?;
            if d.len() != dim {
                return Err(CliError::config(format!(
                    "gram.diag has {} entries, expected {dim}",
                    d.len()
                )));
            }
            Ok(DMatrix::from_diagonal(&DVector::from_vec(d)))
        }
        Some(Value::Array(rows)) => {
            if rows.len() != dim {
                return Err(CliError::config(format!(
                    "gram has {} rows, expected {dim}",
                    rows.len()
                )));
            }
            let mut m = DMatrix::zeros(dim, dim);
            for (i, row) in rows.iter().enumerate() {
                let r = numbers(row, "gram")?;
                if r.len() != dim {
                    return Err(CliError::config(format!("gram row {} has {} entries", i + 1, r.len())));
                }
                for (j, x) in r.into_iter().enumerate() {
                    m[(i, j)] = x;
                }
            }
            Ok(m)
        }
        Some(other) => Err(CliError::config(format!(
            "gram must be \"identity\", {{ diag = [...] }} or a matrix, found {other}"
        ))),
    }
}

fn known_keys(t: &toml::Table, keys: &[&str], what: &str) -> Result<(), CliError> {
    match t.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(CliError::config(format!(
            "{what}: unknown key `{k}` (expected one of {})",
            keys.join(", ")
        ))),
        None => Ok(()),
    }
}

pub fn algebra_spec(t: &toml::Table) -> Result<MetricAlgebraSpec, CliError> {
    known_keys(t, &["name", "dim", "structure", "gram"], "algebra spec")?;
    let dim = t
        .get("dim")
        .ok_or_else(|| CliError::config("algebra spec needs `dim`"))
        .and_then(|v| integer(v, "dim"))?;
    if dim < 1 {
        return Err(CliError::config("dim must be positive"));
    }
    let dim = dim as usize;
    let entries = match t.get("structure") {
        Some(v) => quadruples(v, "structure")?,
        None => Vec::new(),
    };
    let spec = MetricAlgebraSpec::from_entries(dim, &entries, gram(t.get("gram"), dim)?)?;
    Ok(match t.get("name").and_then(Value::as_str) {
        Some(n) => spec.with_name(n),
        None => spec,
    })
}

/// An algebra or semidirect spec read from a file.
pub enum SpecFile {
    Algebra(MetricAlgebraSpec),
    Semidirect {
        g: MetricAlgebraSpec,
        h: MetricAlgebraSpec,
        action: Vec<(usize, usize, usize, f64)>,
        name: Option<String>,
    },
}

pub fn spec_file(path: &Path) -> Result<SpecFile, CliError> {
    let t = read_toml(path)?;
    if t.contains_key("g") || t.contains_key("h") {
        known_keys(&t, &["name", "g", "h", "action"], "semidirect spec")?;
        let sub = |key: &str| -> Result<MetricAlgebraSpec, CliError> {
            let table = t
                .get(key)
                .and_then(Value::as_table)
                .ok_or_else(|| CliError::config(format!("semidirect spec needs a [{key}] table")))?;
            algebra_spec(table)
        };
        let action = match t.get("action") {
            Some(v) => quadruples(v, "action")?,
            None => Vec::new(),
        };
        Ok(SpecFile::Semidirect {
            g: sub("g")?,
            h: sub("h")?,
            action,
            name: t.get("name").and_then(Value::as_str).map(str::to_string),
        })
    } else {
        Ok(SpecFile::Algebra(algebra_spec(&t)?))
    }
}

pub fn build_semidirect(
    g: MetricAlgebraSpec,
    h: MetricAlgebraSpec,
    action: &[(usize, usize, usize, f64)],
    name: Option<String>,
    tol: Tolerances,
) -> Result<SemidirectAlgebra, CliError> {
    let g = MetricAlgebra::with_tolerances(g, tol)?;
    let h = MetricAlgebra::with_tolerances(h, tol)?;
    let action = ActionSpec::from_entries(g.dim(), h.dim(), action)?;
    let sd = SemidirectAlgebra::build(g, h, action)?;
    Ok(match name {
        Some(n) => sd.with_name(n),
        None => sd,
    })
}

/// Conversion from the TOML value of a plane vector or initial state.
pub trait FromToml: Sized {
    fn from_toml(v: &Value, what: &str) -> Result<Self, CliError>;
}

impl FromToml for DVector<f64> {
    fn from_toml(v: &Value, what: &str) -> Result<Self, CliError> {
        Ok(DVector::from_vec(numbers(v, what)?))
    }
}

/// `[parity, k1, k2, coefficient, component]`
fn field_terms(v: &Value, what: &str) -> Result<Vec<FieldTerm>, CliError> {
    array(v, what)?
        .iter()
        .map(|row| {
            let row = array(row, what)?;
            if row.len() != 5 {
                return Err(CliError::config(format!(
                    "{what}: terms are [parity, k1, k2, coefficient, component], found {} fields",
                    row.len()
                )));
            }
            let parity: Parity = row[0]
                .as_str()
                .ok_or_else(|| CliError::config(format!("{what}: parity must be \"cos\" or \"sin\"")))?
                .parse()
                .map_err(|e: String| CliError::config(format!("{what}: {e}")))?;
            let component = integer(&row[4], what)?;
            Ok(FieldTerm {
                parity,
                k1: integer(&row[1], what)?,
                k2: integer(&row[2], what)?,
                coefficient: number(&row[3], what)?,
                component: component.max(0) as usize,
            })
        })
        .collect()
}

impl FromToml for TrigVectorField {
    fn from_toml(v: &Value, what: &str) -> Result<Self, CliError> {
        Ok(TrigVectorField::from_terms(&field_terms(v, what)?)?)
    }
}

impl FromToml for TrigFunction {
    /// Function terms use component `0`.
    fn from_toml(v: &Value, what: &str) -> Result<Self, CliError> {
        let mut f = TrigFunction::zero();
        for t in field_terms(v, what)? {
            if t.component != 0 {
                return Err(CliError::config(format!("{what}: function terms use component 0")));
            }
            f.add_term([t.k1, t.k2], t.parity, t.coefficient);
        }
        Ok(f)
    }
}

impl<A: FromToml, B: FromToml> FromToml for Pair<A, B> {
    /// `{ g = ..., h = ... }`; a missing side is zero.
    fn from_toml(v: &Value, what: &str) -> Result<Self, CliError> {
        let t = v
            .as_table()
            .ok_or_else(|| CliError::config(format!("{what}: expected {{ g = ..., h = ... }}")))?;
        for key in t.keys() {
            if key != "g" && key != "h" {
                return Err(CliError::config(format!("{what}: unknown key `{key}`")));
            }
        }
        let empty = Value::Array(Vec::new());
        let g = A::from_toml(t.get("g").unwrap_or(&empty), &format!("{what}.g"))?;
        let h = B::from_toml(t.get("h").unwrap_or(&empty), &format!("{what}.h"))?;
        Ok(Pair::new(g, h))
    }
}

/// The `[[plane]]` entries of a plane file.
pub fn plane_values(path: &Path) -> Result<Vec<(Value, Value)>, CliError> {
    let t = read_toml(path)?;
    let planes = t
        .get("plane")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::config(format!("{}: expected [[plane]] entries", path.display())))?;
    planes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = p.get("x");
            let y = p.get("y");
            match (x, y) {
                (Some(x), Some(y)) => Ok((x.clone(), y.clone())),
                _ => Err(CliError::config(format!("plane {} needs `x` and `y`", i + 1))),
            }
        })
        .collect()
}
