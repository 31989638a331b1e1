//! JSON series documents and canonical JSON output.
//!
//! ```json
//! {"exponents": {"kind": "ordinary", "n_max": 1000},
//!  "coefficients": {"kind": "builtin", "name": "ones"},
//!  "tail": {"kind": "uniform", "A": 1}}
//! ```
//!
//! Besides `list` and `builtin`, coefficients may be `twisted`, `scaled` or
//! `phased` wrappers around another coefficient document, so transformed
//! series round-trip without materializing their coefficients.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coefficients::Coefficients;
use crate::error::{Error, Result};
use crate::exponents::{format_rational, parse_rational, BohrMatrix, ExponentSpec, Generator, SpecView};
use crate::expr::Expr;
use crate::precision::HpReal;
use crate::series::{Block, DirichletSeries, TailMajorant};
use crate::twist::TwistVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub exponents: ExponentsFile,
    pub coefficients: CoefficientsFile,
    pub tail: TailFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub label: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentsFile {
    Ordinary {
        n_max: u64,
    },
    /// `rows` absent means the identity matrix.
    Symbolic {
        generators: Vec<GeneratorFile>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Vec<(usize, String)>>>,
    },
    Explicit {
        values: Vec<HpReal>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientsFile {
    List { values: Vec<[f64; 2]> },
    Builtin { name: String },
    Twisted { base: Box<CoefficientsFile>, twist: TwistVector },
    Scaled { base: Box<CoefficientsFile>, factor: [f64; 2] },
    Phased { base: Box<CoefficientsFile>, turns: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailFile {
    Uniform {
        #[serde(rename = "A")]
        a: f64,
    },
    /// Coefficients vanish past the listed values (or past `n` when given).
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
    },
    Listed { blocks: Vec<Block> },
}

fn build_exponents(e: &ExponentsFile) -> Result<ExponentSpec> {
    match e {
        ExponentsFile::Ordinary { n_max } => ExponentSpec::ordinary(*n_max),
        ExponentsFile::Symbolic { generators, rows } => {
            let basis: Vec<Generator> = generators
                .iter()
                .map(|g| Generator::parse(g.label.clone(), &g.expr))
                .collect::<Result<_>>()?;
            match rows {
                None => ExponentSpec::identity(basis),
                Some(rows) => {
                    let rows = rows
                        .iter()
                        .map(|row| row.iter().map(|(l, r)| Ok((*l, parse_rational(r)?))).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    ExponentSpec::symbolic(basis, rows)
                }
            }
        }
        ExponentsFile::Explicit { values } => ExponentSpec::explicit(values.clone()),
    }
}

fn build_coefficients(c: &CoefficientsFile, spec: &ExponentSpec) -> Result<Coefficients> {
    Ok(match c {
        CoefficientsFile::List { values } => Coefficients::list(values.iter().map(|v| Complex64::new(v[0], v[1])).collect()),
        CoefficientsFile::Builtin { name } => Coefficients::builtin(name)?,
        CoefficientsFile::Twisted { base, twist } => Coefficients::Twisted {
            base: Arc::new(build_coefficients(base, spec)?),
            twist: twist.clone(),
            matrix: spec.matrix()?,
        },
        CoefficientsFile::Scaled { base, factor } => Coefficients::Scaled {
            base: Arc::new(build_coefficients(base, spec)?),
            factor: Complex64::new(factor[0], factor[1]),
        },
        CoefficientsFile::Phased { base, turns } => Coefficients::Phased {
            base: Arc::new(build_coefficients(base, spec)?),
            turns: Arc::new(turns.clone()),
        },
    })
}

impl SeriesFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<DirichletSeries> {
        let spec = build_exponents(&self.exponents)?;
        let coefficients = build_coefficients(&self.coefficients, &spec)?;
        let tail = match &self.tail {
            TailFile::Uniform { a } => TailMajorant::UniformBound { a: *a },
            TailFile::Finite { n } => TailMajorant::FiniteSupport {
                n: n.unwrap_or_else(|| spec.len().min(coefficients.available())),
            },
            TailFile::Listed { blocks } => TailMajorant::ListedBounds { blocks: blocks.clone() },
        };
        let threshold = self
            .threshold
            .unwrap_or_else(|| DirichletSeries::default_threshold(&spec, &tail));
        DirichletSeries::new(self.label.clone().unwrap_or_else(|| "F".into()), spec, coefficients, tail, threshold)
    }

    pub fn from_series(series: &DirichletSeries) -> Result<Self> {
        let exponents = match series.exponents().view() {
            SpecView::Ordinary { n_max } => ExponentsFile::Ordinary { n_max },
            SpecView::Symbolic { basis, matrix } => ExponentsFile::Symbolic {
                generators: basis
                    .iter()
                    .map(|g| GeneratorFile {
                        label: g.label().to_string(),
                        expr: g.expr().to_string(),
                    })
                    .collect(),
                rows: match matrix {
                    BohrMatrix::Identity { .. } => None,
                    _ => Some(
                        (1..=series.len())
                            .map(|n| Ok(matrix.row(n)?.iter().map(|(l, r)| (*l, format_rational(r))).collect()))
                            .collect::<Result<_>>()?,
                    ),
                },
            },
            SpecView::Explicit { values } => ExponentsFile::Explicit { values: values.to_vec() },
        };
        let tail = match series.tail() {
            TailMajorant::UniformBound { a } => TailFile::Uniform { a: *a },
            TailMajorant::FiniteSupport { n } => TailFile::Finite { n: Some(*n) },
            TailMajorant::ListedBounds { blocks } => TailFile::Listed { blocks: blocks.clone() },
        };
        Ok(SeriesFile {
            label: Some(series.label.clone()),
            exponents,
            coefficients: coefficients_file(series.coefficients())?,
            tail,
            threshold: series.threshold().is_finite().then_some(series.threshold()),
        })
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        canonical_json(self)
    }
}

fn coefficients_file(c: &Coefficients) -> Result<CoefficientsFile> {
    Ok(match c {
        Coefficients::List(v) => CoefficientsFile::List {
            values: v.iter().map(|z| [z.re, z.im]).collect(),
        },
        Coefficients::Builtin(src) => CoefficientsFile::Builtin { name: src.name() },
        Coefficients::Twisted { base, twist, .. } => CoefficientsFile::Twisted {
            base: Box::new(coefficients_file(base)?),
            twist: twist.clone(),
        },
        Coefficients::Scaled { base, factor } => CoefficientsFile::Scaled {
            base: Box::new(coefficients_file(base)?),
            factor: [factor.re, factor.im],
        },
        Coefficients::Phased { base, turns } => CoefficientsFile::Phased {
            base: Box::new(coefficients_file(base)?),
            turns: turns.to_vec(),
        },
    })
}

/// Read and build a series document.
pub fn load_series(text: &str) -> Result<DirichletSeries> {
    SeriesFile::parse(text)?.build()
}

/// JSON with sorted keys and floats at 17 significant digits.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, &mut out, 0);
    out.push('\n');
    Ok(out)
}

/// A float as JSON at 17 significant digits; non-finite values become strings.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("\"{x}\"");
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let s = format!("{x:.16e}");
    let (mant, exp) = s.split_once('e').expect("exponent");
    let mant = mant.trim_end_matches('0').trim_end_matches('.');
    let mant = if mant.contains('.') { mant.to_string() } else { format!("{mant}.0") };
    if exp == "0" {
        mant
    } else {
        format!("{mant}e{exp}")
    }
}

fn write_value(v: &Value, out: &mut String, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            let flat = a.iter().all(|x| !x.is_array() && !x.is_object());
            if flat {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(x, out, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, out, depth + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&m[*k], out, depth + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
}

/// `expr` strings accepted by generators, for error messages.
pub fn parse_expr(src: &str) -> Result<Expr> {
    Expr::parse(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_ordinary_builtin() {
        let text = r#"{"exponents":{"kind":"ordinary","n_max":100},
            "coefficients":{"kind":"builtin","name":"chi:5:1"},
            "tail":{"kind":"uniform","A":1}}"#;
        let file = SeriesFile::parse(text).unwrap();
        let s = file.build().unwrap();
        let back = SeriesFile::from_series(&s).unwrap();
        let again = SeriesFile::parse(&back.to_canonical_json().unwrap()).unwrap();
        assert_eq!(back, again);
        assert_eq!(again.build().unwrap().coeff(7).unwrap(), s.coeff(7).unwrap());
    }

    #[test]
    fn symbolic_rows_exact() {
        let text = r#"{"exponents":{"kind":"symbolic","generators":[{"label":"1","expr":"1"}],
            "rows":[[[0,"3/2"]],[[0,"19/6"]]]},
            "coefficients":{"kind":"list","values":[[1,0],[0.5,-0.5]]},
            "tail":{"kind":"finite"}}"#;
        let s = load_series(text).unwrap();
        assert!((s.exponents().lambda(2) - 19.0 / 6.0).abs() < 1e-15);
        let canon = SeriesFile::from_series(&s).unwrap().to_canonical_json().unwrap();
        assert!(canon.contains("\"19/6\""));
        let s2 = load_series(&canon).unwrap();
        assert_eq!(SeriesFile::from_series(&s2).unwrap().to_canonical_json().unwrap(), canon);
    }

    #[test]
    fn rejects_unknown_kind() {
        let text = r#"{"exponents":{"kind":"weird"},"coefficients":{"kind":"builtin","name":"ones"},"tail":{"kind":"finite"}}"#;
        assert!(matches!(SeriesFile::parse(text), Err(Error::Parse(_))));
    }

    #[test]
    fn floats_at_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(2.0), "2.0");
        assert_eq!(format_float(-1500.0), "-1.5e3");
        let j = canonical_json(&serde_json::json!({"b": 1, "a": [0.5, 2]})).unwrap();
        assert!(j.find("\"a\"").unwrap() < j.find("\"b\"").unwrap());
    }
}
