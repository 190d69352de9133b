//! JSON documents for algebras and truncated deformations.
//!
//! Indices in files are 1-based. An op entry `[i, j, k, "c"]` means
//! `e_i ⋄ e_j` has coefficient `c` on `e_k`; a map entry `[j, i, "c"]` means
//! `D(e_j)` has coefficient `c` on `e_i`. Omitted entries are zero.

use std::collections::{BTreeMap, BTreeSet};

use novdef::algebra::{AlgebraPresentation, BilinearOp, LinearMap};
use novdef::deform::TruncatedDeformation;
use novdef::{Field, ParamPoly, Ring};
use serde::{Deserialize, Serialize};

pub type OpEntry = (usize, usize, usize, String);
pub type MapEntry = (usize, usize, String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    #[serde(default)]
    pub ops: BTreeMap<String, Vec<OpEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<MapEntry>>,
}

fn default_field() -> String {
    "Q".into()
}

/// `mu[k]` is the sparse table of the `h^k` product; missing powers up to
/// `order` are zero and `mu[0]` defaults to the base `dot`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationFile {
    pub base: AlgebraFile,
    pub order: usize,
    pub mu: Vec<Vec<OpEntry>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field}: index {index} is outside 1..={dim}")]
    IndexOutOfRange { field: String, index: usize, dim: usize },
    #[error("{field}: {message}")]
    BadScalar { field: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        FileError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Pretty JSON with one sparse entry per line.
pub fn to_json_lines(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &serde_json::Value, indent: usize) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.iter().any(|v| v.is_array() || v.is_object()) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, v, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("[{}]", inner.join(", ")));
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 1), Value::String(k.clone())));
                write_value(out, v, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn parse_algebra_file(bytes: &[u8]) -> Result<AlgebraFile, FileError> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_deformation_file(bytes: &[u8]) -> Result<DeformationFile, FileError> {
    Ok(serde_json::from_slice(bytes)?)
}

fn check_index(field: &str, index: usize, dim: usize) -> Result<usize, FileError> {
    if index == 0 || index > dim {
        return Err(FileError::IndexOutOfRange {
            field: field.to_string(),
            index,
            dim,
        });
    }
    Ok(index - 1)
}

/// Reads scalar strings as polynomials in the declared parameters, then
/// substitutes the bound ones.
pub struct ScalarReader<'a, F> {
    params: &'a [String],
    bound: &'a BTreeMap<String, F>,
}

impl<'a, F: Field> ScalarReader<'a, F> {
    pub fn new(params: &'a [String], bound: &'a BTreeMap<String, F>) -> Self {
        Self { params, bound }
    }

    /// True when every declared parameter has a value.
    pub fn is_concrete(&self) -> bool {
        self.params.iter().all(|p| self.bound.contains_key(p))
    }

    pub fn read(&self, field: &str, s: &str) -> Result<ParamPoly<F>, FileError> {
        let bad = |message: String| FileError::BadScalar {
            field: field.to_string(),
            message,
        };
        let p: ParamPoly<F> = s.parse().map_err(|e: novdef::scalar::ParseScalarError| bad(e.to_string()))?;
        if let Some(v) = p.variables().into_iter().find(|v| !self.params.contains(v)) {
            return Err(bad(format!("undeclared parameter {v:?} in {s:?}")));
        }
        let assignment = self
            .bound
            .iter()
            .map(|(k, v)| (k.clone(), ParamPoly::constant(v.clone())))
            .collect();
        Ok(p.substitute_partial(&assignment))
    }

    pub fn read_concrete(&self, field: &str, s: &str) -> Result<F, FileError> {
        let p = self.read(field, s)?;
        p.as_constant().ok_or_else(|| FileError::BadScalar {
            field: field.to_string(),
            message: format!("{s:?} has unbound parameters"),
        })
    }
}

fn read_op<C: Ring>(
    field: &str,
    dim: usize,
    entries: &[OpEntry],
    read: &dyn Fn(&str, &str) -> Result<C, FileError>,
) -> Result<BilinearOp<C>, FileError> {
    let mut op = BilinearOp::<C>::zero(dim);
    for (i, j, k, s) in entries {
        let (i, j, k) = (check_index(field, *i, dim)?, check_index(field, *j, dim)?, check_index(field, *k, dim)?);
        let v = read(field, s)?;
        let sum = op.get(i, j, k).clone() + v;
        op.set(i, j, k, sum);
    }
    Ok(op)
}

fn read_map<C: Ring>(
    field: &str,
    dim: usize,
    entries: &[MapEntry],
    read: &dyn Fn(&str, &str) -> Result<C, FileError>,
) -> Result<LinearMap<C>, FileError> {
    let mut m = LinearMap::<C>::zero(dim);
    for (j, i, s) in entries {
        let (j, i) = (check_index(field, *j, dim)?, check_index(field, *i, dim)?);
        let v = read(field, s)?;
        let sum = m.get(i, j).clone() + v;
        m.set(i, j, sum);
    }
    Ok(m)
}

impl AlgebraFile {
    pub fn presentation<C: Ring>(
        &self,
        read: &dyn Fn(&str, &str) -> Result<C, FileError>,
    ) -> Result<AlgebraPresentation<C>, FileError> {
        let mut alg = AlgebraPresentation::new(self.dim);
        for (label, entries) in &self.ops {
            alg = alg.with_op(label, read_op(&format!("ops.{label}"), self.dim, entries, read)?);
        }
        Ok(alg)
    }

    pub fn map<C: Ring>(
        &self,
        label: &str,
        read: &dyn Fn(&str, &str) -> Result<C, FileError>,
    ) -> Result<LinearMap<C>, FileError> {
        let entries = self
            .maps
            .get(label)
            .ok_or_else(|| FileError::Invalid(format!("file has no map named {label:?}")))?;
        read_map(&format!("maps.{label}"), self.dim, entries, read)
    }

    pub fn from_presentation<R: Ring>(alg: &AlgebraPresentation<R>) -> Self {
        let ops = alg.ops.iter().map(|(label, op)| (label.clone(), op_entries(op))).collect();
        let mut params = BTreeSet::new();
        for op in alg.ops.values() {
            for (_, _, _, v) in op.entries() {
                params.extend(v.parameters());
            }
        }
        AlgebraFile {
            dim: alg.dim,
            field: R::field_tag().to_string(),
            params: params.into_iter().collect(),
            ops,
            maps: BTreeMap::new(),
        }
    }

    pub fn with_map<R: Ring>(mut self, label: &str, m: &LinearMap<R>) -> Self {
        let n = m.dim();
        let mut entries = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let v = m.get(i, j);
                if !v.is_zero() {
                    entries.push((j + 1, i + 1, v.to_string()));
                }
            }
        }
        self.maps.insert(label.to_string(), entries);
        self
    }
}

fn op_entries<R: Ring>(op: &BilinearOp<R>) -> Vec<OpEntry> {
    op.entries()
        .filter(|(_, _, _, v)| !v.is_zero())
        .map(|(i, j, k, v)| (i + 1, j + 1, k + 1, v.to_string()))
        .collect()
}

impl DeformationFile {
    pub fn deformation<C: Ring>(
        &self,
        read: &dyn Fn(&str, &str) -> Result<C, FileError>,
    ) -> Result<TruncatedDeformation<C>, FileError> {
        let base = self.base.presentation(read)?;
        let dim = self.base.dim;
        if self.mu.len() > self.order {
            return Err(FileError::Invalid(format!(
                "{} products listed for order {}",
                self.mu.len(),
                self.order
            )));
        }
        let mut mu = Vec::with_capacity(self.order);
        for k in 0..self.order {
            match self.mu.get(k) {
                Some(entries) => mu.push(read_op(&format!("mu[{k}]"), dim, entries, read)?),
                None if k == 0 => mu.push(base.op("dot").map_err(|e| FileError::Invalid(e.to_string()))?.clone()),
                None => mu.push(BilinearOp::zero(dim)),
            }
        }
        let base = if base.ops.contains_key("dot") {
            base
        } else {
            base.with_op("dot", mu[0].clone())
        };
        TruncatedDeformation::new(base, mu).map_err(|e| FileError::Invalid(e.to_string()))
    }

    pub fn from_deformation<R: Ring>(d: &TruncatedDeformation<R>) -> Self {
        let mut base = AlgebraFile::from_presentation(d.base());
        let mut mu: Vec<Vec<OpEntry>> = d.mu().iter().map(op_entries).collect();
        while mu.len() > 1 && mu.last().is_some_and(Vec::is_empty) {
            mu.pop();
        }
        let mut params: BTreeSet<String> = base.params.iter().cloned().collect();
        for op in d.mu() {
            for (_, _, _, v) in op.entries() {
                params.extend(v.parameters());
            }
        }
        base.params = params.into_iter().collect();
        DeformationFile {
            base,
            order: d.order(),
            mu,
        }
    }
}
