//! The JSON presentation format carrying extension data: field, the two
//! algebra blocks, the action matrices, and the factor set. Scalars travel
//! as strings so exactness survives serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extension::{ExtensionData, FactorSet};
use crate::lie::{LieAlgebra, RightAction, SparseMatrix, Vector};
use crate::scalar::{FieldError, FieldSpec, ScalarError};

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl PresentationError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        PresentationError::Schema { path: path.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraBlock {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixEntry {
    pub row: usize,
    pub col: usize,
    pub val: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionEntry {
    pub u: usize,
    pub matrix: Vec<MatrixEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FactorSetEntry {
    pub u: usize,
    pub v: usize,
    pub value: BTreeMap<String, String>,
}

/// The on-disk form of [`ExtensionData`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationFile {
    pub field: FieldJson,
    #[serde(rename = "M")]
    pub m: AlgebraBlock,
    #[serde(rename = "L")]
    pub l: AlgebraBlock,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<ActionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factor_set: Vec<FactorSetEntry>,
}

impl PresentationFile {
    pub fn from_json_str(text: &str) -> Result<Self, PresentationError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, PresentationError> {
        let text = std::fs::read_to_string(path).map_err(|source| PresentationError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    fn field_spec(&self) -> Result<FieldSpec, PresentationError> {
        match self.field.kind.as_str() {
            "rational" => match self.field.p {
                None => Ok(FieldSpec::Rationals),
                Some(_) => {
                    Err(PresentationError::schema("field.p", "p is only valid for prime fields"))
                }
            },
            "prime" => match self.field.p {
                Some(p) => Ok(FieldSpec::prime(p)?),
                None => Err(PresentationError::schema("field.p", "prime fields require p")),
            },
            other => Err(PresentationError::schema(
                "field.type",
                format!("unknown field type `{other}`; expected rational or prime"),
            )),
        }
    }

    /// Builds the extension data. Structural checks only; the algebraic
    /// validators run separately so invalid data can still be diagnosed.
    pub fn into_extension_data(&self) -> Result<ExtensionData, PresentationError> {
        let field = self.field_spec()?;
        let m = parse_block(&self.m, field, "M")?;
        let l = parse_block(&self.l, field, "L")?;

        let mut seen = std::collections::BTreeSet::new();
        for name in m.basis_names().iter().chain(l.basis_names()) {
            if !seen.insert(name.clone()) {
                return Err(PresentationError::schema(
                    "basis",
                    format!("basis name `{name}` is not unique across M and L"),
                ));
            }
        }

        let mut mats: Vec<SparseMatrix> =
            (0..l.dim()).map(|_| SparseMatrix::zero(m.dim(), m.dim())).collect();
        let mut seen_u = std::collections::BTreeSet::new();
        for (idx, entry) in self.action.iter().enumerate() {
            let path = format!("action[{idx}]");
            if entry.u >= l.dim() {
                return Err(PresentationError::schema(
                    format!("{path}.u"),
                    format!("index {} out of range for dim(L) = {}", entry.u, l.dim()),
                ));
            }
            if !seen_u.insert(entry.u) {
                return Err(PresentationError::schema(
                    format!("{path}.u"),
                    format!("duplicate action entry for generator {}", entry.u),
                ));
            }
            for (eidx, cell) in entry.matrix.iter().enumerate() {
                let cell_path = format!("{path}.matrix[{eidx}]");
                if cell.row >= m.dim() || cell.col >= m.dim() {
                    return Err(PresentationError::schema(
                        cell_path,
                        format!("matrix index out of range for dim(M) = {}", m.dim()),
                    ));
                }
                let val = field.parse(&cell.val).map_err(|e| {
                    PresentationError::schema(format!("{cell_path}.val"), scalar_msg(&e))
                })?;
                mats[entry.u].set(cell.row, cell.col, val);
            }
        }
        let action = RightAction::new(mats);

        let mut g_entries = Vec::new();
        for (idx, entry) in self.factor_set.iter().enumerate() {
            let path = format!("factor_set[{idx}]");
            if entry.u >= entry.v {
                return Err(PresentationError::schema(
                    path,
                    format!("requires u < v, got u={} v={}", entry.u, entry.v),
                ));
            }
            if entry.v >= l.dim() {
                return Err(PresentationError::schema(
                    format!("{path}.v"),
                    format!("index {} out of range for dim(L) = {}", entry.v, l.dim()),
                ));
            }
            let value = parse_named_vector(&entry.value, &m, field, &format!("{path}.value"))?;
            g_entries.push(((entry.u, entry.v), value));
        }
        let g = FactorSet::new(l.dim(), m.dim(), g_entries);

        Ok(ExtensionData { m, l, action, g })
    }

    /// Canonical presentation of in-memory extension data.
    pub fn from_data(data: &ExtensionData) -> PresentationFile {
        let field = match data.m.field() {
            FieldSpec::Rationals => FieldJson { kind: "rational".into(), p: None },
            FieldSpec::Prime(p) => FieldJson { kind: "prime".into(), p: Some(p) },
        };
        PresentationFile {
            field,
            m: block_of(&data.m),
            l: block_of(&data.l),
            action: data
                .action
                .matrices()
                .iter()
                .enumerate()
                .filter(|(_, mat)| mat.entries().next().is_some())
                .map(|(u, mat)| ActionEntry {
                    u,
                    matrix: mat
                        .entries()
                        .map(|(row, col, val)| MatrixEntry { row, col, val: val.to_string() })
                        .collect(),
                })
                .collect(),
            factor_set: data
                .g
                .entries()
                .map(|((u, v), value)| FactorSetEntry {
                    u,
                    v,
                    value: named_map(value, data.m.basis_names()),
                })
                .collect(),
        }
    }
}

fn scalar_msg(e: &ScalarError) -> String {
    e.to_string()
}

fn named_map(v: &Vector, names: &[String]) -> BTreeMap<String, String> {
    v.iter().map(|(i, c)| (names[i].clone(), c.to_string())).collect()
}

fn block_of(alg: &LieAlgebra) -> AlgebraBlock {
    AlgebraBlock {
        dim: alg.dim(),
        basis: alg.basis_names().to_vec(),
        brackets: alg
            .structure_constants()
            .map(|((i, j), v)| BracketEntry { i, j, coeffs: named_map(v, alg.basis_names()) })
            .collect(),
    }
}

fn parse_block(
    block: &AlgebraBlock,
    field: FieldSpec,
    label: &str,
) -> Result<LieAlgebra, PresentationError> {
    if block.basis.len() != block.dim {
        return Err(PresentationError::schema(
            format!("{label}.basis"),
            format!("dim is {} but {} basis names given", block.dim, block.basis.len()),
        ));
    }
    let mut entries = Vec::new();
    for (idx, entry) in block.brackets.iter().enumerate() {
        let path = format!("{label}.brackets[{idx}]");
        if entry.i >= entry.j {
            return Err(PresentationError::schema(
                path,
                format!("requires i < j, got i={} j={}", entry.i, entry.j),
            ));
        }
        if entry.j >= block.dim {
            return Err(PresentationError::schema(
                format!("{path}.j"),
                format!("index {} out of range for dim {}", entry.j, block.dim),
            ));
        }
        let mut v = Vector::zero(block.dim);
        for (name, text) in &entry.coeffs {
            let Some(k) = block.basis.iter().position(|b| b == name) else {
                return Err(PresentationError::schema(
                    format!("{path}.coeffs"),
                    format!("unknown basis name `{name}` in {label}"),
                ));
            };
            let c = field.parse(text).map_err(|e| {
                PresentationError::schema(format!("{path}.coeffs.{name}"), scalar_msg(&e))
            })?;
            v.add_entry(k, &c);
        }
        entries.push(((entry.i, entry.j), v));
    }
    LieAlgebra::new(field, block.basis.clone(), entries).map_err(|e| {
        PresentationError::schema(format!("{label}.brackets"), e.to_string())
    })
}

fn parse_named_vector(
    map: &BTreeMap<String, String>,
    ambient: &LieAlgebra,
    field: FieldSpec,
    path: &str,
) -> Result<Vector, PresentationError> {
    let mut v = Vector::zero(ambient.dim());
    for (name, text) in map {
        let Some(k) = ambient.basis_names().iter().position(|b| b == name) else {
            return Err(PresentationError::schema(
                path.to_string(),
                format!("unknown basis name `{name}`"),
            ));
        };
        let c = field
            .parse(text)
            .map_err(|e| PresentationError::schema(format!("{path}.{name}"), scalar_msg(&e)))?;
        v.add_entry(k, &c);
    }
    Ok(v)
}
