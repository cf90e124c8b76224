//! Finite-dimensional Lie algebras presented by sparse structure constants,
//! their elements, right derivation actions, and brute-force axiom validators.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::par;
use crate::report::{Condition, ValidationReport, Violation};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("structure constant entry ({i},{j}) must have i < j")]
    NotUpperPair { i: usize, j: usize },
    #[error("expected {expected} basis names, got {got}")]
    BasisNameCount { expected: usize, got: usize },
}

/// A sparse vector in a fixed-dimensional space. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Vector {
    dim: usize,
    coords: BTreeMap<usize, Scalar>,
}

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector { dim, coords: BTreeMap::new() }
    }

    pub fn unit(dim: usize, index: usize, one: Scalar) -> Self {
        assert!(index < dim, "unit index {index} out of range for dim {dim}");
        let mut coords = BTreeMap::new();
        coords.insert(index, one);
        Vector { dim, coords }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Vector::zero(dim);
        for (i, c) in entries {
            assert!(i < dim, "entry index {i} out of range for dim {dim}");
            v.add_entry(i, &c);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Option<&Scalar> {
        self.coords.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coords.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn add_entry(&mut self, index: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coords.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        assert_eq!(self.dim, other.dim, "vector dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_entry(i, &(x * c));
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim, other.dim, "vector dimension mismatch");
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_entry(i, x);
        }
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim, other.dim, "vector dimension mismatch");
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_entry(i, &-x);
        }
        out
    }

    pub fn neg(&self) -> Vector {
        Vector {
            dim: self.dim,
            coords: self.coords.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero(self.dim);
        }
        Vector {
            dim: self.dim,
            coords: self.coords.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// Concatenates two vectors into one over the direct sum coordinates.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim + other.dim);
        for (i, c) in self.iter() {
            out.add_entry(i, c);
        }
        for (i, c) in other.iter() {
            out.add_entry(self.dim + i, c);
        }
        out
    }

    /// Projects onto coordinates `[lo, hi)`, reindexed from zero.
    pub fn slice(&self, lo: usize, hi: usize) -> Vector {
        let mut out = Vector::zero(hi - lo);
        for (i, c) in self.iter() {
            if i >= lo && i < hi {
                out.add_entry(i - lo, c);
            }
        }
        out
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.iter() {
            if c.is_one() {
                parts.push(names[i].clone());
            } else {
                parts.push(format!("({})*{}", c, names[i]));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(i, c)| if c.is_one() { format!("e{i}") } else { format!("({c})e{i}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A sparse matrix acting on coordinate vectors: `out[row] += m[row,col] * v[col]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, row: usize, col: usize, c: Scalar) {
        assert!(row < self.rows && col < self.cols, "matrix index out of range");
        if c.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), c);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|((r, c), v)| (*r, *c, v))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.cols, "matrix/vector dimension mismatch");
        let mut out = Vector::zero(self.rows);
        for ((row, col), m) in &self.entries {
            if let Some(x) = v.coeff(*col) {
                out.add_entry(*row, &(m * x));
            }
        }
        out
    }
}

/// A finite-dimensional Lie algebra given by structure constants on a named
/// basis: entries `(i, j) -> [e_i, e_j]` stored for `i < j` only, with
/// antisymmetry implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: FieldSpec,
    basis_names: Vec<String>,
    sc: BTreeMap<(usize, usize), Vector>,
}

impl LieAlgebra {
    pub fn new(
        field: FieldSpec,
        basis_names: Vec<String>,
        entries: impl IntoIterator<Item = ((usize, usize), Vector)>,
    ) -> Result<Self, LieError> {
        let dim = basis_names.len();
        let mut sc = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= j {
                return Err(LieError::NotUpperPair { i, j });
            }
            if j >= dim {
                return Err(LieError::IndexOutOfRange { index: j, dim });
            }
            if v.dim() != dim {
                return Err(LieError::BasisNameCount { expected: dim, got: v.dim() });
            }
            if !v.is_zero() {
                sc.insert((i, j), v);
            }
        }
        Ok(LieAlgebra { field, basis_names, sc })
    }

    pub fn abelian(field: FieldSpec, basis_names: Vec<String>) -> Self {
        LieAlgebra { field, basis_names, sc: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.dim(), i, self.field.one())
    }

    /// Raw stored entries, `i < j` only.
    pub fn structure_constants(&self) -> impl Iterator<Item = ((usize, usize), &Vector)> {
        self.sc.iter().map(|(k, v)| (*k, v))
    }

    /// `[e_i, e_j]` for arbitrary index order, expanding antisymmetry.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vector::zero(self.dim()),
            Less => self.sc.get(&(i, j)).cloned().unwrap_or_else(|| Vector::zero(self.dim())),
            Greater => self
                .sc
                .get(&(j, i))
                .map(Vector::neg)
                .unwrap_or_else(|| Vector::zero(self.dim())),
        }
    }

    /// Bilinear antisymmetric expansion of the bracket via structure constants.
    ///
    /// Panics on a dimension mismatch; vectors must belong to this algebra.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.dim(), self.dim(), "left operand dimension mismatch");
        assert_eq!(y.dim(), self.dim(), "right operand dimension mismatch");
        let mut out = Vector::zero(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if i == j {
                    continue;
                }
                out.add_scaled(&self.bracket_basis(i, j), &(a * b));
            }
        }
        out
    }

    /// Brute-force Jacobi check over all basis triples `i < j < k`.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let mut triples = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    triples.push((i, j, k));
                }
            }
        }
        let violations = par::filter_map_collect(&triples, |&(i, j, k)| {
            let ei = self.basis_vector(i);
            let ej = self.basis_vector(j);
            let ek = self.basis_vector(k);
            let mut residual = self.bracket(&self.bracket(&ei, &ej), &ek);
            residual = residual.add(&self.bracket(&self.bracket(&ej, &ek), &ei));
            residual = residual.add(&self.bracket(&self.bracket(&ek, &ei), &ej));
            if residual.is_zero() {
                None
            } else {
                Some(Violation { condition: Condition::Jacobi, indices: vec![i, j, k], residual })
            }
        });
        ValidationReport { checked: triples.len(), violations }
    }
}

/// A right action of L on M, one matrix per L basis element, with the
/// convention `coords(x . e_u) = A_u * coords(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightAction {
    mats: Vec<SparseMatrix>,
}

impl RightAction {
    pub fn new(mats: Vec<SparseMatrix>) -> Self {
        RightAction { mats }
    }

    pub fn trivial(dim_m: usize, dim_l: usize) -> Self {
        RightAction { mats: (0..dim_l).map(|_| SparseMatrix::zero(dim_m, dim_m)).collect() }
    }

    pub fn dim_l(&self) -> usize {
        self.mats.len()
    }

    pub fn matrix(&self, u: usize) -> &SparseMatrix {
        &self.mats[u]
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.mats
    }

    /// `x . e_u` for a basis element of L.
    pub fn apply_basis(&self, x: &Vector, u: usize) -> Vector {
        self.mats[u].apply(x)
    }

    /// `x . u` for an arbitrary element of L, linearly in u.
    pub fn apply(&self, x: &Vector, u: &Vector) -> Vector {
        let mut out = Vector::zero(x.dim());
        for (i, c) in u.iter() {
            out.add_scaled(&self.apply_basis(x, i), c);
        }
        out
    }
}

/// Checks that every `A_u` is a derivation of M: `[x,y]u = [xu,y] + [x,yu]`
/// on all basis pairs `p < q` of M and all basis u of L.
pub fn validate_derivation_action(
    m: &LieAlgebra,
    action: &RightAction,
    l: &LieAlgebra,
) -> ValidationReport {
    assert_eq!(action.dim_l(), l.dim(), "action has one matrix per L basis element");
    let mut instances = Vec::new();
    for u in 0..l.dim() {
        assert_eq!(action.matrix(u).rows(), m.dim(), "action matrix shape mismatch");
        assert_eq!(action.matrix(u).cols(), m.dim(), "action matrix shape mismatch");
        for p in 0..m.dim() {
            for q in p + 1..m.dim() {
                instances.push((p, q, u));
            }
        }
    }
    let violations = par::filter_map_collect(&instances, |&(p, q, u)| {
        let zp = m.basis_vector(p);
        let zq = m.basis_vector(q);
        let lhs = action.apply_basis(&m.bracket(&zp, &zq), u);
        let rhs = m
            .bracket(&action.apply_basis(&zp, u), &zq)
            .add(&m.bracket(&zp, &action.apply_basis(&zq, u)));
        let residual = lhs.sub(&rhs);
        if residual.is_zero() {
            None
        } else {
            Some(Violation { condition: Condition::Derivation, indices: vec![p, q, u], residual })
        }
    });
    ValidationReport { checked: instances.len(), violations }
}
