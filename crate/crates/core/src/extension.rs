//! Factor-set data, the cocycle validity conditions, construction of the
//! extension algebra N from the data, and extraction of the data back from a
//! concrete extension via the coordinate section.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lie::{validate_derivation_action, LieAlgebra, RightAction, SparseMatrix, Vector};
use crate::par;
use crate::report::{Condition, ValidationReport, Violation};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("factor-set data failed validation: {0}")]
    InvalidFactorSet(ValidationReport),
    #[error("algebra failed the Jacobi validator: {0}")]
    NotALieAlgebra(ValidationReport),
    #[error("first {m_dim} basis vectors do not span a subalgebra: [{i},{j}] leaves the block")]
    NotAnIdeal { m_dim: usize, i: usize, j: usize },
    #[error(
        "bracket of M-block element {i} with section element {j} leaves the M-block"
    )]
    ProjectionLeak { i: usize, j: usize },
}

/// An antisymmetric bilinear map g: L x L -> M, stored on pairs `u < v` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    dim_l: usize,
    dim_m: usize,
    entries: BTreeMap<(usize, usize), Vector>,
}

impl FactorSet {
    pub fn new(
        dim_l: usize,
        dim_m: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Vector)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for ((u, v), val) in entries {
            assert!(u < v, "factor set entries require u < v");
            assert!(v < dim_l, "factor set index out of range");
            assert_eq!(val.dim(), dim_m, "factor set value dimension mismatch");
            if !val.is_zero() {
                map.insert((u, v), val);
            }
        }
        FactorSet { dim_l, dim_m, entries: map }
    }

    pub fn trivial(dim_l: usize, dim_m: usize) -> Self {
        FactorSet { dim_l, dim_m, entries: BTreeMap::new() }
    }

    pub fn dim_l(&self) -> usize {
        self.dim_l
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    /// Stored entries, `u < v` only.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Vector)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// `g(e_u, e_v)` for arbitrary index order; antisymmetry is structural.
    pub fn at(&self, u: usize, v: usize) -> Vector {
        use std::cmp::Ordering::*;
        match u.cmp(&v) {
            Equal => Vector::zero(self.dim_m),
            Less => self.entries.get(&(u, v)).cloned().unwrap_or_else(|| Vector::zero(self.dim_m)),
            Greater => self
                .entries
                .get(&(v, u))
                .map(Vector::neg)
                .unwrap_or_else(|| Vector::zero(self.dim_m)),
        }
    }

    /// Bilinear extension `g(a, b)` on arbitrary elements of L.
    pub fn apply(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim_m);
        for (u, x) in a.iter() {
            for (v, y) in b.iter() {
                out.add_scaled(&self.at(u, v), &(x * y));
            }
        }
        out
    }
}

/// Everything needed to build an extension of M by L: the two algebras, the
/// right derivation action, and the factor set.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub m: LieAlgebra,
    pub l: LieAlgebra,
    pub action: RightAction,
    pub g: FactorSet,
}

impl ExtensionData {
    pub fn dim_n(&self) -> usize {
        self.m.dim() + self.l.dim()
    }

    /// Evaluates cocycle conditions (b) and (c) on all basis instances, plus
    /// the derivation law. Condition (a) holds structurally in [`FactorSet`].
    pub fn validate(&self) -> ValidationReport {
        let derivation = validate_derivation_action(&self.m, &self.action, &self.l);
        derivation.merge(self.validate_cocycle_b()).merge(self.validate_cocycle_c())
    }

    /// (b): `g(u,v)w + g([u,v],w) + g(v,w)u + g([v,w],u) + g(w,u)v + g([w,u],v) = 0`
    /// on triples `u < v < w`; repeated indices vanish by antisymmetry.
    fn validate_cocycle_b(&self) -> ValidationReport {
        let dim_l = self.l.dim();
        let mut triples = Vec::new();
        for u in 0..dim_l {
            for v in u + 1..dim_l {
                for w in v + 1..dim_l {
                    triples.push((u, v, w));
                }
            }
        }
        let violations = par::filter_map_collect(&triples, |&(u, v, w)| {
            let mut residual = Vector::zero(self.m.dim());
            for (a, b, c) in [(u, v, w), (v, w, u), (w, u, v)] {
                let ec = self.l.basis_vector(c);
                residual = residual.add(&self.action.apply_basis(&self.g.at(a, b), c));
                residual = residual.add(&self.g.apply(&self.l.bracket_basis(a, b), &ec));
            }
            if residual.is_zero() {
                None
            } else {
                Some(Violation { condition: Condition::CocycleB, indices: vec![u, v, w], residual })
            }
        });
        ValidationReport { checked: triples.len(), violations }
    }

    /// (c): `(xu)v - (xv)u = x[u,v] + [x, g(u,v)]` for M basis x and `u < v`.
    fn validate_cocycle_c(&self) -> ValidationReport {
        let mut instances = Vec::new();
        for x in 0..self.m.dim() {
            for u in 0..self.l.dim() {
                for v in u + 1..self.l.dim() {
                    instances.push((x, u, v));
                }
            }
        }
        let violations = par::filter_map_collect(&instances, |&(x, u, v)| {
            let zx = self.m.basis_vector(x);
            let lhs = self
                .action
                .apply_basis(&self.action.apply_basis(&zx, u), v)
                .sub(&self.action.apply_basis(&self.action.apply_basis(&zx, v), u));
            let rhs = self
                .action
                .apply(&zx, &self.l.bracket_basis(u, v))
                .add(&self.m.bracket(&zx, &self.g.at(u, v)));
            let residual = lhs.sub(&rhs);
            if residual.is_zero() {
                None
            } else {
                Some(Violation { condition: Condition::CocycleC, indices: vec![x, u, v], residual })
            }
        });
        ValidationReport { checked: instances.len(), violations }
    }
}

/// The Lie algebra N = M x L with the M block an ideal, basis ordered as
/// M's basis followed by L's.
#[derive(Clone, Debug)]
pub struct ExtensionAlgebra {
    pub n: LieAlgebra,
    pub m_dim: usize,
}

/// Builds N from validated data via
/// `[(x,u),(y,v)] = ([x,y] + xv - yu + g(u,v), [u,v])` on block basis pairs.
pub fn build_extension(data: &ExtensionData) -> Result<ExtensionAlgebra, ExtensionError> {
    let report = data.validate();
    if !report.is_valid() {
        return Err(ExtensionError::InvalidFactorSet(report));
    }
    let (dm, dl) = (data.m.dim(), data.l.dim());
    let dim = dm + dl;
    let mut names = data.m.basis_names().to_vec();
    names.extend(data.l.basis_names().iter().cloned());

    let embed_m = |v: &Vector| -> Vector {
        Vector::from_entries(dim, v.iter().map(|(i, c)| (i, c.clone())))
    };
    let mut entries: Vec<((usize, usize), Vector)> = Vec::new();
    // M-block pairs: [(z_p,0),(z_q,0)] = ([z_p,z_q], 0).
    for p in 0..dm {
        for q in p + 1..dm {
            entries.push(((p, q), embed_m(&data.m.bracket_basis(p, q))));
        }
    }
    // Mixed pairs: [(z_p,0),(0,e_u)] = (z_p . e_u, 0).
    for p in 0..dm {
        for u in 0..dl {
            let zp = data.m.basis_vector(p);
            entries.push(((p, dm + u), embed_m(&data.action.apply_basis(&zp, u))));
        }
    }
    // L-block pairs: [(0,e_u),(0,e_v)] = (g(e_u,e_v), [e_u,e_v]).
    for u in 0..dl {
        for v in u + 1..dl {
            let mut val = embed_m(&data.g.at(u, v));
            for (r, c) in data.l.bracket_basis(u, v).iter() {
                val.add_entry(dm + r, c);
            }
            entries.push(((dm + u, dm + v), val));
        }
    }
    let n = LieAlgebra::new(data.m.field(), names, entries).expect("block indices in range");
    // Conditions (a),(b),(c) plus the derivation law guarantee Jacobi.
    let jacobi = n.validate();
    assert!(jacobi.is_valid(), "validated data produced a non-Lie extension: {jacobi}");
    Ok(ExtensionAlgebra { n, m_dim: dm })
}

/// Recovers extension data from a concrete extension N whose first `m_dim`
/// basis vectors span an ideal, using the coordinate section `s(e_u) = (0, e_u)`.
pub fn extract_factor_set(n: &LieAlgebra, m_dim: usize) -> Result<ExtensionData, ExtensionError> {
    assert!(m_dim <= n.dim(), "m_dim exceeds the dimension of N");
    let jacobi = n.validate();
    if !jacobi.is_valid() {
        return Err(ExtensionError::NotALieAlgebra(jacobi));
    }
    let dim_l = n.dim() - m_dim;
    let leaks_block = |v: &Vector| v.support().any(|k| k >= m_dim);
    // Ideal check: brackets of M-block vectors with everything stay in block.
    for i in 0..m_dim {
        for j in 0..n.dim() {
            if leaks_block(&n.bracket_basis(i, j)) {
                return if j < m_dim {
                    Err(ExtensionError::NotAnIdeal { m_dim, i, j })
                } else {
                    Err(ExtensionError::ProjectionLeak { i, j })
                };
            }
        }
    }

    let field = n.field();
    let m_names = n.basis_names()[..m_dim].to_vec();
    let l_names = n.basis_names()[m_dim..].to_vec();

    let mut m_entries = Vec::new();
    for p in 0..m_dim {
        for q in p + 1..m_dim {
            m_entries.push(((p, q), n.bracket_basis(p, q).slice(0, m_dim)));
        }
    }
    let m = LieAlgebra::new(field, m_names, m_entries).expect("restricted indices in range");

    // Action: x . e_u = [x, s(e_u)] projected to the M block.
    let mut mats = Vec::with_capacity(dim_l);
    for u in 0..dim_l {
        let mut mat = SparseMatrix::zero(m_dim, m_dim);
        for col in 0..m_dim {
            let image = n.bracket_basis(col, m_dim + u);
            for (row, c) in image.iter() {
                mat.set(row, col, c.clone());
            }
        }
        mats.push(mat);
    }
    let action = RightAction::new(mats);

    // g and L structure constants both come from section brackets.
    let mut g_entries = Vec::new();
    let mut l_entries = Vec::new();
    for u in 0..dim_l {
        for v in u + 1..dim_l {
            let br = n.bracket_basis(m_dim + u, m_dim + v);
            g_entries.push(((u, v), br.slice(0, m_dim)));
            l_entries.push(((u, v), br.slice(m_dim, n.dim())));
        }
    }
    let l = LieAlgebra::new(field, l_names, l_entries).expect("section indices in range");
    let g = FactorSet::new(dim_l, m_dim, g_entries);

    let data = ExtensionData { m, l, action, g };
    // Jacobi in N guarantees the extracted data is valid.
    let report = data.validate();
    assert!(report.is_valid(), "extraction from a Lie algebra produced invalid data: {report}");
    Ok(data)
}

/// Applies an invertible change of basis to N, keeping the span of the first
/// `m_dim` basis vectors intact when the matrix is block lower-triangular.
/// Rows of `t` are the new basis vectors in old coordinates.
pub fn change_basis(
    n: &LieAlgebra,
    t: &crate::linalg::DenseMatrix,
    names: Vec<String>,
) -> LieAlgebra {
    let dim = n.dim();
    assert_eq!(t.n, dim);
    let field = n.field();
    let t_inv_t = t.transpose().inverse().expect("change of basis must be invertible");
    let dense = |v: &Vector| -> Vec<Scalar> {
        (0..dim).map(|i| v.coeff(i).cloned().unwrap_or_else(|| field.zero())).collect()
    };
    let row_vec = |i: usize| Vector::from_entries(dim, t.row(i).iter().cloned().enumerate());
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let w = n.bracket(&row_vec(i), &row_vec(j));
            let coords = t_inv_t.apply(&dense(&w));
            entries.push(((i, j), Vector::from_entries(dim, coords.into_iter().enumerate())));
        }
    }
    LieAlgebra::new(field, names, entries).expect("indices in range")
}
