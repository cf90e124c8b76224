//! Catalog of extension fixtures and small algebra constructors shared by
//! tests, benchmarks, and the CLI `catalog` subcommand. The fixtures cover
//! every branch of the embedding recursion: trivial data, one-dimensional
//! quotients, nontrivial factor sets, and nontrivial actions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::extension::{build_extension, extract_factor_set, change_basis, ExtensionData, FactorSet};
use crate::lie::{LieAlgebra, RightAction, SparseMatrix, Vector};
use crate::linalg::DenseMatrix;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown fixture `{0}`; known: {known}", known = all_names().join(", "))]
pub struct UnknownFixture(pub String);

/// Fixtures whose data passes every validator.
pub const GOOD_FIXTURES: [&str; 6] =
    ["heisenberg", "nonabelian2", "direct-sum", "n4", "oscillator", "sl2-module-trivial-g"];

/// Fixtures that intentionally violate one documented condition.
pub const BAD_FIXTURES: [&str; 2] = ["bad-cocycle", "bad-cocycle-c"];

pub fn all_names() -> Vec<String> {
    GOOD_FIXTURES.iter().chain(BAD_FIXTURES.iter()).map(|s| s.to_string()).collect()
}

pub fn abelian(field: FieldSpec, names: &[&str]) -> LieAlgebra {
    LieAlgebra::abelian(field, names.iter().map(|s| s.to_string()).collect())
}

/// sl2 with basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
pub fn sl2(field: FieldSpec) -> LieAlgebra {
    let one = field.one();
    LieAlgebra::new(
        field,
        vec!["h".into(), "e".into(), "f".into()],
        [
            ((0, 1), Vector::unit(3, 1, field.integer(2))),
            ((0, 2), Vector::unit(3, 2, field.integer(-2))),
            ((1, 2), Vector::unit(3, 0, one)),
        ],
    )
    .expect("valid table")
}

/// Heisenberg algebra with basis (z, a, b): [a,b] = z.
pub fn heisenberg3(field: FieldSpec) -> LieAlgebra {
    LieAlgebra::new(
        field,
        vec!["z".into(), "a".into(), "b".into()],
        [((1, 2), Vector::unit(3, 0, field.one()))],
    )
    .expect("valid table")
}

/// Two-dimensional nonabelian algebra in M naming: [z1,z2] = z1.
pub fn nonabelian2_algebra(field: FieldSpec) -> LieAlgebra {
    LieAlgebra::new(
        field,
        vec!["z1".into(), "z2".into()],
        [((0, 1), Vector::unit(2, 0, field.one()))],
    )
    .expect("valid table")
}

/// Two-dimensional nonabelian algebra in L naming: [e2,e1] = e1.
pub fn nonabelian2_algebra_l(field: FieldSpec) -> LieAlgebra {
    LieAlgebra::new(
        field,
        vec!["e1".into(), "e2".into()],
        [((0, 1), Vector::unit(2, 0, field.integer(-1)))],
    )
    .expect("valid table")
}

/// Oscillator algebra with basis (z, a, b, h):
/// [a,b] = -z, [h,a] = a, [h,b] = -b, z central.
pub fn oscillator4(field: FieldSpec) -> LieAlgebra {
    LieAlgebra::new(
        field,
        vec!["z".into(), "a".into(), "b".into(), "h".into()],
        [
            ((1, 2), Vector::unit(4, 0, field.integer(-1))),
            ((1, 3), Vector::unit(4, 1, field.integer(-1))),
            ((2, 3), Vector::unit(4, 2, field.one())),
        ],
    )
    .expect("valid table")
}

/// Strictly upper-triangular 4x4 matrices, dim 6, with the derived
/// subalgebra (z1, z2, z3) = (E13, E14, E24) listed first and the
/// section letters (e1, e2, e3) = (E12, E23, E34) after.
pub fn n4(field: FieldSpec) -> LieAlgebra {
    let one = field.one();
    LieAlgebra::new(
        field,
        vec!["z1".into(), "z2".into(), "z3".into(), "e1".into(), "e2".into(), "e3".into()],
        [
            // [E13, E34] = E14
            ((0, 5), Vector::unit(6, 1, one.clone())),
            // [E24, E12] = -E14
            ((2, 3), Vector::unit(6, 1, field.integer(-1))),
            // [E12, E23] = E13
            ((3, 4), Vector::unit(6, 0, one.clone())),
            // [E23, E34] = E24
            ((4, 5), Vector::unit(6, 2, one)),
        ],
    )
    .expect("valid table")
}

/// Builds the named fixture's extension data over the given field.
pub fn fixture(name: &str, field: FieldSpec) -> Result<ExtensionData, UnknownFixture> {
    match name {
        "heisenberg" => {
            // M = <z>, L abelian 2-dim, trivial action, g(e1,e2) = z.
            let m = abelian(field, &["z"]);
            let l = abelian(field, &["e1", "e2"]);
            let g = FactorSet::new(2, 1, [((0, 1), m.basis_vector(0))]);
            Ok(ExtensionData { action: RightAction::trivial(1, 2), m, l, g })
        }
        "nonabelian2" => {
            // M = <x>, L = <u>, x.u = x, g = 0.
            let m = abelian(field, &["x"]);
            let l = abelian(field, &["u"]);
            let mut mat = SparseMatrix::zero(1, 1);
            mat.set(0, 0, field.one());
            Ok(ExtensionData {
                action: RightAction::new(vec![mat]),
                g: FactorSet::trivial(1, 1),
                m,
                l,
            })
        }
        "direct-sum" => {
            let m = nonabelian2_algebra(field);
            let l = nonabelian2_algebra_l(field);
            Ok(ExtensionData {
                action: RightAction::trivial(2, 2),
                g: FactorSet::trivial(2, 2),
                m,
                l,
            })
        }
        "n4" => Ok(extract_factor_set(&n4(field), 3).expect("n4 block is an ideal")),
        "oscillator" => {
            Ok(extract_factor_set(&oscillator4(field), 3).expect("oscillator block is an ideal"))
        }
        "sl2-module-trivial-g" => {
            // M is the adjoint module of sl2, abelian, with x.u = [x,u].
            let m = abelian(field, &["x1", "x2", "x3"]);
            let l = sl2(field);
            let reference = sl2(field);
            let mats = (0..3)
                .map(|u| {
                    let mut mat = SparseMatrix::zero(3, 3);
                    for col in 0..3 {
                        for (row, c) in reference.bracket_basis(col, u).iter() {
                            mat.set(row, col, c.clone());
                        }
                    }
                    mat
                })
                .collect();
            Ok(ExtensionData {
                action: RightAction::new(mats),
                g: FactorSet::trivial(3, 3),
                m,
                l,
            })
        }
        "bad-cocycle" => {
            // Condition (b) fails at (e1,e2,e3): only the g(e1,e2).e3 term survives.
            let m = abelian(field, &["z"]);
            let l = abelian(field, &["e1", "e2", "e3"]);
            let mut a3 = SparseMatrix::zero(1, 1);
            a3.set(0, 0, field.one());
            let action = RightAction::new(vec![
                SparseMatrix::zero(1, 1),
                SparseMatrix::zero(1, 1),
                a3,
            ]);
            let g = FactorSet::new(3, 1, [((0, 1), m.basis_vector(0))]);
            Ok(ExtensionData { action, m, l, g })
        }
        "bad-cocycle-c" => {
            // Condition (c) fails at (z1,e1,e2) with residual -[z1,z2].
            let m = nonabelian2_algebra(field);
            let l = abelian(field, &["e1", "e2"]);
            let g = FactorSet::new(2, 2, [((0, 1), m.basis_vector(1))]);
            Ok(ExtensionData { action: RightAction::trivial(2, 2), m, l, g })
        }
        other => Err(UnknownFixture(other.to_string())),
    }
}

/// Validated algebras of dimension at most 4, used as straightening inputs.
pub fn straightening_pool(field: FieldSpec) -> Vec<LieAlgebra> {
    vec![
        abelian(field, &["e1", "e2"]),
        nonabelian2_algebra_l(field),
        heisenberg3(field),
        sl2(field),
        oscillator4(field),
    ]
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => field.integer(rng.gen_range(-4i64..=4)),
        FieldSpec::Prime(p) => {
            FieldSpec::Prime(p).integer(rng.gen_range(0..p.min(64)) as i64)
        }
    }
}

pub fn random_vector(rng: &mut impl Rng, dim: usize, field: FieldSpec) -> Vector {
    Vector::from_entries(dim, (0..dim).map(|i| (i, random_scalar(rng, field))))
}

/// A random genuine extension of dimension at most 5: a base fixture's N
/// under a random invertible block-respecting change of basis. Returns the
/// transformed algebra and its ideal dimension.
pub fn random_section_extension(rng: &mut impl Rng, field: FieldSpec) -> (LieAlgebra, usize) {
    let (n, m_dim) = match rng.gen_range(0..5u8) {
        0 => {
            let data = fixture("heisenberg", field).unwrap();
            (build_extension(&data).unwrap().n, 1)
        }
        1 => {
            let data = fixture("nonabelian2", field).unwrap();
            (build_extension(&data).unwrap().n, 1)
        }
        2 => {
            let data = fixture("direct-sum", field).unwrap();
            (build_extension(&data).unwrap().n, 2)
        }
        3 => (oscillator4(field), 3),
        _ => {
            // Two-dimensional nonabelian extension padded with abelian summands.
            let pad = rng.gen_range(1..=3usize);
            let names: Vec<String> =
                std::iter::once("x".to_string()).chain((0..pad).map(|i| format!("p{i}"))).collect();
            let m = LieAlgebra::abelian(field, names);
            let l = abelian(field, &["u"]);
            let mut mat = SparseMatrix::zero(pad + 1, pad + 1);
            mat.set(0, 0, field.one());
            let data = ExtensionData {
                action: RightAction::new(vec![mat]),
                g: FactorSet::trivial(1, pad + 1),
                m,
                l,
            };
            (build_extension(&data).unwrap().n, pad + 1)
        }
    };
    let t = random_block_matrix(rng, field, m_dim, n.dim() - m_dim);
    let names = (0..n.dim()).map(|i| format!("b{}", i + 1)).collect();
    (change_basis(&n, &t, names), m_dim)
}

/// Random invertible matrix of the block form [[A, 0], [B, C]] with small
/// integer entries; A and C are regenerated until invertible.
fn random_block_matrix(
    rng: &mut impl Rng,
    field: FieldSpec,
    m_dim: usize,
    l_dim: usize,
) -> DenseMatrix {
    let dim = m_dim + l_dim;
    loop {
        let mut rows = vec![vec![field.zero(); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            let cols = if i < m_dim { 0..m_dim } else { 0..dim };
            for j in cols {
                row[j] = field.integer(rng.gen_range(-2i64..=2));
            }
        }
        let t = DenseMatrix::from_rows(field, rows);
        if t.is_invertible() {
            return t;
        }
    }
}
