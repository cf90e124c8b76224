//! Small exact dense linear algebra: just enough Gaussian elimination to
//! support change-of-basis constructions in tests and fixtures.

use crate::scalar::{FieldSpec, Scalar};

/// Dense row-major matrix over the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub n: usize,
    pub field: FieldSpec,
    rows: Vec<Vec<Scalar>>,
}

impl DenseMatrix {
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
        DenseMatrix { n, field, rows }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        DenseMatrix { n, field, rows }
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.rows[i]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let rows = (0..self.n)
            .map(|j| (0..self.n).map(|i| self.rows[i][j].clone()).collect())
            .collect();
        DenseMatrix { n: self.n, field: self.field, rows }
    }

    /// Exact inverse via Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = DenseMatrix::identity(self.field, n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            let pinv = p.inverse().expect("nonzero pivot");
            for j in 0..n {
                a[col][j] = &a[col][j] * &pinv;
                inv[col][j] = &inv[col][j] * &pinv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
                }
            }
        }
        Some(DenseMatrix { n, field: self.field, rows: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    /// Matrix-vector product on dense coordinate slices.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = self.field.zero();
                for (a, x) in row.iter().zip(v) {
                    acc += &(a * x);
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let q = FieldSpec::Rationals;
        let m = DenseMatrix::from_rows(
            q,
            vec![
                vec![q.integer(2), q.integer(1)],
                vec![q.integer(1), q.integer(1)],
            ],
        );
        let inv = m.inverse().unwrap();
        let x = vec![q.integer(3), q.integer(-5)];
        assert_eq!(inv.apply(&m.apply(&x)), x);

        let singular = DenseMatrix::from_rows(
            q,
            vec![
                vec![q.integer(1), q.integer(2)],
                vec![q.integer(2), q.integer(4)],
            ],
        );
        assert!(singular.inverse().is_none());
    }
}
