//! Dense exact linear algebra: incremental row echelon forms, rank and
//! span membership.

use crate::field::Field;

/// Column-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub columns: Vec<Vec<E>>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            columns: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn push(&mut self, column: Vec<E>) {
        assert_eq!(column.len(), self.rows, "column height mismatch");
        self.columns.push(column);
    }

    /// Same matrix over another field, entrywise.
    pub fn map<T>(&self, f: impl Fn(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(&f).collect())
                .collect(),
        }
    }
}

/// Vectors kept in echelon form: each stored vector has a leading one at a
/// position where all later stored vectors vanish.
pub struct Echelon<'f, F: Field> {
    field: &'f F,
    len: usize,
    basis: Vec<(usize, Vec<F::Elem>)>,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F, len: usize) -> Self {
        Self {
            field,
            len,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        let f = self.field;
        for (pivot, row) in &self.basis {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        self.reduce(&mut v);
        let f = self.field;
        let Some(pivot) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[pivot]);
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.basis.push((pivot, v));
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| self.field.is_zero(x))
    }
}

pub fn column_echelon<'f, F: Field>(field: &'f F, m: &Matrix<F::Elem>) -> Echelon<'f, F> {
    let mut e = Echelon::new(field, m.rows);
    for c in &m.columns {
        e.insert(c.clone());
    }
    e
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    column_echelon(field, m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, Ring};
    use proptest::prelude::*;

    fn int_matrix(rows: usize, cols: &[Vec<i64>]) -> Matrix<i64> {
        let mut m = Matrix::new(rows);
        for c in cols {
            m.push(c.clone());
        }
        m
    }

    #[test]
    fn rank_of_small_matrices() {
        let q = Rationals;
        let m = int_matrix(3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank(&q, &m.map(|&x| q.from_i64(x))), 2);
        let z = int_matrix(2, &[vec![0, 0]]);
        assert_eq!(rank(&q, &z.map(|&x| q.from_i64(x))), 0);
    }

    #[test]
    fn characteristic_changes_rank() {
        let m = int_matrix(2, &[vec![1, 1], vec![1, -1]]);
        let q = Rationals;
        assert_eq!(rank(&q, &m.map(|&x| q.from_i64(x))), 2);
        let f2 = PrimeField::new(2);
        assert_eq!(rank(&f2, &m.map(|&x| f2.from_i64(x))), 1);
    }

    #[test]
    fn membership_by_reduction() {
        let q = Rationals;
        let mut e = Echelon::new(&q, 3);
        e.insert(vec![q.from_i64(1), q.from_i64(1), q.zero()]);
        e.insert(vec![q.zero(), q.from_i64(1), q.from_i64(1)]);
        assert!(e.contains(&[q.from_i64(1), q.zero(), q.from_i64(-1)]));
        assert!(!e.contains(&[q.from_i64(1), q.zero(), q.zero()]));
    }

    proptest! {
        #[test]
        fn rank_agrees_with_transpose(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in proptest::collection::vec(-3i64..4, 36),
        ) {
            let q = Rationals;
            let mut m = Matrix::new(rows);
            let mut t = Matrix::new(cols);
            for j in 0..cols {
                m.push((0..rows).map(|i| q.from_i64(seed[i * 6 + j])).collect());
            }
            for i in 0..rows {
                t.push((0..cols).map(|j| q.from_i64(seed[i * 6 + j])).collect());
            }
            let r = rank(&q, &m);
            prop_assert_eq!(r, rank(&q, &t));
            prop_assert!(r <= rows.min(cols));
        }

        #[test]
        fn good_prime_matches_rationals_on_unit_matrices(
            entries in proptest::collection::vec(-1i64..2, 16),
        ) {
            let q = Rationals;
            let f = PrimeField::new(1_000_003);
            let mut mq = Matrix::new(4);
            let mut mf = Matrix::new(4);
            for j in 0..4 {
                mq.push((0..4).map(|i| q.from_i64(entries[i * 4 + j])).collect());
                mf.push((0..4).map(|i| f.from_i64(entries[i * 4 + j])).collect());
            }
            prop_assert_eq!(rank(&q, &mq), rank(&f, &mf));
        }
    }
}
