//! Small dense matrices over a [`Scalar`] field with exact Gauss–Jordan
//! elimination.

use std::fmt;

use crate::error::{GoaError, Result};
use crate::scalar::{is_zero, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(GoaError::input(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !is_zero(b) {
                        out.data[i * other.cols + j] += a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse by Gauss–Jordan elimination with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(GoaError::input("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !is_zero(&a[(r, col)]))
                .ok_or_else(|| GoaError::input("matrix is singular"))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for j in 0..n {
                let v = a[(col, j)].clone() / p.clone();
                a[(col, j)] = v;
                let w = inv[(col, j)].clone() / p.clone();
                inv[(col, j)] = w;
            }
            for r in 0..n {
                if r == col || is_zero(&a[(r, col)]) {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let d = factor.clone() * a[(col, j)].clone();
                    a[(r, j)] -= d;
                    let e = factor.clone() * inv[(col, j)].clone();
                    inv[(r, j)] -= e;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = rhs` for a square nonsingular system.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        if rhs.len() != self.rows {
            return Err(GoaError::input("right-hand side length mismatch"));
        }
        let inv = self.inverse()?;
        Ok((0..self.rows)
            .map(|i| {
                inv.row(i)
                    .iter()
                    .zip(rhs)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, m: i64) -> Result<Self> {
        if self.rows != self.cols {
            return Err(GoaError::input("power of a non-square matrix"));
        }
        let base = if m < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        for _ in 0..m.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental row-echelon basis used to test span membership and to express
/// a target vector as a combination of previously inserted vectors.
#[derive(Debug, Clone)]
pub struct EchelonBasis<T> {
    dim: usize,
    /// Reduced rows, each with its pivot column and the combination of
    /// original inputs that produced it.
    rows: Vec<(usize, Vec<T>, Vec<T>)>,
    inserted: usize,
}

impl<T: Scalar> EchelonBasis<T> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn len_inserted(&self) -> usize {
        self.inserted
    }

    fn reduce(&self, v: &mut [T], combo: &mut Vec<T>) {
        for (pivot, row, row_combo) in &self.rows {
            if is_zero(&v[*pivot]) {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !is_zero(y) {
                    *x -= f.clone() * y.clone();
                }
            }
            if combo.len() < row_combo.len() {
                combo.resize(row_combo.len(), T::zero());
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                if !is_zero(y) {
                    *x -= f.clone() * y.clone();
                }
            }
        }
    }

    /// Inserts a vector; returns true when it increased the rank.
    pub fn insert(&mut self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let mut w = v.to_vec();
        let mut combo = vec![T::zero(); idx + 1];
        combo[idx] = T::one();
        self.reduce(&mut w, &mut combo);
        let Some(pivot) = w.iter().position(|x| !is_zero(x)) else {
            return false;
        };
        let p = w[pivot].clone();
        for x in w.iter_mut() {
            *x = x.clone() / p.clone();
        }
        for x in combo.iter_mut() {
            *x = x.clone() / p.clone();
        }
        // Keep existing rows reduced at the new pivot.
        for (_, row, row_combo) in self.rows.iter_mut() {
            if is_zero(&row[pivot]) {
                continue;
            }
            let f = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !is_zero(y) {
                    *x -= f.clone() * y.clone();
                }
            }
            if row_combo.len() < combo.len() {
                row_combo.resize(combo.len(), T::zero());
            }
            for (x, y) in row_combo.iter_mut().zip(&combo) {
                if !is_zero(y) {
                    *x -= f.clone() * y.clone();
                }
            }
        }
        self.rows.push((pivot, w, combo));
        true
    }

    /// Coefficients `c` over the inserted vectors with `sum c_i v_i = target`,
    /// or `None` when `target` is outside the span.
    pub fn express(&self, target: &[T]) -> Option<Vec<T>> {
        assert_eq!(target.len(), self.dim);
        let mut w = target.to_vec();
        let mut combo = vec![T::zero(); self.inserted];
        self.reduce(&mut w, &mut combo);
        if w.iter().all(is_zero) {
            combo.resize(self.inserted, T::zero());
            Some(combo.into_iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn inverse_of_pascal_matrix_alternates_signs() {
        let n = 6;
        let m = Matrix::from_fn(n, n, |i, j| q(crate::scalar::binomial(i as u64, j as u64) as i64));
        let inv = m.inverse().unwrap();
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                assert_eq!(inv[(i, j)], q(sign) * m[(i, j)].clone());
            }
        }
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(n));
        assert_eq!(m.pow(-1).unwrap(), inv);
        assert_eq!(m.pow(2).unwrap(), m.mul(&m).unwrap());
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = Matrix::from_fn(2, 2, |_, _| q(1));
        assert!(m.inverse().is_err());
    }

    #[test]
    fn echelon_expresses_targets() {
        let mut e = EchelonBasis::<Q>::new(3);
        assert!(e.insert(&[q(1), q(1), q(0)]));
        assert!(e.insert(&[q(0), q(1), q(1)]));
        assert!(!e.insert(&[q(1), q(2), q(1)]));
        let c = e.express(&[q(1), q(0), q(-1)]).unwrap();
        let rebuilt: Vec<Q> = (0..3)
            .map(|k| {
                let vs = [[q(1), q(1), q(0)], [q(0), q(1), q(1)], [q(1), q(2), q(1)]];
                (0..3).fold(q(0), |acc, i| acc + c[i].clone() * vs[i][k].clone())
            })
            .collect();
        assert_eq!(rebuilt, vec![q(1), q(0), q(-1)]);
        assert!(e.express(&[q(0), q(0), q(1)]).is_none());
        assert_eq!(e.rank(), 2);
    }
}
