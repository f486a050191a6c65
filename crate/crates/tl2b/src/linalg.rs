//! Dense and column-sparse matrices over a [`Scalar`], with exact elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<S>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &S)> {
        let cols = self.cols;
        self.data.iter().enumerate().map(move |(k, x)| ((k / cols, k % cols), x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for ((r, c), x) in self.entries() {
            t[(c, r)] = x.clone();
        }
        t
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x.clone() + y).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x.clone() - y).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let rows: Vec<Vec<S>> = (0..self.rows)
            .into_par_iter()
            .map(|r| {
                let mut out = vec![S::zero(); other.cols];
                for (k, a) in self.row(r).iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, b) in out.iter_mut().zip(other.row(k)) {
                        if !b.is_zero() {
                            *o = o.clone() + &(a.clone() * b);
                        }
                    }
                }
                out
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + &(a.clone() * b))
            })
            .collect()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// First entry where the two matrices differ, using [`Scalar::same`].
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries().zip(other.data.iter()).find(|((_, a), b)| !a.same(b)).map(|((pos, _), _)| pos)
    }

    pub fn same(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Determinant by Gaussian elimination with the first nonzero pivot.
    pub fn det_gauss(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[(r, k)].is_zero()) else {
                return S::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det = det * &pivot;
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone() / &pivot;
                for c in k..n {
                    if !a[(k, c)].is_zero() {
                        let v = a[(r, c)].clone() - &(f.clone() * &a[(k, c)]);
                        a[(r, c)] = v;
                    }
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[(r, c)].is_zero()) else { continue };
            a.swap_rows(p, rank);
            let pivot = a[(rank, c)].clone();
            for r in rank + 1..self.rows {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone() / &pivot;
                for cc in c..self.cols {
                    let v = a[(r, cc)].clone() - &(f.clone() * &a[(rank, cc)]);
                    a[(r, cc)] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn lu(&self) -> Option<Lu<S>> {
        Lu::new(self)
    }

    pub fn inverse(&self) -> Option<Self> {
        let lu = self.lu()?;
        let cols: Vec<Vec<S>> = (0..self.rows)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![S::zero(); self.rows];
                e[j] = S::one();
                lu.solve(&e)
            })
            .collect();
        Some(Self::from_columns(&cols))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Factorization `P A = L U` of an invertible matrix.
#[derive(Clone)]
pub struct Lu<S> {
    n: usize,
    lu: Matrix<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn new(a: &Matrix<S>) -> Option<Self> {
        assert!(a.is_square());
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).find(|&r| !lu[(r, k)].is_zero())?;
            lu.swap_rows(p, k);
            perm.swap(p, k);
            let pivot = lu[(k, k)].clone();
            for r in k + 1..n {
                if lu[(r, k)].is_zero() {
                    continue;
                }
                let f = lu[(r, k)].clone() / &pivot;
                for c in k + 1..n {
                    if !lu[(k, c)].is_zero() {
                        let v = lu[(r, c)].clone() - &(f.clone() * &lu[(k, c)]);
                        lu[(r, c)] = v;
                    }
                }
                lu[(r, k)] = f;
            }
        }
        Some(Lu { n, lu, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.n;
        let mut y: Vec<S> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for r in 0..n {
            for c in 0..r {
                if !self.lu[(r, c)].is_zero() && !y[c].is_zero() {
                    let v = y[r].clone() - &(self.lu[(r, c)].clone() * &y[c]);
                    y[r] = v;
                }
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                if !self.lu[(r, c)].is_zero() && !y[c].is_zero() {
                    let v = y[r].clone() - &(self.lu[(r, c)].clone() * &y[c]);
                    y[r] = v;
                }
            }
            y[r] = y[r].clone() / &self.lu[(r, r)];
        }
        y
    }

    pub fn det(&self) -> S {
        let mut d = (0..self.n).fold(S::one(), |acc, i| acc * &self.lu[(i, i)]);
        if permutation_is_odd(&self.perm) {
            d = -d;
        }
        d
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

/// Fraction-free (Bareiss) determinant of a rational matrix.
///
/// Rows are first scaled to integers; the elimination then runs over
/// `BigInt` with exact divisions only.
pub fn det_bareiss(m: &Matrix<BigRational>) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let lcm = m.row(r).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(m.row(r).iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        scale *= lcm;
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        tail.par_iter_mut().for_each(|row| {
            let f = row[k].clone();
            for c in k + 1..n {
                let v = &row[c] * pivot - &f * &pivot_row[c];
                row[c] = v / &prev;
            }
            row[k] = BigInt::zero();
        });
        prev = a[k][k].clone();
    }
    BigRational::new(sign * &a[n - 1][n - 1], scale)
}

/// Column-sparse square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<S> {
    dim: usize,
    cols: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMat<S> {
    pub fn new(dim: usize) -> Self {
        SparseMat { dim, cols: vec![Vec::new(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value` to entry `(row, col)`.
    pub fn push(&mut self, row: usize, col: usize, value: S) {
        if value.is_zero() {
            return;
        }
        let column = &mut self.cols[col];
        if let Some(slot) = column.iter_mut().find(|(r, _)| *r == row) {
            slot.1 = slot.1.clone() + &value;
        } else {
            column.push((row, value));
        }
        column.retain(|(_, x)| !x.is_zero());
    }

    pub fn column(&self, col: usize) -> &[(usize, S)] {
        &self.cols[col]
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.cols[c] {
                out[*r] = out[*r].clone() + &(a.clone() * x);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                m[(*r, c)] = x.clone();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sample() -> Matrix<BigRational> {
        Matrix::from_rows(vec![
            vec![rat(0, 1), rat(2, 3), rat(1, 1)],
            vec![rat(5, 2), rat(-1, 1), rat(7, 4)],
            vec![rat(1, 3), rat(4, 1), rat(-2, 5)],
        ])
    }

    #[test]
    fn determinant_routes_agree() {
        let m = sample();
        let d = m.det_gauss();
        assert_eq!(d, det_bareiss(&m));
        assert_eq!(d, m.lu().unwrap().det());
        // cofactor expansion along the first row
        let minor = |c0: usize, c1: usize| m[(1, c0)].clone() * &m[(2, c1)] - m[(1, c1)].clone() * &m[(2, c0)];
        let expect = m[(0, 0)].clone() * &minor(1, 2) - m[(0, 1)].clone() * &minor(0, 2) + m[(0, 2)].clone() * &minor(0, 1);
        assert_eq!(d, expect);
    }

    #[test]
    fn singular_matrices() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), rat(1, 1)]]);
        assert!(det_bareiss(&m).is_zero());
        assert!(m.det_gauss().is_zero());
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_and_solve() {
        let m = sample();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let b = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        let x = m.lu().unwrap().solve(&b);
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn sparse_matches_dense() {
        let mut s = SparseMat::new(3);
        s.push(0, 1, rat(2, 1));
        s.push(2, 1, rat(-1, 3));
        s.push(1, 0, rat(5, 1));
        s.push(1, 0, rat(-5, 1));
        let v = vec![rat(1, 1), rat(3, 1), rat(7, 2)];
        assert_eq!(s.apply(&v), s.to_dense().mul_vec(&v));
        assert!(s.column(0).is_empty());
    }
}
