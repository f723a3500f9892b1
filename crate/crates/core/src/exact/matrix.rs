use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Dense square matrix of exact rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    n: usize,
    entries: Vec<Rational>,
}

/// Wire form: `{"n": int, "entries": [[string, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.n == 0 {
            return Err(Error::Parse("matrix dimension must be at least 1".into()));
        }
        if json.entries.len() != json.n {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                json.n,
                json.entries.len()
            )));
        }
        Matrix::from_rows(json.entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            n: m.n,
            entries: m.rows().map(<[Rational]>::to_vec).collect(),
        }
    }
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Matrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    /// Convenience constructor for integer literals. Panics if `rows` is not square.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        Matrix::from_rows(rows).expect("square integer matrix")
    }

    /// `e_i e_j^T`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn check_same_dim(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.entries.iter().any(Rational::is_negative)
    }

    /// Errors with the first negative position in row-major order.
    pub fn ensure_nonnegative(&self) -> Result<()> {
        match self.entries.iter().position(Rational::is_negative) {
            None => Ok(()),
            Some(k) => Err(Error::NegativeEntry {
                row: k / self.n,
                col: k % self.n,
            }),
        }
    }

    pub fn abs(&self) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(Rational::abs).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal_entries(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Zero strictly below the diagonal.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn pow(&self, mut k: u32) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Diagonal of `self * other` without forming the full product.
    pub fn product_diagonal(&self, other: &Matrix) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&k| !self.get(i, k).is_zero() && !other.get(k, i).is_zero())
                    .map(|k| self.get(i, k) * other.get(k, i))
                    .sum()
            })
            .collect()
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        let k = idx.len();
        let mut out = Matrix::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rectangular block with the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Block {
        Block {
            rows: rows.len(),
            cols: cols.len(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
                .collect(),
        }
    }

    /// Rank by fraction-free (Bareiss) elimination on the row-scaled integer matrix.
    pub fn rank(&self) -> usize {
        bareiss(self.to_integer_rows()).0
    }

    /// Determinant by Bareiss elimination.
    pub fn determinant(&self) -> Rational {
        if self.n == 0 {
            return Rational::one();
        }
        let mut scale = BigInt::one();
        let rows: Vec<Vec<BigInt>> = self
            .rows()
            .map(|row| {
                let l = row_lcm(row);
                scale *= &l;
                scale_row(row, &l)
            })
            .collect();
        let (rank, det) = bareiss(rows);
        if rank < self.n {
            return Rational::zero();
        }
        Rational::from_big(det, scale).expect("positive scale")
    }

    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows()
            .map(|row| scale_row(row, &row_lcm(row)))
            .collect()
    }
}

fn row_lcm(row: &[Rational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale_row(row: &[Rational], l: &BigInt) -> Vec<BigInt> {
    row.iter().map(|v| v.numer() * (l / v.denom())).collect()
}

/// Fraction-free Gaussian elimination. Returns the rank and, for full-rank square
/// input, the determinant of the integer matrix.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if r == rows && rows == cols {
        if sign < 0 {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    (r, det)
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Rectangular block cut out of a square matrix; may have zero rows or columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Rational>>,
}

impl Block {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Block {
            rows,
            cols,
            entries: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Rational::is_zero)
    }

    pub fn mul(&self, rhs: &Block) -> Result<Block> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Block::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i][j] += &(a * &rhs.entries[k][j]);
                }
            }
        }
        Ok(out)
    }

    pub fn to_square(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        Matrix::from_rows(self.entries.clone()).ok()
    }
}

impl From<&Matrix> for Block {
    fn from(m: &Matrix) -> Self {
        Block {
            rows: m.n(),
            cols: m.n(),
            entries: m.rows().map(<[Rational]>::to_vec).collect(),
        }
    }
}
