//! The atomic diagonal operator and its brute-force characterization as an
//! infimum of block compressions over all partitions of the identity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational};

/// Largest dimension accepted by [`schep_oracle`]; Bell(12) = 4 213 597 partitions.
pub const SCHEP_ORACLE_MAX_DIM: usize = 12;

/// Sum of the atomwise compressions `P_a m P_a`, i.e. the diagonal part of `m`.
pub fn atomic_diagonal(m: &Matrix) -> Matrix {
    Matrix::diagonal(&m.diagonal_entries())
}

/// Partition of `{0, ..., n-1}` into nonempty disjoint blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds from a restricted growth string: `labels[0] = 0` and each label is at
    /// most one more than the maximum before it.
    pub fn from_rgs(labels: &[usize]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            if l > blocks.len() {
                return Err(Error::InvalidArgument(format!(
                    "not a restricted growth string: {labels:?}"
                )));
            }
            if l == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[l].push(i);
        }
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The 0/1 diagonal projections `P_i`, one per block; they sum to the identity.
    pub fn projections(&self, n: usize) -> Vec<Matrix> {
        self.blocks
            .iter()
            .map(|b| {
                let mut p = Matrix::zeros(n);
                for &i in b {
                    p.set(i, i, Rational::one());
                }
                p
            })
            .collect()
    }

    /// `sum_i P_i m P_i`: keeps `m[i][j]` exactly when `i` and `j` share a block.
    pub fn compress(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(m.n());
        for b in &self.blocks {
            for &i in b {
                for &j in b {
                    out.set(i, j, m.get(i, j).clone());
                }
            }
        }
        out
    }
}

/// Restricted growth strings of length `n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    labels: Vec<usize>,
    maxima: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            labels: vec![0; n],
            maxima: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.labels.clone();
        let n = self.labels.len();
        // maxima[i] = max(labels[0..i]); labels[i] may go up to maxima[i] + 1
        let advance = (1..n).rev().find(|&i| self.labels[i] <= self.maxima[i]);
        match advance {
            None => self.done = true,
            Some(i) => {
                self.labels[i] += 1;
                for k in i + 1..n {
                    self.labels[k] = 0;
                    self.maxima[k] = self.maxima[k - 1].max(self.labels[k - 1]);
                }
            }
        }
        Some(current)
    }
}

pub fn bell_number(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty row")];
        for v in &row {
            let last = *next.last().expect("nonempty row");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// Entrywise infimum of `sum_i P_i m P_i` over every partition of the coordinates.
///
/// The family is downward directed under common refinement, so the entrywise
/// minimum is the order infimum. For nonnegative input it equals [`atomic_diagonal`].
pub fn schep_oracle(m: &Matrix) -> Result<Matrix> {
    let n = m.n();
    if n > SCHEP_ORACLE_MAX_DIM {
        return Err(Error::DimensionGuard {
            n,
            limit: SCHEP_ORACLE_MAX_DIM,
        });
    }
    m.ensure_nonnegative()?;
    let mut inf: Option<Matrix> = None;
    for labels in SetPartitions::new(n) {
        let compressed = Partition::from_rgs(&labels)?.compress(m);
        inf = Some(match inf {
            None => compressed,
            Some(acc) => entrywise_min(&acc, &compressed),
        });
    }
    Ok(inf.unwrap_or_else(|| Matrix::zeros(n)))
}

fn entrywise_min(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.n();
    let mut out = a.clone();
    for i in 0..n {
        for j in 0..n {
            if b.get(i, j) < a.get(i, j) {
                out.set(i, j, b.get(i, j).clone());
            }
        }
    }
    out
}

/// Operator norm for the sup-norm lattice: largest absolute row sum.
pub fn max_row_sum_norm(m: &Matrix) -> Rational {
    m.rows()
        .map(|row| row.iter().map(Rational::abs).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VoigtCheck {
    pub diagonal_norm: Rational,
    pub norm: Rational,
    pub holds: bool,
}

/// `||D(m)|| <= ||m||` in the max-row-sum norm.
pub fn voigt_contraction_check(m: &Matrix) -> VoigtCheck {
    let diagonal_norm = max_row_sum_norm(&atomic_diagonal(m));
    let norm = max_row_sum_norm(m);
    let holds = diagonal_norm <= norm;
    VoigtCheck {
        diagonal_norm,
        norm,
        holds,
    }
}

/// `D(alpha a + beta b) = alpha D(a) + beta D(b)`.
pub fn check_linearity(a: &Matrix, b: &Matrix, alpha: &Rational, beta: &Rational) -> bool {
    let lhs = atomic_diagonal(&(&a.scale(alpha) + &b.scale(beta)));
    let rhs = &atomic_diagonal(a).scale(alpha) + &atomic_diagonal(b).scale(beta);
    lhs == rhs
}

/// Band-projection properties of `D` at `m`: idempotence, linearity (checked on the
/// pair `(m, m^T)` with coefficients 2 and -1/3), and `0 <= D(m) <= m` when `m >= 0`.
pub fn diagonal_band_projection_check(m: &Matrix) -> bool {
    let d = atomic_diagonal(m);
    let idempotent = atomic_diagonal(&d) == d;
    let alpha = Rational::from_integer(2);
    let beta = Rational::new(-1, 3).expect("valid literal");
    let linear = check_linearity(m, &m.transpose(), &alpha, &beta);
    let bounded = !m.is_nonnegative() || (d.is_nonnegative() && (m - &d).is_nonnegative());
    idempotent && linear && bounded
}
