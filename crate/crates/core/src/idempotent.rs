//! Canonical block form of nonnegative idempotent matrices.
//!
//! With `B1` the absolute kernel (zero columns), `B` the union of `B1` with the range
//! ideal (nonzero rows), `B2 = B \ B1` and `B3` the rest, every nonnegative
//! idempotent has the shape
//!
//! ```text
//!         B1   B2    B3
//!   B1 [  0    XQ    XQY ]
//!   B2 [  0    Q     QY  ]
//!   B3 [  0    0     0   ]
//! ```
//!
//! where `Q` is an idempotent with no zero row or column, and `Q` splits into a
//! direct sum of entrywise-positive rank-one idempotents `x_j phi_j^T` with
//! `phi_j . x_j = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Block, Matrix, Rational};
use crate::lattice::CoordIdeal;
use crate::triangular::criterion_structural;

pub fn verify_idempotent(m: &Matrix) -> bool {
    m.is_nonnegative() && &(m * m) == m
}

/// Coordinates whose column is zero.
pub fn absolute_kernel(m: &Matrix) -> Result<CoordIdeal> {
    m.ensure_nonnegative()?;
    let n = m.n();
    CoordIdeal::new(n, (0..n).filter(|&j| (0..n).all(|i| m.get(i, j).is_zero())))
}

/// Coordinates whose row is nonzero.
pub fn range_ideal(m: &Matrix) -> Result<CoordIdeal> {
    m.ensure_nonnegative()?;
    let n = m.n();
    CoordIdeal::new(n, (0..n).filter(|&i| m.row(i).iter().any(|v| !v.is_zero())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOnePart {
    /// The band `L_j` carrying this summand.
    pub ideal: CoordIdeal,
    /// Column vector on `L_j` (listed in ascending coordinate order).
    pub x: Vec<Rational>,
    /// Row functional on `L_j` with `phi . x = 1`.
    pub phi: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentDecomposition {
    pub b1: CoordIdeal,
    pub b2: CoordIdeal,
    pub b3: CoordIdeal,
    pub q: Block,
    pub x_block: Block,
    pub y_block: Block,
    /// The `B1 x B3` corner; equals `x_block * y_block`.
    pub corner: Block,
    pub rank_one_parts: Vec<RankOnePart>,
    pub rank: usize,
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(format!("idempotent decomposition: {what}")))
    }
}

pub fn decompose_idempotent(m: &Matrix) -> Result<IdempotentDecomposition> {
    if !verify_idempotent(m) {
        return Err(Error::NotIdempotent);
    }
    let n = m.n();
    let b1 = absolute_kernel(m)?;
    let b = b1.union(&range_ideal(m)?);
    let b2 = b.difference(&b1);
    let b3 = b.complement();
    let (i1, i2, i3) = (b1.to_vec(), b2.to_vec(), b3.to_vec());
    let all: Vec<usize> = (0..n).collect();

    check(m.block(&all, &i1).is_zero(), "B1 columns are not zero")?;
    check(m.block(&i3, &all).is_zero(), "B3 rows are not zero")?;

    let q = m.block(&i2, &i2);
    let x_block = m.block(&i1, &i2);
    let y_block = m.block(&i2, &i3);
    let corner = m.block(&i1, &i3);
    check(q.mul(&q)? == q, "Q is not idempotent")?;
    check(x_block.mul(&q)? == x_block, "X Q != X")?;
    check(q.mul(&y_block)? == y_block, "Q Y != Y")?;
    check(x_block.mul(&y_block)? == corner, "corner != X Y")?;
    for k in 0..q.rows {
        check(
            (0..q.cols).any(|j| !q.get(k, j).is_zero()),
            "Q has a zero row",
        )?;
        check(
            (0..q.rows).any(|i| !q.get(i, k).is_zero()),
            "Q has a zero column",
        )?;
    }

    let rank_one_parts = split_rank_one(m, &i2)?;
    let rank = m.rank();
    check(
        rank == rank_one_parts.len(),
        "rank differs from the number of rank-one parts",
    )?;

    Ok(IdempotentDecomposition {
        b1,
        b2,
        b3,
        q,
        x_block,
        y_block,
        corner,
        rank_one_parts,
        rank,
    })
}

/// Connected components of the undirected support of `m` restricted to `coords`,
/// each factored as `x phi^T`.
fn split_rank_one(m: &Matrix, coords: &[usize]) -> Result<Vec<RankOnePart>> {
    let k = coords.len();
    let mut component = vec![usize::MAX; k];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..k {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component[start] = id;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..k {
                let linked = !m.get(coords[a], coords[b]).is_zero()
                    || !m.get(coords[b], coords[a]).is_zero();
                if linked && component[b] == usize::MAX {
                    component[b] = id;
                    members.push(b);
                    stack.push(b);
                }
            }
        }
        members.sort_unstable();
        components.push(members.into_iter().map(|a| coords[a]).collect());
    }

    components
        .into_iter()
        .map(|idx| {
            let block = m.principal(&idx);
            check(
                block.entries().iter().all(Rational::is_positive),
                "part is not entrywise positive",
            )?;
            let pivot = block.get(0, 0).clone();
            let x: Vec<Rational> = (0..idx.len()).map(|i| block.get(i, 0).clone()).collect();
            let phi: Vec<Rational> = block.row(0).iter().map(|v| v / &pivot).collect();
            for i in 0..idx.len() {
                for j in 0..idx.len() {
                    check(
                        &(&x[i] * &phi[j]) == block.get(i, j),
                        "part is not rank one",
                    )?;
                }
            }
            let pairing: Rational = x.iter().zip(&phi).map(|(a, b)| a * b).sum();
            check(pairing.is_one(), "phi . x != 1")?;
            Ok(RankOnePart {
                ideal: CoordIdeal::new(m.n(), idx)?,
                x,
                phi,
            })
        })
        .collect()
}

/// All entries of `x` and `phi` strictly positive; requires `phi . x = 1`.
pub fn rank_one_irreducibility(x: &[Rational], phi: &[Rational]) -> Result<bool> {
    if x.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: phi.len(),
        });
    }
    if x.iter().chain(phi).any(Rational::is_negative) {
        return Err(Error::InvalidArgument(
            "x and phi must be nonnegative".into(),
        ));
    }
    let pairing: Rational = x.iter().zip(phi).map(|(a, b)| a * b).sum();
    if !pairing.is_one() {
        return Err(Error::Pairing(pairing.to_string()));
    }
    Ok(x.iter().chain(phi).all(Rational::is_positive))
}

/// For a triangularizable nonnegative idempotent, `Some(q == I)`; `None` when the
/// matrix is not triangularizable and the statement does not apply.
pub fn triangularizable_idempotent_check(m: &Matrix) -> Result<Option<bool>> {
    if !verify_idempotent(m) {
        return Err(Error::NotIdempotent);
    }
    if !criterion_structural(m)?.triangularizable {
        return Ok(None);
    }
    let d = decompose_idempotent(m)?;
    let identity = Block::from(&Matrix::identity(d.q.rows));
    Ok(Some(d.q == identity))
}
