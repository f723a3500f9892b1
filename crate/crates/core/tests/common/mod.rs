//! Brute-force reference implementations shared by the integration tests. None of
//! these call into the algorithms they are used to check.

#![allow(dead_code)]

use latticetri_core::generate::SplitMix64;
use latticetri_core::{Matrix, Rational};

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// `det(xI - m)` by the Leibniz expansion, ascending coefficients.
pub fn leibniz_char_poly(m: &Matrix) -> Vec<Rational> {
    let n = m.n();
    let mut total = vec![Rational::zero(); n + 1];
    for p in all_permutations(n) {
        let mut term = vec![Rational::from_integer(sign(&p))];
        for (i, &j) in p.iter().enumerate() {
            let factor = if i == j {
                vec![-m.get(i, j).clone(), Rational::one()]
            } else {
                vec![-m.get(i, j).clone()]
            };
            term = poly_mul(&term, &factor);
        }
        for (k, c) in term.into_iter().enumerate() {
            total[k] += &c;
        }
    }
    total
}

/// `prod (x - d_i)`, ascending coefficients.
pub fn poly_from_roots(roots: &[Rational]) -> Vec<Rational> {
    roots.iter().fold(vec![Rational::one()], |acc, d| {
        poly_mul(&acc, &[-d.clone(), Rational::one()])
    })
}

pub fn poly_product(polys: &[Vec<Rational>]) -> Vec<Rational> {
    polys
        .iter()
        .fold(vec![Rational::one()], |acc, p| poly_mul(&acc, p))
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.n();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum())
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}

pub fn nilpotent_by_powers(m: &Matrix) -> bool {
    let mut p = m.clone();
    for _ in 1..m.n() {
        p = mat_mul(&p, m);
    }
    p.is_zero()
}

/// Some simultaneous relabelling `order` (new position k holds old coordinate
/// `order[k]`) makes every matrix upper triangular.
pub fn triangularizable_by_search(mats: &[Matrix]) -> bool {
    let n = mats[0].n();
    all_permutations(n).iter().any(|order| {
        mats.iter()
            .all(|m| (0..n).all(|a| (0..a).all(|b| m.get(order[a], order[b]).is_zero())))
    })
}

/// Every set partition of `0..n`, built by inserting each element into an existing
/// block or a new one.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for v in 0..n {
        let mut next = Vec::new();
        for p in &acc {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(v);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![v]);
            next.push(q);
        }
        acc = next;
    }
    acc
}

/// Entrywise minimum over all partitions of `sum_B P_B m P_B`.
pub fn partition_infimum(m: &Matrix) -> Matrix {
    let n = m.n();
    let mut best: Option<Vec<Vec<Rational>>> = None;
    for p in set_partitions(n) {
        let mut block_of = vec![0; n];
        for (b, block) in p.iter().enumerate() {
            for &v in block {
                block_of[v] = b;
            }
        }
        let compressed: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if block_of[i] == block_of[j] {
                            m.get(i, j).clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        best = Some(match best {
            None => compressed,
            Some(b) => b
                .into_iter()
                .zip(compressed)
                .map(|(x, y)| {
                    x.into_iter()
                        .zip(y)
                        .map(|(u, v)| if v < u { v } else { u })
                        .collect()
                })
                .collect(),
        });
    }
    Matrix::from_rows(best.unwrap()).unwrap()
}

/// Nonnegative matrix with entries `k / d`, `k` in `0..=3d`, zero with probability
/// about one half.
pub fn random_nonnegative(rng: &mut SplitMix64, n: usize) -> Matrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.below(2) == 0 {
                        Rational::zero()
                    } else {
                        let d = 1 + rng.below(4) as i64;
                        r(rng.below(3 * d as u64 + 1) as i64, d)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}
