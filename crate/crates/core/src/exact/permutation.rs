use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};

/// Bijection on `{0, ..., n-1}`. `images[i]` is the new position of coordinate `i`,
/// so the permutation matrix `P` sends `e_i` to `e_{images[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PermutationJson", into = "PermutationJson")]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermutationJson {
    images: Vec<usize>,
}

impl TryFrom<PermutationJson> for Permutation {
    type Error = Error;
    fn try_from(json: PermutationJson) -> Result<Self> {
        Permutation::new(json.images)
    }
}

impl From<Permutation> for PermutationJson {
    fn from(p: Permutation) -> Self {
        PermutationJson { images: p.images }
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Permutation placing `order[k]` at position `k`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut images = vec![usize::MAX; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n || images[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "not an ordering of 0..{n}: {order:?}"
                )));
            }
            images[v] = k;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Original coordinates listed by new position.
    pub fn order(&self) -> Vec<usize> {
        self.inverse().images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        Permutation {
            images: first.images.iter().map(|&v| self.images[v]).collect(),
        }
    }
}

/// `P m P^{-1}`: entry `(i, j)` of `m` moves to `(p(i), p(j))`.
pub fn permute_similarity(m: &Matrix, p: &Permutation) -> Result<Matrix> {
    if m.n() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: p.len(),
        });
    }
    let mut out = Matrix::zeros(m.n());
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.set(p.image(i), p.image(j), m.get(i, j).clone());
        }
    }
    Ok(out)
}
