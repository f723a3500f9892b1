//! Finite windows onto matrix semigroups and the simultaneous triangularization
//! pipeline.
//!
//! A finitely generated semigroup of rational matrices need not be finite, so the
//! closure is enumerated breadth-first up to a word-length bound and every verdict
//! carries its hypothesis scope. Positive scalar multiples and norm limits are not
//! enumerated: they do not change supports, and the structural conclusions depend on
//! supports alone.

use std::collections::HashMap;

use serde::Serialize;

use crate::diagonal::atomic_diagonal;
use crate::error::{Error, Result};
use crate::exact::{is_nilpotent, permute_similarity, Matrix, Permutation};
use crate::lattice::{support_union, IdealChain};
use crate::triangular::{common_triangularization, criteria_equivalence};

/// Word over generator indices; the product is taken left to right.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureElement {
    pub matrix: Matrix,
    /// Shortest, then lexicographically least, word producing `matrix`.
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupClosure {
    pub generators: Vec<Matrix>,
    pub depth: usize,
    /// Distinct elements ordered by word length, then lexicographically by word.
    pub elements: Vec<ClosureElement>,
    /// True iff the enumerated set is closed under right multiplication by every
    /// generator, i.e. it is the whole semigroup.
    pub complete: bool,
}

impl SemigroupClosure {
    pub fn matrices(&self) -> impl Iterator<Item = &Matrix> {
        self.elements.iter().map(|e| &e.matrix)
    }

    pub fn find(&self, m: &Matrix) -> Option<&ClosureElement> {
        self.elements.iter().find(|e| &e.matrix == m)
    }

    pub fn evaluate(&self, word: &[usize]) -> Matrix {
        evaluate_word(&self.generators, word)
    }
}

pub fn evaluate_word(gens: &[Matrix], word: &[usize]) -> Matrix {
    let n = gens[0].n();
    word.iter()
        .fold(Matrix::identity(n), |acc, &g| &acc * &gens[g])
}

/// Breadth-first enumeration of all products of at most `depth` generators.
///
/// Level `L + 1` extends each element first reached at level `L` by every generator
/// in index order, which visits new words in lexicographic order. After the last
/// level, one further level is probed (without storing it) to decide completeness.
pub fn generate_closure(gens: &[Matrix], depth: usize) -> Result<SemigroupClosure> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?;
    for g in gens {
        first.check_same_dim(g)?;
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }

    let mut elements: Vec<ClosureElement> = Vec::new();
    let mut index: HashMap<Matrix, usize> = HashMap::new();
    let mut frontier: Vec<usize> = Vec::new();
    for (g, m) in gens.iter().enumerate() {
        if !index.contains_key(m) {
            index.insert(m.clone(), elements.len());
            frontier.push(elements.len());
            elements.push(ClosureElement {
                matrix: m.clone(),
                word: vec![g],
            });
        }
    }

    let complete;
    let mut level = 1;
    loop {
        if frontier.is_empty() {
            complete = true;
            break;
        }
        if level == depth {
            complete = frontier.iter().all(|&e| {
                gens.iter()
                    .all(|g| index.contains_key(&(&elements[e].matrix * g)))
            });
            break;
        }
        let mut next = Vec::new();
        for &e in &frontier {
            for (g, gm) in gens.iter().enumerate() {
                let product = &elements[e].matrix * gm;
                if index.contains_key(&product) {
                    continue;
                }
                let mut word = elements[e].word.clone();
                word.push(g);
                index.insert(product.clone(), elements.len());
                next.push(elements.len());
                elements.push(ClosureElement {
                    matrix: product,
                    word,
                });
            }
        }
        frontier = next;
        level += 1;
    }

    Ok(SemigroupClosure {
        generators: gens.to_vec(),
        depth,
        elements,
        complete,
    })
}

/// Checks `D(S T) = D(T S)` over all unordered pairs of enumerated elements, in
/// element order; returns the words of the first violating pair.
pub fn diag_commutator_condition(closure: &SemigroupClosure) -> (bool, Option<(Word, Word)>) {
    let els = &closure.elements;
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let (s, t) = (&els[i].matrix, &els[j].matrix);
            if s.product_diagonal(t) != t.product_diagonal(s) {
                return (false, Some((els[i].word.clone(), els[j].word.clone())));
            }
        }
    }
    (true, None)
}

/// Pairs checked by [`diag_commutator_condition`] when it finds no violation.
pub fn pair_count(closure: &SemigroupClosure) -> usize {
    let k = closure.elements.len();
    k * k.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisScope {
    CompleteClosure,
    DepthTruncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupVerdict {
    pub each_triangularizable: bool,
    pub diag_condition: bool,
    pub checked_pairs: usize,
    pub hypothesis_scope: HypothesisScope,
    pub commonly_triangularizable: bool,
    pub permutation: Option<Permutation>,
    pub chain: Option<IdealChain>,
    pub counterexample_pair: Option<(Word, Word)>,
    pub element_count: usize,
}

pub fn semigroup_pipeline(gens: &[Matrix], depth: usize) -> Result<SemigroupVerdict> {
    for g in gens {
        g.ensure_nonnegative()?;
    }
    let closure = generate_closure(gens, depth)?;
    semigroup_pipeline_on(&closure)
}

/// Pipeline over an already enumerated closure of nonnegative generators.
pub fn semigroup_pipeline_on(closure: &SemigroupClosure) -> Result<SemigroupVerdict> {
    let gens = &closure.generators;
    for m in closure.matrices() {
        m.ensure_nonnegative()?;
    }

    let mut each_triangularizable = true;
    for m in closure.matrices() {
        each_triangularizable &= criteria_equivalence(m)?.structural;
    }

    let (diag_condition, counterexample_pair) = diag_commutator_condition(closure);
    let checked_pairs = match &counterexample_pair {
        None => pair_count(closure),
        Some((a, b)) => {
            let pos = |w: &Word| {
                closure
                    .elements
                    .iter()
                    .position(|e| &e.word == w)
                    .expect("word from closure")
            };
            let (i, j) = (pos(a), pos(b));
            let k = closure.elements.len();
            // pairs (i', j') with i' < j' visited before and including (i, j)
            i * k - i * (i + 1) / 2 + (j - i)
        }
    };

    let g = support_union(gens)?;
    let outcome = common_triangularization(gens, &g)?;
    if let Some(p) = &outcome.permutation {
        for (k, m) in closure.matrices().enumerate() {
            if !permute_similarity(m, p)?.is_upper_triangular() {
                return Err(Error::Internal(format!(
                    "closure element {k} is not upper triangular under the common permutation"
                )));
            }
        }
    }

    let hypothesis_scope = if closure.complete {
        HypothesisScope::CompleteClosure
    } else {
        HypothesisScope::DepthTruncated
    };

    if closure.complete {
        let closure_mats: Vec<Matrix> = closure.matrices().cloned().collect();
        if support_union(&closure_mats)?.reachability() != g.reachability() {
            return Err(Error::Internal(
                "closure and generators have different invariant ideals".into(),
            ));
        }
        if each_triangularizable && diag_condition && !outcome.triangularizable {
            return Err(Error::TheoremViolation(
                "complete closure satisfies the hypotheses but is not commonly triangularizable"
                    .into(),
            ));
        }
    }

    Ok(SemigroupVerdict {
        each_triangularizable,
        diag_condition,
        checked_pairs,
        hypothesis_scope,
        commonly_triangularizable: outcome.triangularizable,
        permutation: outcome.permutation,
        chain: outcome.chain,
        counterexample_pair,
        element_count: closure.elements.len(),
    })
}

/// True iff every enumerated element is nilpotent and the generators share a
/// triangularizing flag (union support digraph acyclic, no loops).
///
/// On a complete closure of nilpotent elements a cyclic union digraph contradicts the
/// theorem and is reported as [`Error::TheoremViolation`]. On a truncated closure the
/// hypothesis is unverified and the answer is simply `false`.
pub fn quasinilpotent_semigroup_check(closure: &SemigroupClosure) -> Result<bool> {
    if !closure.matrices().all(is_nilpotent) {
        return Ok(false);
    }
    let acyclic = support_union(&closure.generators)?.is_acyclic();
    if !acyclic && closure.complete {
        return Err(Error::TheoremViolation(
            "complete semigroup of nilpotent matrices without a common flag".into(),
        ));
    }
    Ok(acyclic)
}

/// Whether `D(m) = 0` for every enumerated element.
pub fn all_diagonals_vanish(closure: &SemigroupClosure) -> bool {
    closure.matrices().all(|m| atomic_diagonal(m).is_zero())
}
