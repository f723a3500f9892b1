//! Single-matrix ideal-triangularizability.
//!
//! For a nonnegative matrix the following are decided independently and must agree:
//!
//! * (a) structural: every strongly connected component of the support digraph is a
//!   single vertex, so a permutation makes the matrix upper triangular;
//! * (b) the off-diagonal part `m - D(m)` is nilpotent;
//! * (c) the characteristic polynomial equals `prod_i (x - m[i][i])`.
//!
//! Criterion (c) is checked as an identity of degree-`n` monic polynomials. That is
//! stronger than comparing nonzero eigenvalues with multiplicity, and at finite
//! dimension equivalent to it, so a `true` here should not be read as anything more
//! than the diagonal listing the full spectrum.

use serde::Serialize;

use crate::diagonal::atomic_diagonal;
use crate::error::{Error, Result};
use crate::exact::{char_poly, is_nilpotent, permute_similarity, CharPoly, Matrix, Permutation};
use crate::lattice::{
    permutation_from_parts, scc_condensation, support_union, IdealChain, SupportDigraph,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralOutcome {
    pub triangularizable: bool,
    pub permutation: Option<Permutation>,
    pub chain: Option<IdealChain>,
}

/// Triangularizing permutation and full flag of invariant ideals for a family whose
/// union support digraph has only singleton components, verified on every member.
pub(crate) fn common_triangularization(
    mats: &[Matrix],
    g: &SupportDigraph,
) -> Result<StructuralOutcome> {
    let cond = scc_condensation(g);
    if !cond.all_singletons() {
        return Ok(StructuralOutcome {
            triangularizable: false,
            permutation: None,
            chain: None,
        });
    }
    let parts = cond.sink_first_parts();
    let permutation = permutation_from_parts(&parts)?;
    let chain = IdealChain::from_parts(g.n(), &parts)?;
    for (k, m) in mats.iter().enumerate() {
        if !permute_similarity(m, &permutation)?.is_upper_triangular() {
            return Err(Error::Internal(format!(
                "permuted matrix {k} is not upper triangular"
            )));
        }
        if !chain.is_invariant_under(m) {
            return Err(Error::Internal(format!(
                "flag not invariant under matrix {k}"
            )));
        }
    }
    Ok(StructuralOutcome {
        triangularizable: true,
        permutation: Some(permutation),
        chain: Some(chain),
    })
}

pub fn criterion_structural(m: &Matrix) -> Result<StructuralOutcome> {
    let mats = std::slice::from_ref(m);
    let g = support_union(mats)?;
    common_triangularization(mats, &g)
}

pub fn criterion_nilpotent_offdiag(m: &Matrix) -> Result<bool> {
    m.ensure_nonnegative()?;
    Ok(is_nilpotent(&(m - &atomic_diagonal(m))))
}

pub fn criterion_charpoly_diag(m: &Matrix) -> Result<bool> {
    m.ensure_nonnegative()?;
    Ok(char_poly(m) == CharPoly::from_roots(&m.diagonal_entries()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub structural: bool,
    pub nilpotent_offdiag: bool,
    pub charpoly_diag: bool,
    pub permutation: Option<Permutation>,
    pub chain: Option<IdealChain>,
}

impl CriteriaReport {
    pub fn triangularizable(&self) -> bool {
        self.structural
    }
}

/// Runs all three criteria; any disagreement is a [`Error::TheoremViolation`].
pub fn criteria_equivalence(m: &Matrix) -> Result<CriteriaReport> {
    let structural = criterion_structural(m)?;
    let nilpotent_offdiag = criterion_nilpotent_offdiag(m)?;
    let charpoly_diag = criterion_charpoly_diag(m)?;
    if structural.triangularizable != nilpotent_offdiag || nilpotent_offdiag != charpoly_diag {
        return Err(Error::TheoremViolation(format!(
            "criteria disagree on {m:?}: structural={}, nilpotent_offdiag={}, charpoly_diag={}",
            structural.triangularizable, nilpotent_offdiag, charpoly_diag
        )));
    }
    Ok(CriteriaReport {
        structural: structural.triangularizable,
        nilpotent_offdiag,
        charpoly_diag,
        permutation: structural.permutation,
        chain: structural.chain,
    })
}

/// Compressions of `m` to the gaps `M \ M_-` of the chain, in chain order.
pub fn gap_blocks(m: &Matrix, chain: &IdealChain) -> Result<Vec<Matrix>> {
    if chain.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            found: chain.n(),
        });
    }
    if let Some(bad) = chain.members().iter().find(|j| !j.is_invariant_under(m)) {
        return Err(Error::NotInvariant {
            members: bad.to_vec(),
        });
    }
    Ok(chain
        .gaps()
        .iter()
        .map(|gap| m.principal(&gap.to_vec()))
        .collect())
}

/// `char_poly(m)` equals the product of the gap-block characteristic polynomials.
///
/// Both the spectral union and the multiplicity sum over the chain follow from this
/// polynomial identity, zero eigenvalue included.
pub fn ringrose_check(m: &Matrix, chain: &IdealChain) -> Result<bool> {
    let blocks = gap_blocks(m, chain)?;
    let block_polys: Vec<CharPoly> = blocks.iter().map(char_poly).collect();
    Ok(char_poly(m) == CharPoly::product(&block_polys))
}
