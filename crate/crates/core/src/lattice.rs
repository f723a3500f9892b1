//! Coordinate ideals and their invariance under nonnegative matrices.
//!
//! In a finite-dimensional coordinate lattice every closed ideal is spanned by a
//! subset of the standard basis, so invariant ideals are read off the support
//! digraph: the ideal on `J` is invariant under `m` exactly when no edge leaves `J`,
//! i.e. `m[i][j] = 0` for every `j` in `J` and `i` outside it.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Permutation, Rational};

/// Closed ideal spanned by the standard atoms `e_i`, `i` in `members`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CoordIdealJson", into = "CoordIdealJson")]
pub struct CoordIdeal {
    n: usize,
    members: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct CoordIdealJson {
    n: usize,
    members: Vec<usize>,
}

impl TryFrom<CoordIdealJson> for CoordIdeal {
    type Error = Error;
    fn try_from(json: CoordIdealJson) -> Result<Self> {
        CoordIdeal::new(json.n, json.members)
    }
}

impl From<CoordIdeal> for CoordIdealJson {
    fn from(ideal: CoordIdeal) -> Self {
        CoordIdealJson {
            n: ideal.n,
            members: ideal.members.into_iter().collect(),
        }
    }
}

impl CoordIdeal {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {bad} out of range for dimension {n}"
            )));
        }
        Ok(CoordIdeal { n, members })
    }

    pub fn empty(n: usize) -> Self {
        CoordIdeal {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        CoordIdeal {
            n,
            members: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    /// The disjoint complement `J^d`.
    pub fn complement(&self) -> CoordIdeal {
        CoordIdeal {
            n: self.n,
            members: (0..self.n).filter(|i| !self.members.contains(i)).collect(),
        }
    }

    pub fn union(&self, other: &CoordIdeal) -> CoordIdeal {
        CoordIdeal {
            n: self.n,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &CoordIdeal) -> CoordIdeal {
        CoordIdeal {
            n: self.n,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }

    pub fn difference(&self, other: &CoordIdeal) -> CoordIdeal {
        CoordIdeal {
            n: self.n,
            members: self.members.difference(&other.members).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &CoordIdeal) -> bool {
        self.members.is_subset(&other.members)
    }

    /// 0/1 indicator vector.
    pub fn indicator(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                if self.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    /// Diagonal 0/1 band projection onto the ideal.
    pub fn projection(&self) -> Matrix {
        Matrix::diagonal(&self.indicator())
    }

    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        is_invariant(self, m)
    }
}

/// `J` is invariant under `m` iff `m[i][j] = 0` whenever `j` is in `J` and `i` is not.
pub fn is_invariant(ideal: &CoordIdeal, m: &Matrix) -> bool {
    let outside = ideal.complement();
    ideal
        .members()
        .all(|j| outside.members().all(|i| m.get(i, j).is_zero()))
}

/// Strictly increasing chain of coordinate ideals from `{}` to the full set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealChain {
    n: usize,
    members: Vec<CoordIdeal>,
}

impl IdealChain {
    pub fn new(n: usize, members: Vec<CoordIdeal>) -> Result<Self> {
        let ok_ends = members.first().is_some_and(CoordIdeal::is_empty)
            && members.last().is_some_and(CoordIdeal::is_full);
        if !ok_ends {
            return Err(Error::InvalidArgument(
                "chain must start at the zero ideal and end at the full space".into(),
            ));
        }
        for w in members.windows(2) {
            if w[0].n != n || w[1].n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if w[0].n != n { w[0].n } else { w[1].n },
                });
            }
            if !(w[0].is_subset(&w[1]) && w[0].len() < w[1].len()) {
                return Err(Error::InvalidArgument(format!(
                    "chain is not strictly increasing at {:?} -> {:?}",
                    w[0].to_vec(),
                    w[1].to_vec()
                )));
            }
        }
        Ok(IdealChain { n, members })
    }

    /// Chain of prefix unions of `parts` (taken in order).
    pub fn from_parts(n: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut members = vec![CoordIdeal::empty(n)];
        let mut acc = CoordIdeal::empty(n);
        for part in parts {
            acc = acc.union(&CoordIdeal::new(n, part.iter().copied())?);
            members.push(acc.clone());
        }
        if n == 0 {
            members.push(CoordIdeal::full(0));
        }
        IdealChain::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[CoordIdeal] {
        &self.members
    }

    /// Every step adds exactly one coordinate.
    pub fn is_maximal(&self) -> bool {
        self.members.len() == self.n + 1
    }

    /// Gaps `M \ M_-` between consecutive members, in chain order.
    pub fn gaps(&self) -> Vec<CoordIdeal> {
        self.members
            .windows(2)
            .map(|w| w[1].difference(&w[0]))
            .collect()
    }

    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        self.members.iter().all(|j| is_invariant(j, m))
    }
}

/// Support digraph: edge `j -> i` whenever entry `(i, j)` is nonzero, i.e. coordinate
/// `j` feeds coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportDigraph {
    n: usize,
    successors: Vec<Vec<usize>>,
}

impl SupportDigraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut successors = vec![BTreeSet::new(); n];
        for (from, to) in edges {
            successors[from].insert(to);
        }
        SupportDigraph {
            n,
            successors: successors
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        }
    }

    /// Nonzero pattern of a single matrix of any sign.
    pub fn of_matrix(m: &Matrix) -> Self {
        Self::from_edges(m.n(), pattern_edges(m))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(from, s)| s.iter().map(move |&to| (from, to)))
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].binary_search(&to).is_ok()
    }

    pub fn has_self_loop(&self) -> bool {
        (0..self.n).any(|v| self.has_edge(v, v))
    }

    /// No directed cycle, self-loops included.
    pub fn is_acyclic(&self) -> bool {
        !self.has_self_loop() && scc_condensation(self).parts.iter().all(|p| p.len() == 1)
    }

    /// Reflexive-transitive reachability, `reach[u][v]` iff a path `u -> ... -> v` exists.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let mut reach = vec![vec![false; self.n]; self.n];
        for (start, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![start];
            row[start] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.successors[v] {
                    if !row[w] {
                        row[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        reach
    }
}

fn pattern_edges(m: &Matrix) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = m.n();
    (0..n).flat_map(move |i| {
        (0..n)
            .filter(move |&j| !m.get(i, j).is_zero())
            .map(move |j| (j, i))
    })
}

fn common_dimension(mats: &[Matrix]) -> Result<usize> {
    let first = mats
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one matrix is required".into()))?;
    for m in mats {
        first.check_same_dim(m)?;
    }
    Ok(first.n())
}

/// Union of the nonzero patterns of nonnegative matrices of a common dimension.
pub fn support_union(mats: &[Matrix]) -> Result<SupportDigraph> {
    let n = common_dimension(mats)?;
    for m in mats {
        m.ensure_nonnegative()?;
    }
    Ok(SupportDigraph::from_edges(
        n,
        mats.iter().flat_map(pattern_edges),
    ))
}

/// Strongly connected components listed in a topological order of the condensation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condensation {
    /// Components, each sorted ascending, in topological order (edges go forward).
    pub parts: Vec<Vec<usize>>,
    /// `component_of[v]` indexes into `parts`.
    pub component_of: Vec<usize>,
    /// Deduplicated condensation edges between part indices.
    pub edges: Vec<(usize, usize)>,
}

impl Condensation {
    /// Parts in a topological order of the reversed condensation (sinks first),
    /// ties broken by smallest contained vertex.
    pub fn sink_first_parts(&self) -> Vec<Vec<usize>> {
        let k = self.parts.len();
        let mut predecessors = vec![Vec::new(); k];
        for &(a, b) in &self.edges {
            predecessors[b].push(a);
        }
        // in the reversed graph an edge b -> a exists for each forward a -> b
        let mut indegree = vec![0usize; k];
        for &(a, _) in &self.edges {
            indegree[a] += 1;
        }
        let order = kahn_min_first(&self.parts, &indegree, |c| predecessors[c].clone());
        order.into_iter().map(|c| self.parts[c].clone()).collect()
    }

    pub fn is_single_part(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn all_singletons(&self) -> bool {
        self.parts.iter().all(|p| p.len() == 1)
    }
}

/// Kahn's algorithm on component indices, always releasing the available component
/// with the smallest vertex first.
fn kahn_min_first(
    parts: &[Vec<usize>],
    indegree: &[usize],
    next: impl Fn(usize) -> Vec<usize>,
) -> Vec<usize> {
    let mut indegree = indegree.to_vec();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(c, _)| Reverse((parts[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(parts.len());
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(c);
        for d in next(c) {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                heap.push(Reverse((parts[d][0], d)));
            }
        }
    }
    debug_assert_eq!(order.len(), parts.len(), "condensation must be acyclic");
    order
}

/// Tarjan's algorithm followed by a deterministic topological sort of the
/// condensation (ties broken by smallest contained vertex).
pub fn scc_condensation(g: &SupportDigraph) -> Condensation {
    let raw = tarjan(g);
    let mut comp_raw = vec![0usize; g.n];
    for (c, part) in raw.iter().enumerate() {
        for &v in part {
            comp_raw[v] = c;
        }
    }
    let mut raw_edges = BTreeSet::new();
    for (u, v) in g.edges() {
        let (cu, cv) = (comp_raw[u], comp_raw[v]);
        if cu != cv {
            raw_edges.insert((cu, cv));
        }
    }
    let mut succ = vec![Vec::new(); raw.len()];
    let mut indegree = vec![0usize; raw.len()];
    for &(a, b) in &raw_edges {
        succ[a].push(b);
        indegree[b] += 1;
    }
    let order = kahn_min_first(&raw, &indegree, |c| succ[c].clone());

    let mut position = vec![0usize; raw.len()];
    for (k, &c) in order.iter().enumerate() {
        position[c] = k;
    }
    let parts: Vec<Vec<usize>> = order.iter().map(|&c| raw[c].clone()).collect();
    let component_of = comp_raw.iter().map(|&c| position[c]).collect();
    let edges = raw_edges
        .into_iter()
        .map(|(a, b)| (position[a], position[b]))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Condensation {
        parts,
        component_of,
        edges,
    }
}

fn tarjan(g: &SupportDigraph) -> Vec<Vec<usize>> {
    struct State<'a> {
        g: &'a SupportDigraph,
        counter: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }

    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.counter);
        s.low[v] = s.counter;
        s.counter += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in s.g.successors(v) {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("tarjan stack underflow");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.comps.push(comp);
        }
    }

    let mut s = State {
        g,
        counter: 0,
        index: vec![None; g.n],
        low: vec![0; g.n],
        stack: Vec::new(),
        on_stack: vec![false; g.n],
        comps: Vec::new(),
    };
    for v in 0..g.n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.comps
}

/// Common invariant coordinate ideals of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantIdeals {
    /// The inclusion-minimal nonzero common invariant ideals (sink components).
    pub minimal: Vec<CoordIdeal>,
    /// True iff the only common invariant ideals are `{}` and the full space.
    pub irreducible: bool,
    /// A maximal chain of common invariant ideals (prefix unions, sinks first).
    pub chain: IdealChain,
}

/// Ideal-closure of `seed`: everything reachable from it along support edges.
pub fn invariant_hull(g: &SupportDigraph, seed: &CoordIdeal) -> CoordIdeal {
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<usize> = seed.members().collect();
    for &v in &stack {
        seen[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in g.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    CoordIdeal {
        n: g.n(),
        members: (0..g.n()).filter(|&v| seen[v]).collect(),
    }
}

pub fn invariant_ideals(mats: &[Matrix]) -> Result<InvariantIdeals> {
    let g = support_union(mats)?;
    let cond = scc_condensation(&g);
    let n = g.n();
    let mut out_degree = vec![0usize; cond.parts.len()];
    for &(a, _) in &cond.edges {
        out_degree[a] += 1;
    }
    let mut minimal: Vec<CoordIdeal> = cond
        .parts
        .iter()
        .enumerate()
        .filter(|(c, _)| out_degree[*c] == 0)
        .map(|(_, p)| CoordIdeal::new(n, p.iter().copied()))
        .collect::<Result<_>>()?;
    minimal.sort();
    let chain = IdealChain::from_parts(n, &cond.sink_first_parts())?;
    Ok(InvariantIdeals {
        minimal,
        irreducible: cond.is_single_part(),
        chain,
    })
}

/// Exhaustive list of common invariant ideals, for small `n` (at most 16).
pub fn all_invariant_ideals(mats: &[Matrix]) -> Result<Vec<CoordIdeal>> {
    let n = common_dimension(mats)?;
    if n > 16 {
        return Err(Error::DimensionGuard { n, limit: 16 });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let ideal = CoordIdeal::new(n, (0..n).filter(|i| mask & (1 << i) != 0))?;
        if mats.iter().all(|m| is_invariant(&ideal, m)) {
            out.push(ideal);
        }
    }
    Ok(out)
}

/// Constructive reducibility certificates for a family `S` with a nontrivial common
/// invariant ideal `J`: a positive vector `f` and positive functional `phi` with
/// `phi(S f) = 0`, and band projections `A`, `B` with `A S B = 0`, for every `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityWitness {
    pub ideal: CoordIdeal,
    pub f: Vec<Rational>,
    pub phi: Vec<Rational>,
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Reducibility {
    Irreducible,
    Reducible(ReducibilityWitness),
}

pub fn reducibility_witnesses(mats: &[Matrix]) -> Result<Reducibility> {
    let ideals = invariant_ideals(mats)?;
    if ideals.irreducible {
        return Ok(Reducibility::Irreducible);
    }
    let ideal = ideals.minimal[0].clone();
    let complement = ideal.complement();
    let witness = ReducibilityWitness {
        f: ideal.indicator(),
        phi: complement.indicator(),
        a: complement.projection(),
        b: ideal.projection(),
        ideal,
    };
    verify_witness(&witness, mats)?;
    Ok(Reducibility::Reducible(witness))
}

/// Re-checks every equation a witness claims, exactly.
pub fn verify_witness(w: &ReducibilityWitness, mats: &[Matrix]) -> Result<()> {
    if w.ideal.is_empty() || w.ideal.is_full() {
        return Err(Error::Internal("witness ideal is trivial".into()));
    }
    for (k, s) in mats.iter().enumerate() {
        if !is_invariant(&w.ideal, s) {
            return Err(Error::Internal(format!(
                "witness ideal not invariant under matrix {k}"
            )));
        }
        let pairing: Rational = (0..s.n())
            .map(|i| &w.phi[i] * &(0..s.n()).map(|j| s.get(i, j) * &w.f[j]).sum::<Rational>())
            .sum();
        if !pairing.is_zero() {
            return Err(Error::Internal(format!(
                "phi(S f) = {pairing} for matrix {k}"
            )));
        }
        if !(&(&w.a * s) * &w.b).is_zero() {
            return Err(Error::Internal(format!("A S B != 0 for matrix {k}")));
        }
    }
    Ok(())
}

/// Permutation listing the given parts in order, members ascending within a part.
pub fn permutation_from_parts(parts: &[Vec<usize>]) -> Result<Permutation> {
    let order: Vec<usize> = parts.iter().flatten().copied().collect();
    Permutation::from_order(&order)
}
