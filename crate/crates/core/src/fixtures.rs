//! The two counterexample families with their expected verdicts baked in.
//!
//! * `cyclic-rank-one-nilpotents`: `A_i = e_i e_{i+1}^T` (indices mod n). Each
//!   generator is triangularizable and every `D(A_i A_j)` vanishes, yet the family
//!   has no common flag: `S = sum A_i` satisfies `S^n = I`.
//! * `signed-square-zero-pair`: signed `A`, `B` with `A^2 = B^2 = AB = BA = 0`. All
//!   of `{0, A, B}` has zero diagonal, yet `|A| + B` is not nilpotent.
//!
//! Each runner takes its input matrices as arguments so that a modified input shows
//! up as failing checks with expected and actual values side by side.

use serde::Serialize;

use crate::diagonal::atomic_diagonal;
use crate::error::Error;
use crate::exact::{char_poly, is_nilpotent, Matrix, Rational};
use crate::lattice::{scc_condensation, support_union};
use crate::semigroup::{
    all_diagonals_vanish, diag_commutator_condition, generate_closure,
    quasinilpotent_semigroup_check, semigroup_pipeline,
};
use crate::triangular::{
    criteria_equivalence, criterion_charpoly_diag, criterion_nilpotent_offdiag,
    criterion_structural,
};

pub const CYCLIC: &str = "cyclic-rank-one-nilpotents";
pub const SIGNED_PAIR: &str = "signed-square-zero-pair";
pub const FIXTURE_NAMES: [&str; 2] = [CYCLIC, SIGNED_PAIR];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<FixtureCheck>,
}

impl FixtureOutcome {
    fn new(name: &str) -> Self {
        FixtureOutcome {
            name: name.to_string(),
            passed: true,
            checks: Vec::new(),
        }
    }

    fn expect(&mut self, name: &str, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let passed = expected == actual;
        self.passed &= passed;
        self.checks.push(FixtureCheck {
            name: name.to_string(),
            expected,
            actual,
            passed,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &FixtureCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn show<T: ToString>(r: Result<T, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// `A_i = e_i e_{i+1}^T`, `A_n = e_n e_1^T`.
pub fn cyclic_generators(n: usize) -> Vec<Matrix> {
    (0..n).map(|i| Matrix::unit(n, i, (i + 1) % n)).collect()
}

pub fn signed_pair() -> (Matrix, Matrix) {
    let a = Matrix::from_i64(&[&[0, 0, 1, -1], &[0, 0, -1, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    let b = Matrix::from_i64(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 1, 0, 0], &[1, 1, 0, 0]]);
    (a, b)
}

pub fn run_cyclic_example(gens: &[Matrix]) -> FixtureOutcome {
    let mut out = FixtureOutcome::new(CYCLIC);
    let Some(first) = gens.first() else {
        out.expect("generator count", "at least 3", 0);
        return out;
    };
    let n = first.n();
    if gens.iter().any(|g| g.n() != n) {
        out.expect("common dimension", n, "mixed");
        return out;
    }

    let all_criteria = gens.iter().all(|g| {
        criteria_equivalence(g)
            .is_ok_and(|r| r.structural && r.nilpotent_offdiag && r.charpoly_diag)
    });
    out.expect(
        "every generator passes criteria (a), (b), (c)",
        true,
        all_criteria,
    );

    let pairs = gens.len() * gens.len();
    let zero_diag_pairs = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| (a, b)))
        .filter(|(a, b)| atomic_diagonal(&(*a * *b)).is_zero())
        .count();
    out.expect(
        "D(A_i A_j) = 0 over ordered pairs",
        format!("{pairs} of {pairs}"),
        format!("{zero_diag_pairs} of {pairs}"),
    );

    let sum = gens.iter().fold(Matrix::zeros(n), |acc, g| &acc + g);
    out.expect(
        "S^n = I for S = sum A_i",
        true,
        sum.pow(n as u32) == Matrix::identity(n),
    );
    out.expect(
        "diagonal of S is zero",
        true,
        atomic_diagonal(&sum).is_zero(),
    );
    out.expect("S is nilpotent", false, is_nilpotent(&sum));
    out.expect(
        "S is triangularizable",
        false,
        show(criterion_structural(&sum).map(|s| s.triangularizable)),
    );

    let one_component = support_union(gens).map(|g| scc_condensation(&g).is_single_part());
    out.expect(
        "union support digraph is strongly connected",
        true,
        show(one_component),
    );

    let closure = generate_closure(gens, n);
    let word: Vec<usize> = (0..n).collect();
    let reaches_e11 = closure.map(|c| {
        c.find(&Matrix::unit(n, 0, 0))
            .is_some_and(|e| e.word == word && c.evaluate(&word) == e.matrix)
    });
    out.expect(
        "A_1 A_2 ... A_n = e_1 e_1^T in the depth-n closure",
        true,
        show(reaches_e11),
    );

    let depth_one = generate_closure(gens, 1).map(|c| diag_commutator_condition(&c).0);
    out.expect(
        "diagonal condition on generators alone",
        true,
        show(depth_one),
    );

    match semigroup_pipeline(gens, n) {
        Ok(v) => {
            out.expect(
                "each closure element triangularizable",
                true,
                v.each_triangularizable,
            );
            out.expect(
                "diagonal condition on depth-n closure",
                false,
                v.diag_condition,
            );
            let short_pair = v
                .counterexample_pair
                .as_ref()
                .is_some_and(|(a, b)| a.len() <= n && b.len() <= n);
            out.expect("counterexample pair within depth n", true, short_pair);
            out.expect(
                "commonly triangularizable",
                false,
                v.commonly_triangularizable,
            );
        }
        Err(e) => out.expect("semigroup pipeline", "verdict", format!("error: {e}")),
    }

    let quasi = generate_closure(gens, n + 2).and_then(|c| quasinilpotent_semigroup_check(&c));
    out.expect(
        "closure consists of nilpotents with a common flag",
        false,
        show(quasi),
    );
    out
}

pub fn run_signed_pair_example(a: &Matrix, b: &Matrix) -> FixtureOutcome {
    let mut out = FixtureOutcome::new(SIGNED_PAIR);
    if a.n() != b.n() {
        out.expect("common dimension", a.n(), b.n());
        return out;
    }
    let n = a.n();
    let products_vanish = [(a, a), (b, b), (a, b), (b, a)]
        .iter()
        .all(|(x, y)| (*x * *y).is_zero());
    out.expect("A^2 = B^2 = AB = BA = 0", true, products_vanish);

    match generate_closure(&[a.clone(), b.clone()], 4) {
        Ok(c) => {
            out.expect(
                "semigroup generated by A, B has 3 elements",
                3,
                c.elements.len(),
            );
            out.expect("closure is complete", true, c.complete);
            out.expect("D vanishes on {0, A, B}", true, all_diagonals_vanish(&c));
        }
        Err(e) => out.expect("closure of {A, B}", "closure", format!("error: {e}")),
    }

    let rejected = matches!(
        semigroup_pipeline(&[a.clone(), b.clone()], 2),
        Err(Error::NegativeEntry { .. })
    );
    out.expect("pipeline rejects the signed generators", true, rejected);

    let abs_a = a.abs();
    let listed = [Matrix::zeros(n), abs_a.clone(), b.clone()];
    out.expect(
        "D vanishes on {0, |A|, B}",
        true,
        listed.iter().all(|m| atomic_diagonal(m).is_zero()),
    );

    let m = &abs_a + b;
    out.expect(
        "diagonal of |A| + B is zero",
        true,
        atomic_diagonal(&m).is_zero(),
    );
    out.expect("char poly of |A| + B", "x^4 - 4*x^2", char_poly(&m));
    out.expect(
        "multiplicity of 0 in char poly of |A| + B",
        2,
        char_poly(&m).root_multiplicity(&Rational::zero()),
    );
    out.expect("|A| + B is nilpotent", false, is_nilpotent(&m));
    let criteria = format!(
        "{},{},{}",
        show(criterion_structural(&m).map(|s| s.triangularizable)),
        show(criterion_nilpotent_offdiag(&m)),
        show(criterion_charpoly_diag(&m))
    );
    out.expect(
        "|A| + B criteria (a),(b),(c)",
        "false,false,false",
        criteria,
    );
    out
}

pub fn run_fixture(name: &str) -> Option<FixtureOutcome> {
    match name {
        CYCLIC => Some(run_cyclic_example(&cyclic_generators(4))),
        SIGNED_PAIR => {
            let (a, b) = signed_pair();
            Some(run_signed_pair_example(&a, &b))
        }
        _ => None,
    }
}

pub fn run_all() -> Vec<FixtureOutcome> {
    FIXTURE_NAMES
        .iter()
        .filter_map(|name| run_fixture(name))
        .collect()
}
