mod common;

use common::*;
use latticetri_core::diagonal::{atomic_diagonal, schep_oracle};
use latticetri_core::exact::{char_poly, is_nilpotent, permute_similarity};
use latticetri_core::fixtures::{cyclic_generators, signed_pair};
use latticetri_core::generate::{gen_matrix, GenMode, GenSpec, SplitMix64};
use latticetri_core::lattice::{all_invariant_ideals, invariant_ideals, SupportDigraph};
use latticetri_core::semigroup::{generate_closure, semigroup_pipeline};
use latticetri_core::triangular::criteria_equivalence;
use latticetri_core::{Matrix, Rational};

#[test]
fn leibniz_oracle_on_hand_examples() {
    // det(xI - [[a, b], [c, d]]) = x^2 - (a + d) x + (ad - bc)
    let m = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
    assert_eq!(
        leibniz_char_poly(&m),
        vec![
            Rational::from_integer(-2),
            Rational::from_integer(-5),
            Rational::one()
        ]
    );
    assert_eq!(
        leibniz_char_poly(&Matrix::identity(3)),
        poly_from_roots(&[r(1, 1), r(1, 1), r(1, 1)])
    );
}

#[test]
fn signed_pair_char_poly_matches_expansion() {
    let (a, b) = signed_pair();
    let m = &a.abs() + &b;
    let expected = vec![
        Rational::zero(),
        Rational::zero(),
        Rational::from_integer(-4),
        Rational::zero(),
        Rational::one(),
    ];
    assert_eq!(leibniz_char_poly(&m), expected);
    assert_eq!(char_poly(&m).coefficients(), expected.as_slice());
    assert_eq!(char_poly(&m).to_string(), "x^4 - 4*x^2");
}

#[test]
fn char_poly_matches_leibniz_on_random_matrices() {
    let mut rng = SplitMix64::new(101);
    for n in 1..=6 {
        for _ in 0..15 {
            let m = random_nonnegative(&mut rng, n);
            assert_eq!(
                char_poly(&m).coefficients(),
                leibniz_char_poly(&m).as_slice(),
                "{m:?}"
            );
        }
    }
}

#[test]
fn signed_char_poly_matches_leibniz() {
    let mut rng = SplitMix64::new(5);
    for n in 1..=5 {
        for _ in 0..10 {
            let rows = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| r(rng.below(9) as i64 - 4, 1 + rng.below(3) as i64))
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            assert_eq!(
                char_poly(&m).coefficients(),
                leibniz_char_poly(&m).as_slice()
            );
        }
    }
}

#[test]
fn triangularizability_matches_permutation_search() {
    let mut rng = SplitMix64::new(77);
    for i in 0..300u64 {
        let n = 2 + (i % 4) as usize;
        let mode = if i % 3 == 0 {
            GenMode::Triangularizable
        } else {
            GenMode::Raw
        };
        let m = if i % 2 == 0 {
            gen_matrix(&GenSpec::new(mode, n, i).with_density(r(1, 3))).unwrap()
        } else {
            random_nonnegative(&mut rng, n)
        };
        let report = criteria_equivalence(&m).unwrap();
        assert_eq!(
            report.structural,
            triangularizable_by_search(std::slice::from_ref(&m)),
            "{m:?}"
        );
        if let Some(p) = report.permutation {
            assert!(permute_similarity(&m, &p).unwrap().is_upper_triangular());
        }
    }
}

#[test]
fn nilpotence_matches_powers_and_char_poly() {
    let mut rng = SplitMix64::new(3);
    for n in 1..=6 {
        for _ in 0..40 {
            let mut m = random_nonnegative(&mut rng, n);
            if rng.below(2) == 0 {
                for i in 0..n {
                    for j in 0..=i {
                        m.set(i, j, Rational::zero());
                    }
                }
                let p = rng.permutation(n);
                m = permute_similarity(&m, &p).unwrap();
            }
            let by_powers = nilpotent_by_powers(&m);
            assert_eq!(is_nilpotent(&m), by_powers);
            let poly = leibniz_char_poly(&m);
            let monomial = poly[..n].iter().all(Rational::is_zero);
            assert_eq!(by_powers, monomial);
            assert_eq!(by_powers, SupportDigraph::of_matrix(&m).is_acyclic());
        }
    }
}

#[test]
fn schep_oracle_matches_independent_enumeration() {
    assert_eq!(set_partitions(5).len(), 52);
    let mut rng = SplitMix64::new(9);
    for n in 1..=4 {
        for _ in 0..10 {
            let m = random_nonnegative(&mut rng, n);
            let reference = partition_infimum(&m);
            assert_eq!(schep_oracle(&m).unwrap(), reference);
            assert_eq!(atomic_diagonal(&m), reference);
        }
    }
}

#[test]
fn minimal_invariant_ideals_match_brute_force() {
    let mut rng = SplitMix64::new(21);
    for n in 1..=6 {
        for _ in 0..20 {
            let m = random_nonnegative(&mut rng, n);
            let all = all_invariant_ideals(std::slice::from_ref(&m)).unwrap();
            let nonzero: Vec<_> = all.iter().filter(|j| !j.is_empty()).collect();
            let minimal: Vec<_> = nonzero
                .iter()
                .filter(|j| !nonzero.iter().any(|k| k.is_subset(j) && k != *j))
                .map(|j| j.to_vec())
                .collect();
            let computed = invariant_ideals(std::slice::from_ref(&m)).unwrap();
            let mut got: Vec<_> = computed.minimal.iter().map(|j| j.to_vec()).collect();
            let mut want = minimal.clone();
            got.sort();
            want.sort();
            assert_eq!(got, want, "{m:?}");
            assert_eq!(computed.irreducible, all.len() == 2);
        }
    }
}

#[test]
fn cyclic_family_has_no_common_flag() {
    for n in 3..=5 {
        let gens = cyclic_generators(n);
        assert!(gens
            .iter()
            .all(|g| triangularizable_by_search(std::slice::from_ref(g))));
        assert!(!triangularizable_by_search(&gens));
        let sum = gens.iter().fold(Matrix::zeros(n), |acc, g| &acc + g);
        let mut p = Matrix::identity(n);
        for _ in 0..n {
            p = mat_mul(&p, &sum);
        }
        assert_eq!(p, Matrix::identity(n));
        let verdict = semigroup_pipeline(&gens, n).unwrap();
        assert!(!verdict.commonly_triangularizable);
    }
}

#[test]
fn framed_closures_match_permutation_search() {
    for seed in 0..40u64 {
        let spec = GenSpec::new(GenMode::SemigroupFramed, 4, seed);
        let gens = latticetri_core::generate::gen_semigroup_framed(&spec, 2).unwrap();
        let closure = generate_closure(&gens, 3).unwrap();
        let elements: Vec<Matrix> = closure.matrices().cloned().collect();
        assert!(triangularizable_by_search(&elements));
        assert!(
            semigroup_pipeline(&gens, 3)
                .unwrap()
                .commonly_triangularizable
        );
    }
}
