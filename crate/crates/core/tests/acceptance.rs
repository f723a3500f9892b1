//! Acceptance suite. Runs without the libtest harness so every criterion prints one
//! PASS/FAIL line; the process exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use latticetri_core::diagonal::{
    atomic_diagonal, bell_number, diagonal_band_projection_check, max_row_sum_norm, schep_oracle,
    voigt_contraction_check,
};
use latticetri_core::exact::{char_poly, is_nilpotent, permute_similarity};
use latticetri_core::fixtures::{
    cyclic_generators, run_cyclic_example, run_signed_pair_example, signed_pair,
};
use latticetri_core::generate::{
    gen_idempotent_with_layout, gen_matrix, gen_semigroup_framed, GenMode, GenSpec,
    IdempotentShape, SplitMix64,
};
use latticetri_core::idempotent::{
    decompose_idempotent, triangularizable_idempotent_check, verify_idempotent,
};
use latticetri_core::lattice::IdealChain;
use latticetri_core::semigroup::{generate_closure, semigroup_pipeline, HypothesisScope};
use latticetri_core::triangular::{criteria_equivalence, gap_blocks, ringrose_check};
use latticetri_core::{Matrix, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn cyclic_example() -> Outcome {
    let start = Instant::now();
    let gens = cyclic_generators(4);
    let outcome = run_cyclic_example(&gens);
    let failed: Vec<_> = outcome.failures().map(|c| c.name.clone()).collect();
    ensure(outcome.passed, || {
        format!("fixture checks failed: {failed:?}")
    })?;

    for g in &gens {
        let c = criteria_equivalence(g).map_err(|e| e.to_string())?;
        ensure(
            c.structural && c.nilpotent_offdiag && c.charpoly_diag,
            || format!("generator fails a criterion: {g:?}"),
        )?;
    }
    let zero_pairs = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| mat_mul(a, b)))
        .filter(|p| (0..4).all(|i| p.get(i, i).is_zero()))
        .count();
    ensure(zero_pairs == 16, || {
        format!("{zero_pairs} of 16 products have zero diagonal")
    })?;
    let s = gens.iter().fold(Matrix::zeros(4), |acc, g| &acc + g);
    let s4 = mat_mul(&mat_mul(&s, &s), &mat_mul(&s, &s));
    ensure(s4 == Matrix::identity(4), || "S^4 != I".into())?;
    let v = semigroup_pipeline(&gens, 4).map_err(|e| e.to_string())?;
    ensure(!v.commonly_triangularizable, || {
        "verdict is triangularizable".into()
    })?;
    let (a, b) = v.counterexample_pair.ok_or("no counterexample pair")?;
    ensure(a.len() <= 4 && b.len() <= 4, || {
        format!("pair too long: {a:?} {b:?}")
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("pair {a:?},{b:?}, {:?}", start.elapsed()))
}

fn signed_pair_example() -> Outcome {
    let start = Instant::now();
    let (a, b) = signed_pair();
    let outcome = run_signed_pair_example(&a, &b);
    let failed: Vec<_> = outcome.failures().map(|c| c.name.clone()).collect();
    ensure(outcome.passed, || {
        format!("fixture checks failed: {failed:?}")
    })?;

    for (x, y) in [(&a, &a), (&b, &b), (&a, &b), (&b, &a)] {
        ensure(mat_mul(x, y).is_zero(), || "a product is nonzero".into())?;
    }
    let m = &a.abs() + &b;
    ensure(atomic_diagonal(&m).is_zero(), || "D(|A| + B) != 0".into())?;
    let expected = vec![r(0, 1), r(0, 1), r(-4, 1), r(0, 1), r(1, 1)];
    ensure(leibniz_char_poly(&m) == expected, || {
        "expansion differs from x^4 - 4x^2".into()
    })?;
    ensure(char_poly(&m).coefficients() == expected.as_slice(), || {
        format!("char poly {}", char_poly(&m))
    })?;
    ensure(!is_nilpotent(&m) && !nilpotent_by_powers(&m), || {
        "|A| + B is nilpotent".into()
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "char poly {}, {:?}",
        char_poly(&m),
        start.elapsed()
    ))
}

fn criteria_equivalence_sweep() -> Outcome {
    let start = Instant::now();
    let mut tri = 0;
    let count = 1200u64;
    for i in 0..count {
        let n = 2 + (i % 5) as usize;
        let mode = if i % 2 == 0 {
            GenMode::Raw
        } else {
            GenMode::Triangularizable
        };
        let density = r(1 + (i % 4) as i64, 5);
        let m = gen_matrix(&GenSpec::new(mode, n, 1000 + i).with_density(density))
            .map_err(|e| e.to_string())?;
        let c = criteria_equivalence(&m).map_err(|e| format!("seed {}: {e}", 1000 + i))?;
        ensure(
            c.structural == c.nilpotent_offdiag && c.structural == c.charpoly_diag,
            || format!("disagreement on {m:?}"),
        )?;
        if mode == GenMode::Triangularizable {
            ensure(c.structural, || {
                format!("constructed instance rejected: {m:?}")
            })?;
        }
        tri += c.structural as usize;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{count} instances, {tri} triangularizable, {:?}",
        start.elapsed()
    ))
}

fn schep_sweep() -> Outcome {
    let start = Instant::now();
    ensure(
        bell_number(5) == 52 && set_partitions(5).len() == 52,
        || "Bell(5) != 52".into(),
    )?;
    let mut rng = SplitMix64::new(4242);
    let count = 600;
    for i in 0..count {
        let n = 1 + i % 5;
        let m = random_nonnegative(&mut rng, n);
        let d = atomic_diagonal(&m);
        ensure(schep_oracle(&m).map_err(|e| e.to_string())? == d, || {
            format!("{m:?}")
        })?;
        if n <= 3 {
            ensure(partition_infimum(&m) == d, || {
                format!("reference differs on {m:?}")
            })?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{count} instances, {:?}", start.elapsed()))
}

fn diagonal_properties() -> Outcome {
    let mut rng = SplitMix64::new(55);
    let count = 500;
    for i in 0..count {
        let m = random_nonnegative(&mut rng, 1 + i % 6);
        let d = atomic_diagonal(&m);
        let v = voigt_contraction_check(&m);
        ensure(
            v.holds && max_row_sum_norm(&d) <= max_row_sum_norm(&m),
            || format!("contraction fails on {m:?}"),
        )?;
        ensure(atomic_diagonal(&d) == d, || "D is not idempotent".into())?;
        ensure(d.is_nonnegative() && (&m - &d).is_nonnegative(), || {
            "0 <= D(m) <= m fails".into()
        })?;
        ensure(d.trace() == m.trace(), || "trace changed".into())?;
        ensure(diagonal_band_projection_check(&m), || {
            "D is not linear".into()
        })?;
    }
    Ok(format!("{count} instances"))
}

/// Block upper triangular in a random partition of `0..n` into consecutive blocks,
/// then relabelled by a random permutation. Returns the matrix and the relabelled
/// block parts.
fn block_triangular(rng: &mut SplitMix64, n: usize) -> (Matrix, Vec<Vec<usize>>) {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = 1 + rng.below(left.min(3) as u64) as usize;
        sizes.push(s);
        left -= s;
    }
    let mut block_of = Vec::new();
    for (b, &s) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, s));
    }
    let mut m = random_nonnegative(rng, n);
    for i in 0..n {
        for j in 0..n {
            if block_of[i] > block_of[j] {
                m.set(i, j, Rational::zero());
            }
        }
    }
    let p = rng.permutation(n);
    let relabelled = permute_similarity(&m, &p).unwrap();
    let parts = (0..sizes.len())
        .map(|b| {
            (0..n)
                .filter(|&i| block_of[i] == b)
                .map(|i| p.image(i))
                .collect()
        })
        .collect();
    (relabelled, parts)
}

fn ringrose_sweep() -> Outcome {
    let mut rng = SplitMix64::new(909);
    let count = 240;
    for i in 0..count {
        let n = 2 + i % 5;
        let (m, parts) = block_triangular(&mut rng, n);
        let chain = IdealChain::from_parts(n, &parts).map_err(|e| e.to_string())?;
        ensure(chain.is_invariant_under(&m), || {
            format!("chain not invariant for {m:?}")
        })?;
        ensure(
            ringrose_check(&m, &chain).map_err(|e| e.to_string())?,
            || format!("identity fails on {m:?}"),
        )?;
        let blocks: Vec<Vec<Rational>> = parts
            .iter()
            .map(|p| {
                let mut idx = p.clone();
                idx.sort();
                leibniz_char_poly(&m.principal(&idx))
            })
            .collect();
        ensure(poly_product(&blocks) == leibniz_char_poly(&m), || {
            format!("reference product differs on {m:?}")
        })?;
        let computed = gap_blocks(&m, &chain).map_err(|e| e.to_string())?;
        ensure(computed.len() == parts.len(), || "gap count differs".into())?;
    }
    Ok(format!("{count} instances"))
}

fn idempotent_round_trip() -> Outcome {
    let count = 240u64;
    let mut q_identity = 0;
    for i in 0..count {
        let spec = if i % 3 == 0 {
            let k = 1 + (i % 4) as usize;
            GenSpec::new(GenMode::Idempotent, 0, 500 + i).with_shape(IdempotentShape {
                kernel: (i % 3) as usize,
                parts: vec![1; k],
                tail: (i % 2) as usize,
            })
        } else {
            GenSpec::new(GenMode::Idempotent, 2 + (i % 6) as usize, 500 + i)
        };
        let g = gen_idempotent_with_layout(&spec).map_err(|e| e.to_string())?;
        ensure(verify_idempotent(&g.matrix), || {
            format!("not idempotent: {:?}", g.matrix)
        })?;
        ensure(mat_mul(&g.matrix, &g.matrix) == g.matrix, || {
            "P^2 != P".into()
        })?;
        let d = decompose_idempotent(&g.matrix).map_err(|e| e.to_string())?;
        ensure(d.b1 == g.b1 && d.b2 == g.b2 && d.b3 == g.b3, || {
            format!("blocks differ for seed {}", spec.seed)
        })?;
        let mut got: Vec<_> = d.rank_one_parts.iter().map(|p| p.ideal.to_vec()).collect();
        let mut want: Vec<_> = g.parts.iter().map(|p| p.to_vec()).collect();
        got.sort();
        want.sort();
        ensure(got == want, || format!("parts {got:?} vs {want:?}"))?;
        ensure(d.rank == g.matrix.rank(), || "rank differs".into())?;
        if triangularizable_by_search(std::slice::from_ref(&g.matrix)) {
            let check = triangularizable_idempotent_check(&g.matrix).map_err(|e| e.to_string())?;
            ensure(check == Some(true), || {
                format!("q is not the identity for seed {}", spec.seed)
            })?;
            q_identity += 1;
        }
    }
    ensure(q_identity > 0, || {
        "no triangularizable idempotent sampled".into()
    })?;
    Ok(format!(
        "{count} instances, {q_identity} triangularizable with q = I"
    ))
}

fn framed_pipeline() -> Outcome {
    let count = 220u64;
    let mut complete = 0;
    for i in 0..count {
        let n = 2 + (i % 4) as usize;
        let k = 1 + (i % 3) as usize;
        let spec = GenSpec::new(GenMode::SemigroupFramed, n, 7000 + i).with_density(r(1, 3));
        let gens = gen_semigroup_framed(&spec, k).map_err(|e| e.to_string())?;
        let v = semigroup_pipeline(&gens, 3).map_err(|e| format!("seed {}: {e}", spec.seed))?;
        ensure(v.diag_condition, || {
            format!("diagonal condition fails, seed {}", spec.seed)
        })?;
        ensure(v.commonly_triangularizable, || {
            format!("no common flag, seed {}", spec.seed)
        })?;
        let p = v.permutation.ok_or("no permutation returned")?;
        for g in &gens {
            let t = permute_similarity(g, &p).map_err(|e| e.to_string())?;
            ensure(t.is_upper_triangular(), || {
                format!("not upper triangular: {t:?}")
            })?;
        }
        let closure = generate_closure(&gens, 3).map_err(|e| e.to_string())?;
        for e in &closure.elements {
            let t = permute_similarity(&e.matrix, &p).map_err(|e| e.to_string())?;
            ensure(t.is_upper_triangular(), || {
                format!("closure word {:?} not triangular", e.word)
            })?;
        }
        complete += (v.hypothesis_scope == HypothesisScope::CompleteClosure) as usize;
    }
    Ok(format!(
        "{count} generator sets, {complete} complete closures"
    ))
}

fn product_char_polys() -> Outcome {
    let mut rng = SplitMix64::new(31337);
    let count = 600;
    for i in 0..count {
        let n = 1 + i % 6;
        let s = random_nonnegative(&mut rng, n);
        let t = random_nonnegative(&mut rng, n);
        let st = mat_mul(&s, &t);
        let ts = mat_mul(&t, &s);
        ensure(char_poly(&st) == char_poly(&ts), || {
            format!("differs for {s:?}, {t:?}")
        })?;
        if n <= 4 {
            ensure(leibniz_char_poly(&st) == leibniz_char_poly(&ts), || {
                "reference differs".into()
            })?;
        }
    }
    Ok(format!("{count} pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("cyclic rank-one nilpotents fixture", cyclic_example),
        ("signed square-zero pair fixture", signed_pair_example),
        ("criteria (a), (b), (c) agree", criteria_equivalence_sweep),
        ("partition infimum equals atomic diagonal", schep_sweep),
        (
            "contraction and band-projection properties",
            diagonal_properties,
        ),
        ("char poly factors over chain gaps", ringrose_sweep),
        ("idempotent round trip", idempotent_round_trip),
        ("framed semigroup pipeline", framed_pipeline),
        ("char_poly(ST) = char_poly(TS)", product_char_polys),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail})", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {}: {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
