//! Reproducible instances for property suites and the CLI.
//!
//! All randomness comes from [`SplitMix64`], fully specified below so the same seed
//! yields the same instance in any implementation:
//!
//! ```text
//! state <- state + 0x9E3779B97F4A7C15            (wrapping)
//! z <- state
//! z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z <- (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! output z ^ (z >> 31)
//! ```
//!
//! `below(b)` draws `z` repeatedly and rejects `z >= 2^64 - (2^64 mod b)`, then
//! returns `z mod b`. Derived draws, in the order they consume the stream:
//!
//! * Bernoulli with rational probability `p/q`: `below(q) < p`.
//! * Value in `[lo, hi]`: denominator `d = 1 + below(max_denominator)`, then a
//!   numerator uniform over `ceil(lo d) ..= floor(hi d)` (zero excluded for
//!   positive draws), giving `numerator / d`.
//! * Permutation: Fisher-Yates over the order `0..n`, for `i` from `n-1` down to `1`
//!   swapping positions `i` and `below(i+1)`; the result lists old coordinates by
//!   new position.

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{permute_similarity, Matrix, Permutation, Rational};
use crate::idempotent::verify_idempotent;
use crate::lattice::CoordIdeal;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let z = self.next_u64();
            if z <= zone {
                return z % bound;
            }
        }
    }

    pub fn bernoulli(&mut self, p: &Rational) -> bool {
        let (num, den) = (p.numer().to_u64(), p.denom().to_u64());
        match (num, den) {
            (Some(num), Some(den)) => self.below(den) < num,
            _ => p >= &1,
        }
    }

    /// Old coordinates listed by new position.
    pub fn shuffled_order(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        order
    }

    pub fn permutation(&mut self, n: usize) -> Permutation {
        Permutation::from_order(&self.shuffled_order(n)).expect("shuffle is a bijection")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    Raw,
    Triangularizable,
    Idempotent,
    SemigroupFramed,
}

impl std::str::FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(GenMode::Raw),
            "triangularizable" => Ok(GenMode::Triangularizable),
            "idempotent" => Ok(GenMode::Idempotent),
            "semigroup-framed" => Ok(GenMode::SemigroupFramed),
            other => Err(Error::InvalidSpec(format!("unknown mode {other:?}"))),
        }
    }
}

/// Block sizes for generated idempotents: `kernel` coordinates in `B1`, one
/// rank-one part per entry of `parts`, and `tail` coordinates in `B3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentShape {
    pub kernel: usize,
    pub parts: Vec<usize>,
    pub tail: usize,
}

impl IdempotentShape {
    pub fn dimension(&self) -> usize {
        self.kernel + self.parts.iter().sum::<usize>() + self.tail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub density: Rational,
    pub value_range: (Rational, Rational),
    pub max_denominator: u32,
    pub mode: GenMode,
    pub seed: u64,
    /// Only read in idempotent mode; drawn from the seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<IdempotentShape>,
}

impl GenSpec {
    /// Density 1/2, values in `[0, 3]` with denominators up to 4.
    pub fn new(mode: GenMode, n: usize, seed: u64) -> Self {
        GenSpec {
            n,
            density: Rational::new(1, 2).expect("literal"),
            value_range: (Rational::zero(), Rational::from_integer(3)),
            max_denominator: 4,
            mode,
            seed,
            shape: None,
        }
    }

    pub fn with_density(mut self, density: Rational) -> Self {
        self.density = density;
        self
    }

    pub fn with_range(mut self, lo: Rational, hi: Rational) -> Self {
        self.value_range = (lo, hi);
        self
    }

    pub fn with_shape(mut self, shape: IdempotentShape) -> Self {
        self.n = shape.dimension();
        self.shape = Some(shape);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = &self.value_range;
        let fail = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        if self.n == 0 {
            return fail("n must be at least 1");
        }
        if self.density.is_negative() || self.density > 1 {
            return fail("density must lie in [0, 1]");
        }
        if lo.is_negative() || lo > hi {
            return fail("value range must satisfy 0 <= lo <= hi");
        }
        if !hi.is_positive() {
            return fail("value range must contain a positive value");
        }
        if self.max_denominator == 0 {
            return fail("max_denominator must be at least 1");
        }
        if let Some(shape) = &self.shape {
            if shape.dimension() != self.n {
                return fail("idempotent shape does not add up to n");
            }
            if shape.parts.contains(&0) {
                return fail("rank-one parts must be nonempty");
            }
            if shape.parts.is_empty() && shape.tail > 0 {
                return fail("a B3 block requires at least one rank-one part");
            }
        }
        Ok(())
    }
}

fn ceil_div(a: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = (a / d, a % d);
    if r > BigInt::from(0) {
        q + 1
    } else {
        q
    }
}

struct Sampler<'a> {
    rng: SplitMix64,
    spec: &'a GenSpec,
}

impl Sampler<'_> {
    fn value(&mut self, positive: bool) -> Rational {
        let (lo, hi) = &self.spec.value_range;
        loop {
            let d = 1 + self.rng.below(u64::from(self.spec.max_denominator));
            let dd = BigInt::from(d);
            let mut low = ceil_div(&(lo.numer() * &dd), lo.denom());
            let high = (hi.numer() * &dd) / hi.denom();
            if positive && low < BigInt::from(1) {
                low = BigInt::from(1);
            }
            if low > high {
                continue;
            }
            let span = (&high - &low + 1u32).to_u64().unwrap_or(u64::MAX);
            let numer = low + self.rng.below(span);
            return Rational::from_big(numer, dd).expect("positive denominator");
        }
    }

    /// Present with probability `density`, then a positive value.
    fn sparse_entry(&mut self) -> Rational {
        if self.rng.bernoulli(&self.spec.density.clone()) {
            self.value(true)
        } else {
            Rational::zero()
        }
    }

    fn upper_triangular(&mut self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, self.sparse_entry());
            }
        }
        m
    }

    fn raw(&mut self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.sparse_entry());
            }
        }
        m
    }
}

pub fn gen_matrix(spec: &GenSpec) -> Result<Matrix> {
    spec.validate()?;
    match spec.mode {
        GenMode::Raw => {
            let mut s = Sampler {
                rng: SplitMix64::new(spec.seed),
                spec,
            };
            Ok(s.raw(spec.n))
        }
        GenMode::Triangularizable => {
            let mut s = Sampler {
                rng: SplitMix64::new(spec.seed),
                spec,
            };
            let upper = s.upper_triangular(spec.n);
            let p = s.rng.permutation(spec.n);
            permute_similarity(&upper, &p)
        }
        GenMode::Idempotent => gen_idempotent(spec),
        GenMode::SemigroupFramed => Ok(gen_semigroup_framed(spec, 1)?.remove(0)),
    }
}

/// `k` upper-triangular nonnegative matrices conjugated by one shared permutation.
pub fn gen_semigroup_framed(spec: &GenSpec, k: usize) -> Result<Vec<Matrix>> {
    spec.validate()?;
    if k == 0 {
        return Err(Error::InvalidSpec("need at least one generator".into()));
    }
    let mut s = Sampler {
        rng: SplitMix64::new(spec.seed),
        spec,
    };
    let p = s.rng.permutation(spec.n);
    (0..k)
        .map(|_| {
            let upper = s.upper_triangular(spec.n);
            permute_similarity(&upper, &p)
        })
        .collect()
}

/// A generated idempotent together with the block structure it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedIdempotent {
    pub matrix: Matrix,
    pub b1: CoordIdeal,
    pub b2: CoordIdeal,
    pub b3: CoordIdeal,
    pub parts: Vec<CoordIdeal>,
    pub permutation: Permutation,
}

/// Assembles `[X; I; 0] Q [0 I Y]` in block order `B1, B2, B3` from `X0` (rows of
/// `B1`), rank-one parts `(x_j, phi_j)` and `Y0` (columns of `B3`), taking `X = X0 Q`
/// and `Y = Q Y0`, and verifies the result is idempotent.
pub fn assemble_idempotent(
    x0: &[Vec<Rational>],
    parts: &[(Vec<Rational>, Vec<Rational>)],
    y0: &[Vec<Rational>],
) -> Result<Matrix> {
    let r: usize = parts.iter().map(|(x, _)| x.len()).sum();
    let k1 = x0.len();
    let k3 = y0.first().map_or(0, Vec::len);
    if y0.len() != r && !(r == 0 && y0.is_empty()) {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: y0.len(),
        });
    }
    if let Some(bad) = x0.iter().find(|row| row.len() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: bad.len(),
        });
    }
    let mut q = vec![vec![Rational::zero(); r]; r];
    let mut offset = 0;
    for (x, phi) in parts {
        if x.len() != phi.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: phi.len(),
            });
        }
        for (a, xa) in x.iter().enumerate() {
            for (b, pb) in phi.iter().enumerate() {
                q[offset + a][offset + b] = xa * pb;
            }
        }
        offset += x.len();
    }
    let mul = |a: &[Vec<Rational>], b: &[Vec<Rational>], cols: usize| -> Vec<Vec<Rational>> {
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| row.iter().zip(b).map(|(v, brow)| v * &brow[j]).sum())
                    .collect()
            })
            .collect()
    };
    let x = mul(x0, &q, r);
    let y = mul(&q, y0, k3);
    let z = mul(&x, &y, k3);

    let n = k1 + r + k3;
    let mut m = Matrix::zeros(n);
    for i in 0..k1 {
        for j in 0..r {
            m.set(i, k1 + j, x[i][j].clone());
        }
        for j in 0..k3 {
            m.set(i, k1 + r + j, z[i][j].clone());
        }
    }
    for i in 0..r {
        for j in 0..r {
            m.set(k1 + i, k1 + j, q[i][j].clone());
        }
        for j in 0..k3 {
            m.set(k1 + i, k1 + r + j, y[i][j].clone());
        }
    }
    if !verify_idempotent(&m) {
        return Err(Error::Internal("assembled matrix is not idempotent".into()));
    }
    Ok(m)
}

pub fn gen_idempotent(spec: &GenSpec) -> Result<Matrix> {
    Ok(gen_idempotent_with_layout(spec)?.matrix)
}

/// Random idempotent in canonical block form, then conjugated by a random
/// permutation. `Y0` gets a positive entry in every column so `B3` coordinates stay
/// outside the absolute kernel.
pub fn gen_idempotent_with_layout(spec: &GenSpec) -> Result<GeneratedIdempotent> {
    spec.validate()?;
    let mut s = Sampler {
        rng: SplitMix64::new(spec.seed),
        spec,
    };
    let shape = match &spec.shape {
        Some(shape) => shape.clone(),
        None => random_shape(&mut s.rng, spec.n),
    };
    let r: usize = shape.parts.iter().sum();

    let parts: Vec<(Vec<Rational>, Vec<Rational>)> = shape
        .parts
        .iter()
        .map(|&size| {
            let x: Vec<Rational> = (0..size).map(|_| s.value(true)).collect();
            let raw_phi: Vec<Rational> = (0..size).map(|_| s.value(true)).collect();
            let pairing: Rational = x.iter().zip(&raw_phi).map(|(a, b)| a * b).sum();
            let phi = raw_phi.iter().map(|v| v / &pairing).collect();
            (x, phi)
        })
        .collect();
    let x0: Vec<Vec<Rational>> = (0..shape.kernel)
        .map(|_| (0..r).map(|_| s.sparse_entry()).collect())
        .collect();
    let mut y0: Vec<Vec<Rational>> = (0..r)
        .map(|_| (0..shape.tail).map(|_| s.sparse_entry()).collect())
        .collect();
    for j in 0..shape.tail {
        if y0.iter().all(|row| row[j].is_zero()) {
            let i = s.rng.below(r as u64) as usize;
            y0[i][j] = s.value(true);
        }
    }
    let canonical = assemble_idempotent(&x0, &parts, &y0)?;
    let order = s.rng.shuffled_order(spec.n);
    let permutation = Permutation::from_order(&order)?;
    let matrix = permute_similarity(&canonical, &permutation)?;

    let map = |range: std::ops::Range<usize>| {
        CoordIdeal::new(spec.n, range.map(|c| permutation.image(c)))
    };
    let k1 = shape.kernel;
    let mut parts_ideals = Vec::new();
    let mut offset = k1;
    for &size in &shape.parts {
        parts_ideals.push(map(offset..offset + size)?);
        offset += size;
    }
    Ok(GeneratedIdempotent {
        matrix,
        b1: map(0..k1)?,
        b2: map(k1..k1 + r)?,
        b3: map(k1 + r..spec.n)?,
        parts: parts_ideals,
        permutation,
    })
}

fn random_shape(rng: &mut SplitMix64, n: usize) -> IdempotentShape {
    // at least one coordinate in B2
    let kernel = rng.below(n as u64) as usize;
    let tail = rng.below((n - kernel) as u64) as usize;
    let mut left = n - kernel - tail;
    let mut parts = Vec::new();
    while left > 0 {
        let size = 1 + rng.below(left.min(3) as u64) as usize;
        parts.push(size);
        left -= size;
    }
    IdempotentShape {
        kernel,
        parts,
        tail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 of the reference generator
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(7);
        for bound in [1u64, 2, 3, 10, 1 << 40] {
            for _ in 0..100 {
                assert!(rng.below(bound) < bound);
            }
        }
    }

    #[test]
    fn one_by_one_is_nonnegative() {
        for mode in [GenMode::Raw, GenMode::Triangularizable, GenMode::Idempotent] {
            let m = gen_matrix(&GenSpec::new(mode, 1, 3)).unwrap();
            assert_eq!(m.n(), 1);
            assert!(m.is_nonnegative());
        }
    }

    #[test]
    fn zero_density_gives_zero_matrix() {
        let spec = GenSpec::new(GenMode::Raw, 5, 11).with_density(Rational::zero());
        assert!(gen_matrix(&spec).unwrap().is_zero());
    }

    #[test]
    fn same_seed_same_instance() {
        for mode in [
            GenMode::Raw,
            GenMode::Triangularizable,
            GenMode::Idempotent,
            GenMode::SemigroupFramed,
        ] {
            let spec = GenSpec::new(mode, 5, 42);
            assert_eq!(gen_matrix(&spec).unwrap(), gen_matrix(&spec).unwrap());
        }
        let a = gen_matrix(&GenSpec::new(GenMode::Raw, 5, 1)).unwrap();
        let b = gen_matrix(&GenSpec::new(GenMode::Raw, 5, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn values_respect_range_and_denominator() {
        let spec = GenSpec::new(GenMode::Raw, 6, 5)
            .with_density(Rational::one())
            .with_range(Rational::new(1, 2).unwrap(), Rational::from_integer(2));
        let m = gen_matrix(&spec).unwrap();
        for v in m.entries() {
            assert!(
                v >= &Rational::new(1, 2).unwrap() && v <= &Rational::from_integer(2),
                "{v}"
            );
            assert!(v.denom() <= &BigInt::from(4));
        }
    }

    #[test]
    fn invalid_specs() {
        let base = GenSpec::new(GenMode::Raw, 3, 0);
        assert!(gen_matrix(&GenSpec {
            n: 0,
            ..base.clone()
        })
        .is_err());
        assert!(gen_matrix(&base.clone().with_density(Rational::from_integer(2))).is_err());
        assert!(gen_matrix(
            &base
                .clone()
                .with_range(Rational::from_integer(-1), Rational::one())
        )
        .is_err());
        assert!(gen_matrix(&base.clone().with_range(Rational::zero(), Rational::zero())).is_err());
        assert!(gen_matrix(&GenSpec {
            max_denominator: 0,
            ..base.clone()
        })
        .is_err());
        assert!(gen_semigroup_framed(&base, 0).is_err());
    }

    #[test]
    fn unit_parts_give_identity() {
        let spec = GenSpec::new(GenMode::Idempotent, 4, 9).with_shape(IdempotentShape {
            kernel: 0,
            parts: vec![1, 1, 1, 1],
            tail: 0,
        });
        assert_eq!(gen_idempotent(&spec).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn assemble_three_by_three_example() {
        let one = || vec![Rational::one()];
        let m = assemble_idempotent(&[one()], &[(one(), one())], &[one()]).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[0, 1, 1], &[0, 1, 1], &[0, 0, 0]]));
    }

    #[test]
    fn generated_idempotents_verify() {
        for seed in 0..50 {
            let spec = GenSpec::new(GenMode::Idempotent, 1 + (seed as usize % 7), seed);
            assert!(
                verify_idempotent(&gen_idempotent(&spec).unwrap()),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn framed_generators_share_frame() {
        let spec = GenSpec::new(GenMode::SemigroupFramed, 5, 3);
        let gens = gen_semigroup_framed(&spec, 3).unwrap();
        assert_eq!(gens.len(), 3);
        let zero = gen_semigroup_framed(&spec.clone().with_density(Rational::zero()), 2).unwrap();
        assert!(zero.iter().all(Matrix::is_zero));
    }
}
