use serde::Serialize;

use super::Matrix;

const RELATIVE_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

/// Floating-point estimate of the spectral radius of `|m|`. Reporting only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralRadiusEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Power iteration on `|m| + I`, started from the all-ones vector.
///
/// The unit shift makes the Perron root strictly dominant on every irreducible
/// block, so periodic patterns such as permutation matrices still converge. The
/// estimate is `r(|m| + I) - 1`.
pub fn spectral_radius_estimate(m: &Matrix) -> SpectralRadiusEstimate {
    let n = m.n();
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = m.get(i, j).abs().to_f64();
        }
        a[i * n + i] += 1.0;
    }
    let mut x = vec![1.0f64; n];
    let mut previous = f64::NAN;
    for iter in 1..=MAX_ITERATIONS {
        let y: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
            .collect();
        let norm = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if norm == 0.0 || !norm.is_finite() {
            return SpectralRadiusEstimate {
                value: (norm - 1.0).max(0.0),
                converged: false,
                iterations: iter,
            };
        }
        x = y.into_iter().map(|v| v / norm).collect();
        if (norm - previous).abs() <= RELATIVE_TOLERANCE * norm {
            return SpectralRadiusEstimate {
                value: (norm - 1.0).max(0.0),
                converged: true,
                iterations: iter,
            };
        }
        previous = norm;
    }
    SpectralRadiusEstimate {
        value: (previous - 1.0).max(0.0),
        converged: false,
        iterations: MAX_ITERATIONS,
    }
}
