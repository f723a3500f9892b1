use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{Matrix, Rational};

/// Monic characteristic polynomial `det(xI - M)`.
///
/// `coefficients[k]` is the coefficient of `x^k`; the vector has length `degree + 1`
/// and its last entry is one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coefficients: Vec<Rational>,
}

impl CharPoly {
    /// Fails unless the leading coefficient is one.
    pub fn from_coefficients(coefficients: Vec<Rational>) -> Option<Self> {
        match coefficients.last() {
            Some(c) if c.is_one() => Some(CharPoly { coefficients }),
            _ => None,
        }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coefficients = vec![Rational::zero(); n + 1];
        coefficients[n] = Rational::one();
        CharPoly { coefficients }
    }

    /// `(x - r_1)(x - r_2)...`
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots.into_iter().fold(CharPoly::monomial(0), |acc, r| {
            acc.times(&CharPoly {
                coefficients: vec![-r, Rational::one()],
            })
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> &Rational {
        &self.coefficients[k]
    }

    pub fn times(&self, other: &CharPoly) -> CharPoly {
        let mut out =
            vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        CharPoly { coefficients: out }
    }

    pub fn product<'a>(polys: impl IntoIterator<Item = &'a CharPoly>) -> CharPoly {
        polys
            .into_iter()
            .fold(CharPoly::monomial(0), |acc, p| acc.times(p))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Largest `k` such that `(x - lam)^k` divides the polynomial.
    pub fn root_multiplicity(&self, lam: &Rational) -> usize {
        let mut current = self.coefficients.clone();
        let mut k = 0;
        while current.len() > 1 {
            let (quotient, remainder) = divide_by_linear(&current, lam);
            if !remainder.is_zero() {
                break;
            }
            current = quotient;
            k += 1;
        }
        k
    }

    pub fn is_monomial(&self) -> bool {
        self.coefficients[..self.degree()]
            .iter()
            .all(Rational::is_zero)
    }
}

/// Synthetic division of an ascending coefficient list by `(x - lam)`.
fn divide_by_linear(coeffs: &[Rational], lam: &Rational) -> (Vec<Rational>, Rational) {
    let d = coeffs.len() - 1;
    let mut quotient = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for k in (0..=d).rev() {
        let v = &coeffs[k] + &(&carry * lam);
        if k == 0 {
            return (quotient, v);
        }
        quotient[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

pub fn root_multiplicity(p: &CharPoly, lam: &Rational) -> usize {
    p.root_multiplicity(lam)
}

/// `det(xI - m)` by Berkowitz's division-free recurrence.
///
/// Each leading principal submatrix `A_{r+1} = [[A_r, s], [q, a]]` extends the
/// coefficient vector by a lower-triangular Toeplitz matrix whose first column is
/// `1, -a, -q s, -q A_r s, ..., -q A_r^{r-1} s`.
pub fn char_poly(m: &Matrix) -> CharPoly {
    let n = m.n();
    // descending coefficients of the current leading block
    let mut v = vec![Rational::one()];
    for r in 0..n {
        let a = m.get(r, r);
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(Rational::one());
        toeplitz.push(-a);
        // w = A_r^k s, starting from s = column r above the diagonal
        let mut w: Vec<Rational> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for k in 0..r {
            let qw: Rational = (0..r).map(|j| m.get(r, j) * &w[j]).sum();
            toeplitz.push(-qw);
            if k + 1 < r {
                w = (0..r)
                    .map(|i| (0..r).map(|j| m.get(i, j) * &w[j]).sum())
                    .collect();
            }
        }
        let mut next = vec![Rational::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            let lo = i.saturating_sub(r + 1);
            for (j, vj) in v.iter().enumerate().take(i + 1).skip(lo) {
                if !vj.is_zero() {
                    *slot += &(&toeplitz[i - j] * vj);
                }
            }
        }
        v = next;
    }
    v.reverse();
    CharPoly { coefficients: v }
}

/// `m^n = 0` where `n` is the dimension.
pub fn is_nilpotent(m: &Matrix) -> bool {
    let n = m.n();
    // nilpotency index never exceeds n, so any power >= n decides it
    let mut p = m.clone();
    let mut e = 1usize;
    while e < n {
        if p.is_zero() {
            return true;
        }
        p = &p * &p;
        e *= 2;
    }
    p.is_zero()
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..self.coefficients.len()).rev() {
            let c = &self.coefficients[k];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let show_coef = !mag.is_one() || k == 0;
            if show_coef {
                write!(f, "{mag}")?;
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CharPoly", 2)?;
        s.serialize_field("coefficients", &self.coefficients)?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}
