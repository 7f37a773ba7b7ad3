//! Polynomials with nonnegative integer coefficients, used as census and
//! length bounds. Nonnegative coefficients make them monotone on `n >= 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// `c0 + c1 n + c2 n^2 + ...`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<u64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Poly { coeffs }
    }

    pub fn constant(c: u64) -> Self {
        Poly::new(vec![c])
    }

    /// `n + c`
    pub fn linear(c: u64) -> Self {
        Poly::new(vec![c, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Saturates at `u128::MAX`.
    pub fn eval(&self, n: u128) -> u128 {
        self.coeffs.iter().rev().fold(0u128, |acc, &c| {
            acc.saturating_mul(n).saturating_add(c as u128)
        })
    }

    /// Evaluation clamped into `usize`, for use as a length or count bound.
    pub fn eval_usize(&self, n: usize) -> usize {
        usize::try_from(self.eval(n as u128)).unwrap_or(usize::MAX)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && !(i == 0 && first) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("n")?,
                (1, _) => write!(f, "{c}n")?,
                (_, 1) => write!(f, "n^{i}")?,
                _ => write!(f, "{c}n^{i}")?,
            }
        }
        Ok(())
    }
}

/// A bivariate bound `sum c * n'^a * m^b`, for bounds indexed by formula
/// size and field degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly2 {
    /// `(coefficient, exponent of n', exponent of m)`
    terms: Vec<(u64, u32, u32)>,
}

impl Poly2 {
    pub fn new(terms: impl Into<Vec<(u64, u32, u32)>>) -> Self {
        Poly2 {
            terms: terms.into(),
        }
    }

    pub fn constant(c: u64) -> Self {
        Poly2::new(vec![(c, 0, 0)])
    }

    pub fn terms(&self) -> &[(u64, u32, u32)] {
        &self.terms
    }

    pub fn eval(&self, n_prime: u128, m: u128) -> u128 {
        self.terms.iter().fold(0u128, |acc, &(c, a, b)| {
            let term = (c as u128)
                .saturating_mul(n_prime.saturating_pow(a))
                .saturating_mul(m.saturating_pow(b));
            acc.saturating_add(term)
        })
    }
}
