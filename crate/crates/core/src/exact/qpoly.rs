use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense polynomial in one variable `q` with arbitrary-precision integer
/// coefficients; `coeffs[k]` is the coefficient of `q^k`. Trailing zeros are
/// always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = QPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// `c · q^d`
    pub fn monomial(c: BigInt, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// The q-integer `[s] = 1 + q + … + q^{s-1}`.
    pub fn q_integer(s: usize) -> Self {
        Self::new(vec![BigInt::one(); s])
    }

    /// Sum of `q^d` over the given degrees.
    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for d in degrees {
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigInt::zero());
            }
            coeffs[d] += 1;
        }
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Multiply by `(1-q)^n`.
    pub fn mul_one_minus_q_pow(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..n {
            coeffs.push(BigInt::zero());
            for k in (1..coeffs.len()).rev() {
                let prev = coeffs[k - 1].clone();
                coeffs[k] -= prev;
            }
        }
        Self::new(coeffs)
    }

    /// Exact division by `(1-q)^n`; `None` if the quotient is not a polynomial.
    pub fn div_one_minus_q_pow(&self, n: usize) -> Option<Self> {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..n {
            if coeffs.is_empty() {
                return Some(Self::zero());
            }
            // p = (1-q) s  <=>  s_k = p_0 + … + p_k and the full sum vanishes
            let total: BigInt = coeffs.iter().sum();
            if !total.is_zero() {
                return None;
            }
            for k in 1..coeffs.len() {
                let prev = coeffs[k - 1].clone();
                coeffs[k] += prev;
            }
            coeffs.pop();
        }
        Some(Self::new(coeffs))
    }

    /// Power-series expansion of `self / (1-q)^n` truncated after `q^cap`.
    pub fn series_div_one_minus_q_pow(&self, n: usize, cap: usize) -> Vec<BigInt> {
        let mut coeffs: Vec<BigInt> = (0..=cap).map(|k| self.coeff(k)).collect();
        for _ in 0..n {
            for k in 1..coeffs.len() {
                let prev = coeffs[k - 1].clone();
                coeffs[k] += prev;
            }
        }
        coeffs
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitute `q -> q^k`.
    pub fn inflate(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs[d * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Coefficients as machine integers, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for QPolynomial {
    /// `1+3q+4q^2`, `-q^3`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (d, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "q".to_string(),
                (1, false) => format!("{mag}q"),
                (_, true) => format!("q^{d}"),
                (_, false) => format!("{mag}q^{d}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::new(coeffs)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
