//! Monomials as exponent vectors, and graded enumeration of monomials.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `x_1^{e_1} ⋯ x_n^{e_n}`; variables are 1-based in display and labels,
/// 0-based in the exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// `x_i^e`, with `i` 1-based.
    pub fn var_pow(n: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; n];
        exps[i - 1] = e;
        Monomial { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent of `x_i`, `i` 1-based.
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i - 1]
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Bitmask of variables with positive exponent.
    pub fn support(&self) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.n(), other.n());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self` divides `other` and the quotient involves every variable of `other`.
    pub fn strictly_divides(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| if b == 0 { a == 0 } else { a < b })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// Lcm of a nonempty list.
    pub fn lcm_all<'a, I: IntoIterator<Item = &'a Monomial>>(n: usize, ms: I) -> Monomial {
        ms.into_iter().fold(Monomial::one(n), |acc, m| acc.lcm(m))
    }

    /// Parse `x1^3*x2`, `1`, `x2*x3^2`.
    pub fn parse(n: usize, s: &str) -> Result<Monomial> {
        let mut exps = vec![0u32; n];
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial { exps });
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let rest = factor
                .strip_prefix('x')
                .ok_or_else(|| Error::Validation(format!("bad monomial factor {factor:?}")))?;
            let (var, e) = match rest.split_once('^') {
                Some((v, e)) => (v, e),
                None => (rest, "1"),
            };
            let var: usize = var
                .parse()
                .map_err(|_| Error::Validation(format!("bad variable in {factor:?}")))?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::Validation(format!("bad exponent in {factor:?}")))?;
            if var == 0 || var > n {
                return Err(Error::Validation(format!("variable x{var} out of range 1..={n}")));
            }
            exps[var - 1] += e;
        }
        Ok(Monomial { exps })
    }

    /// Degree first, then larger exponent vectors (lexicographically) first.
    pub fn graded_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Number of monomials of degree `d` in `n` variables, saturating.
pub fn count_of_degree(n: usize, d: u64) -> u128 {
    if n == 0 {
        return u128::from(d == 0);
    }
    // C(d + n - 1, n - 1)
    let k = (n - 1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul(d as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// All exponent vectors of degree `d` in `n` variables, lexicographically
/// decreasing (so `x_1^d` comes first).
pub fn exponents_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, d, &mut out);
    out
}

fn fill(cur: &mut [u32], pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = left;
        out.push(cur.to_vec());
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Exponent vectors of degree `d` whose support lies in the variable mask.
pub fn exponents_of_degree_in(n: usize, mask: u32, d: u32) -> Vec<Vec<u32>> {
    let vars: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    exponents_of_degree(vars.len(), d)
        .into_iter()
        .map(|small| {
            let mut e = vec![0u32; n];
            for (k, &v) in vars.iter().enumerate() {
                e[v] = small[k];
            }
            e
        })
        .collect()
}
