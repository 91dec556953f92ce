use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense arbitrary-precision integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl BigIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigIntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(BigIntMatrix { rows, cols, entries })
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Ok(BigIntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn nested(&self) -> Vec<Vec<BigInt>> {
        self.to_nested()
    }
}

impl fmt::Display for BigIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Determinant by Bareiss fraction-free elimination. The pivot in each column is
/// the first nonzero entry at or below the diagonal.
pub fn determinant(m: &BigIntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.nested();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Rank over the rationals by fraction-free row echelon reduction.
pub fn exact_rank(m: &BigIntMatrix) -> usize {
    let mut a = m.nested();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Invariant factors `d_1 | d_2 | … | d_n` of a nonsingular square matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Factors different from 1, i.e. the cyclic decomposition of the cokernel.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith normal form by repeated gcd reduction with smallest-entry pivoting.
pub fn smith_normal_form(m: &BigIntMatrix) -> Result<SmithForm> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "Smith form of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if determinant(m)?.is_zero() {
        return Err(Error::Singular("Smith form requires a nonsingular matrix".into()));
    }
    let n = m.rows;
    let mut a = m.nested();
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.expect("nonsingular matrix has a nonzero entry");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..n {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for i in t..n {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match offender {
                Some((i, _)) => {
                    for j in t..n {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
    }
    let invariant_factors = (0..n).map(|i| a[i][i].abs()).collect();
    Ok(SmithForm { invariant_factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = BigInt::from(m[0][c]) * cofactor_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn mat(rows: &[Vec<i64>]) -> BigIntMatrix {
        BigIntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&mat(&[vec![5]])).unwrap(), BigInt::from(5));
        let lg = mat(&[vec![3, -1, -1], vec![-1, 2, -1], vec![-1, -1, 3]]);
        assert_eq!(determinant(&lg).unwrap(), BigInt::from(8));
        assert!(matches!(
            determinant(&mat(&[vec![1, 2]])),
            Err(Error::Dimension(_))
        ));
        // pivot search has to swap
        let m = mat(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(exact_rank(&BigIntMatrix::zeros(3, 3)), 0);
        assert_eq!(exact_rank(&BigIntMatrix::identity(4)), 4);
        assert_eq!(exact_rank(&mat(&[vec![1, 2], vec![2, 4], vec![3, 6]])), 1);
        assert_eq!(exact_rank(&mat(&[vec![0, 0, 1], vec![0, 0, 2], vec![0, 1, 0]])), 2);
    }

    #[test]
    fn smith_examples() {
        let f = smith_normal_form(&mat(&[vec![2, 0], vec![0, 6]])).unwrap();
        assert_eq!(f.invariant_factors, vec![BigInt::from(2), BigInt::from(6)]);
        let f = smith_normal_form(&mat(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(f.invariant_factors, vec![BigInt::from(1), BigInt::from(6)]);
        let lg = mat(&[vec![3, -1, -1], vec![-1, 2, -1], vec![-1, -1, 3]]);
        assert_eq!(smith_normal_form(&lg).unwrap().order(), BigInt::from(8));
        assert!(matches!(
            smith_normal_form(&mat(&[vec![1, 2], vec![2, 4]])),
            Err(Error::Singular(_))
        ));
    }

    fn small_matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
    }

    fn rect_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, c), r)
        })
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor_expansion(m in small_matrix(5)) {
            prop_assert_eq!(determinant(&mat(&m)).unwrap(), cofactor_det(&m));
        }

        #[test]
        fn rank_is_transpose_invariant(m in rect_matrix()) {
            let a = mat(&m);
            prop_assert_eq!(exact_rank(&a), exact_rank(&a.transpose()));
        }

        #[test]
        fn rank_of_square_matches_determinant(m in small_matrix(4)) {
            let a = mat(&m);
            let full = exact_rank(&a) == a.rows();
            prop_assert_eq!(full, !determinant(&a).unwrap().is_zero());
        }

        #[test]
        fn smith_divisibility_and_product(m in small_matrix(4)) {
            let a = mat(&m);
            let det = determinant(&a).unwrap();
            prop_assume!(!det.is_zero());
            let f = smith_normal_form(&a).unwrap();
            for w in f.invariant_factors.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(f.invariant_factors.iter().all(|d| d.is_positive()));
            prop_assert_eq!(f.order(), det.abs());
        }
    }
}
