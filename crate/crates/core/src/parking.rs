//! Parking-function variants: G-parking, classical, (k,l), ρ-parking and
//! almost parking functions, plus the alternating-pattern permutation count.

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::QPolynomial;
use crate::graph::Digraph;
use crate::par;

/// Weakly decreasing `ρ_1 ≥ … ≥ ρ_n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeFunction {
    rho: Vec<u32>,
}

impl DegreeFunction {
    pub fn new(rho: Vec<u32>) -> Result<Self> {
        if rho.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Validation(format!("degree function {rho:?} is not weakly decreasing")));
        }
        Ok(DegreeFunction { rho })
    }

    /// `ρ_r = l + k(n-r)`.
    pub fn linear(n: usize, k: u32, l: u32) -> Self {
        DegreeFunction { rho: (1..=n).map(|r| l + k * (n - r) as u32).collect() }
    }

    /// `(n, n-1, …, 1)`.
    pub fn classical(n: usize) -> Self {
        Self::linear(n, 1, 1)
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.rho
    }

    /// `ρ_r` with the conventions `ρ_{n+1} = 0`; `r` is 1-based.
    pub fn at(&self, r: usize) -> u32 {
        if r > self.rho.len() {
            0
        } else {
            self.rho[r - 1]
        }
    }

    /// Consecutive differences all equal `k` or `k+1` for a single `k`.
    pub fn is_almost_linear(&self) -> bool {
        let diffs: Vec<u32> = self.rho.windows(2).map(|w| w[0] - w[1]).collect();
        match (diffs.iter().min(), diffs.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }
}

/// A G-parking vector must pass every nonempty subset test. Vertices are
/// burned greedily: `i` leaves the current set `I` when `b_i < d_I(i)`.
/// Since `d` only grows as `I` shrinks, `b` is G-parking iff everything burns.
pub fn is_g_parking(g: &Digraph, b: &[u32]) -> Result<bool> {
    let n = g.n();
    if b.len() != n {
        return Err(Error::Validation(format!("parking vector has length {}, graph has n = {n}", b.len())));
    }
    Ok(burn(n, |mask, i| (b[i - 1] as u64) < g.d(mask, i)))
}

/// Greedy elimination from the full set: repeatedly drop some `i` with
/// `leaves(I, i)`. Returns whether the set empties.
pub(crate) fn burn(n: usize, leaves: impl Fn(u32, usize) -> bool) -> bool {
    let mut mask: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    while mask != 0 {
        let Some(i) = (1..=n).find(|&i| mask >> (i - 1) & 1 == 1 && leaves(mask, i)) else {
            return false;
        };
        mask &= !(1 << (i - 1));
    }
    true
}

/// Iterate the box `∏ [0, bound_i)` in lexicographic order and keep the
/// points accepted by `keep`.
fn box_filter<F>(bounds: &[u32], limits: &Limits, keep: F) -> Result<Vec<Vec<u32>>>
where
    F: Fn(&[u32]) -> bool + Sync + Send,
{
    let total = bounds.iter().try_fold(1u128, |acc, &b| acc.checked_mul(b as u128)).unwrap_or(u128::MAX);
    if total > limits.max_box {
        return Err(capacity("box size", total, limits.max_box));
    }
    if total == 0 {
        return Ok(Vec::new());
    }
    let total = total as u64;
    let chunk = (total / (4 * par::width() as u64)).clamp(1 << 10, 1 << 16);
    Ok(par::flat_map_chunks(total, chunk, |lo, hi| {
        let mut out = Vec::new();
        let mut point = unrank(bounds, lo);
        for _ in lo..hi {
            if keep(&point) {
                out.push(point.clone());
            }
            advance(bounds, &mut point);
        }
        out
    }))
}

fn unrank(bounds: &[u32], mut idx: u64) -> Vec<u32> {
    let mut p = vec![0u32; bounds.len()];
    for k in (0..bounds.len()).rev() {
        p[k] = (idx % bounds[k] as u64) as u32;
        idx /= bounds[k] as u64;
    }
    p
}

fn advance(bounds: &[u32], p: &mut [u32]) {
    for k in (0..p.len()).rev() {
        p[k] += 1;
        if p[k] < bounds[k] {
            return;
        }
        p[k] = 0;
    }
}

/// All G-parking functions in lexicographic order. Each `b_i < d_{{i}}(i)`.
pub fn enumerate_g_parking(g: &Digraph, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    let n = g.n();
    if n > limits.max_subset_vars {
        return Err(capacity("vertices", n as u128, limits.max_subset_vars as u128));
    }
    let bounds: Vec<u32> = (1..=n)
        .map(|i| u32::try_from(g.d(1 << (i - 1), i)).unwrap_or(u32::MAX))
        .collect();
    box_filter(&bounds, limits, |b| burn(n, |mask, i| (b[i - 1] as u64) < g.d(mask, i)))
}

/// Whether the increasing rearrangement `c` of `b` satisfies `c_i < ρ_{n+1-i}`.
pub fn is_rho_parking(rho: &DegreeFunction, b: &[u32]) -> bool {
    let n = rho.n();
    if b.len() != n {
        return false;
    }
    let mut c = b.to_vec();
    c.sort_unstable();
    (1..=n).all(|i| c[i - 1] < rho.at(n + 1 - i))
}

/// Classical parking functions: sorted `c_i < i`.
pub fn is_classical_parking(b: &[u32]) -> bool {
    is_rho_parking(&DegreeFunction::classical(b.len()), b)
}

pub fn enumerate_rho_parking(rho: &DegreeFunction, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    let n = rho.n();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let bounds = vec![rho.at(1); n];
    box_filter(&bounds, limits, |b| is_rho_parking(rho, b))
}

/// Parking functions of `K_{n+1}^{k,l}`, i.e. ρ-parking for `ρ_r = l + k(n-r)`.
pub fn enumerate_kl_parking(n: usize, k: u32, l: u32, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    enumerate_rho_parking(&DegreeFunction::linear(n, k, l), limits)
}

/// Whether `x^b` avoids every generator `(x_{i_1}⋯x_{i_r})^{n-r+1} x_{i_1}`.
pub fn is_almost_parking(b: &[u32]) -> bool {
    let n = b.len();
    (1u32..1 << n).all(|mask| {
        let r = mask.count_ones();
        let e = n as u32 - r + 1;
        let first = mask.trailing_zeros() as usize;
        (0..n).filter(|&i| mask >> i & 1 == 1).any(|i| {
            let need = if i == first { e + 1 } else { e };
            b[i] < need
        })
    })
}

pub const ALMOST_PARKING_MAX_N: usize = 6;

pub fn enumerate_almost_parking(n: usize, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    if n > ALMOST_PARKING_MAX_N {
        return Err(capacity("almost parking n", n as u128, ALMOST_PARKING_MAX_N as u128));
    }
    // singleton generators are x_i^{n+1}
    let bounds = vec![n as u32 + 1; n];
    box_filter(&bounds, limits, is_almost_parking)
}

/// `Σ_b q^{|b|}` over a list of vectors.
pub fn weight_series(vectors: &[Vec<u32>]) -> QPolynomial {
    QPolynomial::from_degrees(vectors.iter().map(|b| b.iter().map(|&x| x as usize).sum::<usize>()))
}

/// The Hilbert series of `A_ρ` as a sum over classical parking functions `a`
/// of `∏_i q^{ρ_{n-a_i+1}} [ρ_{n-a_i} - ρ_{n-a_i+1}]`.
pub fn rho_hilbert_product(rho: &DegreeFunction, limits: &Limits) -> Result<QPolynomial> {
    let n = rho.n();
    let classical = enumerate_rho_parking(&DegreeFunction::classical(n), limits)?;
    let mut total = QPolynomial::zero();
    for a in &classical {
        let mut term = QPolynomial::one();
        for &ai in a {
            let idx = n - ai as usize;
            let lo = rho.at(idx + 1) as usize;
            let hi = rho.at(idx) as usize;
            let factor = QPolynomial::monomial(BigInt::from(1), lo)
                * QPolynomial::q_integer(hi.saturating_sub(lo));
            term = term * factor;
        }
        total = total + term;
    }
    Ok(total)
}

/// Permutations `σ` of `1..=n` with `σ_i ∨^{ρ_i} σ_{i+1}` and `σ_n ∨^{ρ_n} 0`,
/// where `∨^k` means `<` for even `k` and `>` for odd `k`.
pub fn descent_pattern_count(rho: &DegreeFunction, limits: &Limits) -> Result<u64> {
    let n = rho.n();
    if n > limits.max_permutation_n {
        return Err(capacity("permutation size", n as u128, limits.max_permutation_n as u128));
    }
    let r = rho.values();
    let ok = |a: usize, b: usize, k: u32| if k.is_multiple_of(2) { a < b } else { a > b };
    let count = (1..=n)
        .permutations(n)
        .filter(|s| (0..n).all(|i| ok(s[i], if i + 1 < n { s[i + 1] } else { 0 }, r[i])))
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    /// Definition check over every nonempty subset.
    fn g_parking_oracle(g: &Digraph, b: &[u32]) -> bool {
        let n = g.n();
        (1u32..1 << n).all(|mask| (1..=n).any(|i| mask >> (i - 1) & 1 == 1 && (b[i - 1] as u64) < g.d(mask, i)))
    }

    #[test]
    fn example_graph_parking() {
        let g = Digraph::example();
        let all = enumerate_g_parking(&g, &lim()).unwrap();
        let expect: Vec<Vec<u32>> = vec![
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 0, 2],
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![2, 0, 0],
        ];
        assert_eq!(all, expect);
        assert!(!is_g_parking(&g, &[1, 1, 1]).unwrap());
        assert!(is_g_parking(&g, &[2, 0, 0]).unwrap());
        assert!(is_g_parking(&g, &[0, 1]).is_err());
    }

    #[test]
    fn burning_matches_definition() {
        let g = Digraph::new(vec![vec![0, 1, 0, 2], vec![1, 0, 2, 0], vec![0, 1, 0, 1], vec![1, 0, 3, 0]]).unwrap();
        for b in (0..3).map(|_| 0u32..4).multi_cartesian_product() {
            assert_eq!(is_g_parking(&g, &b).unwrap(), g_parking_oracle(&g, &b), "{b:?}");
        }
    }

    #[test]
    fn isolated_vertex_has_none() {
        let g = Digraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(enumerate_g_parking(&g, &lim()).unwrap().is_empty());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(
            enumerate_rho_parking(&DegreeFunction::new(vec![2, 1]).unwrap(), &lim()).unwrap(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0]]
        );
        let r421 = DegreeFunction::new(vec![4, 2, 1]).unwrap();
        assert_eq!(enumerate_rho_parking(&r421, &lim()).unwrap().len(), 25);
        let zero_tail = DegreeFunction::new(vec![3, 0]).unwrap();
        assert!(enumerate_rho_parking(&zero_tail, &lim()).unwrap().is_empty());
        assert!(DegreeFunction::new(vec![1, 2]).is_err());
    }

    #[test]
    fn almost_parking_counts() {
        assert_eq!(enumerate_almost_parking(1, &lim()).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(enumerate_almost_parking(2, &lim()).unwrap().len(), 7);
        assert_eq!(enumerate_almost_parking(3, &lim()).unwrap().len(), 38);
        assert!(enumerate_almost_parking(7, &lim()).is_err());
    }

    #[test]
    fn descent_patterns() {
        let lim = lim();
        assert_eq!(descent_pattern_count(&DegreeFunction::new(vec![1]).unwrap(), &lim).unwrap(), 1);
        assert_eq!(descent_pattern_count(&DegreeFunction::new(vec![3, 2]).unwrap(), &lim).unwrap(), 0);
        // alternating permutations of size 3
        assert_eq!(descent_pattern_count(&DegreeFunction::classical(3), &lim).unwrap(), 2);
    }

    #[test]
    fn product_formula_small() {
        let rho = DegreeFunction::new(vec![4, 2, 1]).unwrap();
        let direct = weight_series(&enumerate_rho_parking(&rho, &lim()).unwrap());
        assert_eq!(rho_hilbert_product(&rho, &lim()).unwrap(), direct);
    }

    #[test]
    fn almost_linear() {
        assert!(DegreeFunction::new(vec![9, 6, 3, 1]).unwrap().is_almost_linear());
        assert!(!DegreeFunction::new(vec![9, 5, 4]).unwrap().is_almost_linear());
    }
}
