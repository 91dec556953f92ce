//! Abelian sandpile model for general toppling matrices.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::{determinant, smith_normal_form, BigIntMatrix, SmithForm};
use crate::graph::Digraph;
use crate::parking::enumerate_g_parking;

/// A validated toppling matrix: off-diagonal entries are non-positive and
/// every principal minor is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopplingMatrix {
    delta: Vec<Vec<i64>>,
    pub row_sums_nonnegative: bool,
    pub column_sums_nonnegative: bool,
    pub symmetric: bool,
}

const MAX_MINOR_SITES: usize = 12;

impl TopplingMatrix {
    pub fn n(&self) -> usize {
        self.delta.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.delta
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.delta[i][j]
    }

    pub fn to_matrix(&self) -> BigIntMatrix {
        BigIntMatrix::from_rows(&self.delta).expect("square by construction")
    }

    /// `Δ = L_G^T`; rejects digraphs without an oriented spanning tree.
    pub fn from_digraph(g: &Digraph) -> Result<Self> {
        let l = g.truncated_laplacian().transpose();
        let rows: Vec<Vec<i64>> = l
            .to_nested()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.to_i64().ok_or_else(|| capacity("entry", u128::MAX, i64::MAX as u128))).collect())
            .collect::<Result<_>>()?;
        validate_toppling(rows)
    }

    /// `h` with `Δ h = (1, …, 1)`; each toppling lowers `h·u` by exactly 1.
    pub fn potential(&self) -> Result<Vec<BigRational>> {
        let n = self.n();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = self.delta[i].iter().map(|&v| BigRational::from_integer(v.into())).collect();
                row.push(BigRational::one());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::Singular("toppling matrix".into()))?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..=n {
                        let sub = &factor * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|r| r[n].clone()).collect())
    }

    /// Upper bound on the number of topplings when stabilizing `u`, padded tenfold.
    fn toppling_budget(&self, u: &[u64]) -> Result<u128> {
        let h = self.potential()?;
        let hu: BigRational = h.iter().zip(u).map(|(hi, &ui)| hi * BigRational::from_integer(ui.into())).sum();
        let bound = hu.ceil().to_integer().to_u128().unwrap_or(u128::MAX / 20);
        Ok(bound.saturating_mul(10).saturating_add(10))
    }
}

/// Accept `delta` iff it is square, has non-positive off-diagonal entries and
/// all principal minors are positive.
pub fn validate_toppling(delta: Vec<Vec<i64>>) -> Result<TopplingMatrix> {
    let n = delta.len();
    if n == 0 {
        return Err(Error::Validation("toppling matrix must be nonempty".into()));
    }
    if delta.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("toppling matrix must be square".into()));
    }
    if n > MAX_MINOR_SITES {
        return Err(capacity("sites", n as u128, MAX_MINOR_SITES as u128));
    }
    for (i, row) in delta.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j && v > 0 {
                return Err(Error::Validation(format!("off-diagonal entry Δ[{}][{}] = {v} is positive", i + 1, j + 1)));
            }
        }
    }
    let m = BigIntMatrix::from_rows(&delta)?;
    for mask in 1u32..1 << n {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let minor = determinant(&m.principal_submatrix(&idx))?;
        if !minor.is_positive() {
            let sites: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            return Err(Error::Validation(format!("principal minor on sites {sites:?} is {minor}, not positive")));
        }
    }
    let row_sums_nonnegative = delta.iter().all(|r| r.iter().sum::<i64>() >= 0);
    let column_sums_nonnegative = (0..n).all(|j| delta.iter().map(|r| r[j]).sum::<i64>() >= 0);
    let symmetric = (0..n).all(|i| (0..n).all(|j| delta[i][j] == delta[j][i]));
    Ok(TopplingMatrix { delta, row_sums_nonnegative, column_sums_nonnegative, symmetric })
}

pub fn is_stable(d: &TopplingMatrix, u: &[u64]) -> bool {
    u.len() == d.n() && u.iter().enumerate().all(|(i, &v)| (v as i64) < d.delta[i][i])
}

fn check_len(d: &TopplingMatrix, u: &[u64]) -> Result<()> {
    if u.len() != d.n() {
        return Err(Error::Dimension(format!("configuration has {} sites, matrix has {}", u.len(), d.n())));
    }
    Ok(())
}

/// Topple site `i` `times` times.
fn topple(d: &TopplingMatrix, u: &mut [u64], i: usize, times: u64) -> Result<()> {
    for (j, v) in u.iter_mut().enumerate() {
        let change = (d.delta[i][j] as i128) * times as i128;
        let next = *v as i128 - change;
        *v = u64::try_from(next).map_err(|_| Error::Invariant(format!("site {} left the u64 range while toppling", j + 1)))?;
    }
    Ok(())
}

/// Stable result and per-site toppling counts, toppling the lowest-index
/// critical site first (all its pending topplings at once).
pub fn stabilize(d: &TopplingMatrix, u: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    check_len(d, u)?;
    let budget = d.toppling_budget(u)?;
    let mut u = u.to_vec();
    let mut counts = vec![0u64; d.n()];
    let mut total: u128 = 0;
    while let Some(i) = (0..d.n()).find(|&i| u[i] as i64 >= d.delta[i][i]) {
        let times = u[i] / d.delta[i][i] as u64;
        topple(d, &mut u, i, times)?;
        counts[i] += times;
        total += u128::from(times);
        if total > budget {
            return Err(Error::Invariant(format!("stabilization exceeded {budget} topplings")));
        }
    }
    Ok((u, counts))
}

/// Stabilize one toppling at a time, choosing uniformly among critical sites.
pub fn stabilize_random_order<R: Rng>(d: &TopplingMatrix, u: &[u64], rng: &mut R) -> Result<(Vec<u64>, Vec<u64>)> {
    check_len(d, u)?;
    let budget = d.toppling_budget(u)?;
    let mut u = u.to_vec();
    let mut counts = vec![0u64; d.n()];
    let mut total: u128 = 0;
    loop {
        let critical: Vec<usize> = (0..d.n()).filter(|&i| u[i] as i64 >= d.delta[i][i]).collect();
        let Some(&i) = critical.choose(rng) else { break };
        topple(d, &mut u, i, 1)?;
        counts[i] += 1;
        total += 1;
        if total > budget {
            return Err(Error::Invariant(format!("stabilization exceeded {budget} topplings")));
        }
    }
    Ok((u, counts))
}

/// `A_i`: add a grain at site `i` (0-based) and stabilize.
pub fn avalanche(d: &TopplingMatrix, u: &[u64], i: usize) -> Result<Vec<u64>> {
    if !is_stable(d, u) {
        return Err(Error::Validation("avalanche needs a stable configuration".into()));
    }
    if i >= d.n() {
        return Err(Error::Validation(format!("site {} out of range", i + 1)));
    }
    let mut v = u.to_vec();
    v[i] += 1;
    Ok(stabilize(d, &v)?.0)
}

/// Allowed: every nonempty set of sites `I` has some `j` with
/// `u_j ≥ Σ_{i∈I∖{j}} (-Δ_ij)`. Decided by repeatedly removing such `j`
/// from the full site set; the sums only shrink as `I` shrinks.
pub fn is_allowed(d: &TopplingMatrix, u: &[u64]) -> bool {
    let n = d.n();
    let mut alive = vec![true; n];
    let mut left = n;
    loop {
        let pick = (0..n).find(|&j| {
            alive[j] && (u[j] as i64) >= (0..n).filter(|&i| i != j && alive[i]).map(|i| -d.delta[i][j]).sum::<i64>()
        });
        match pick {
            Some(j) => {
                alive[j] = false;
                left -= 1;
                if left == 0 {
                    return true;
                }
            }
            None => return false,
        }
    }
}

/// `u^∨_i = Δ_ii - 1 - u_i`.
pub fn dual_config(d: &TopplingMatrix, u: &[u64]) -> Result<Vec<u64>> {
    if !is_stable(d, u) {
        return Err(Error::Validation("dual needs a stable configuration".into()));
    }
    Ok(u.iter().enumerate().map(|(i, &v)| d.delta[i][i] as u64 - 1 - v).collect())
}

fn state_space(d: &TopplingMatrix, limits: &Limits) -> Result<Vec<u64>> {
    let radix: Vec<u64> = (0..d.n()).map(|i| d.delta[i][i] as u64).collect();
    let size = radix.iter().try_fold(1u128, |acc, &r| acc.checked_mul(u128::from(r))).unwrap_or(u128::MAX);
    if size > limits.max_states {
        return Err(capacity("stable configurations", size, limits.max_states));
    }
    Ok(radix)
}

fn encode(radix: &[u64], u: &[u64]) -> usize {
    u.iter().zip(radix).fold(0usize, |acc, (&v, &r)| acc * r as usize + v as usize)
}

fn decode(radix: &[u64], mut code: usize) -> Vec<u64> {
    let mut u = vec![0u64; radix.len()];
    for k in (0..radix.len()).rev() {
        u[k] = (code % radix[k] as usize) as u64;
        code /= radix[k] as usize;
    }
    u
}

/// Recurrent configurations: the unique terminal strongly connected component
/// of the avalanche digraph reachable from the maximal stable configuration.
/// Sorted lexicographically.
pub fn recurrent_class(d: &TopplingMatrix, limits: &Limits) -> Result<Vec<Vec<u64>>> {
    let radix = state_space(d, limits)?;
    let n = d.n();
    let top: Vec<u64> = radix.iter().map(|r| r - 1).collect();

    // Explore reachable states and their avalanche successors.
    let mut id: HashMap<usize, usize> = HashMap::new();
    let mut codes = vec![encode(&radix, &top)];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    id.insert(codes[0], 0);
    let mut next = 0;
    while next < codes.len() {
        let u = decode(&radix, codes[next]);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let v = encode(&radix, &avalanche(d, &u, i)?);
            let k = *id.entry(v).or_insert_with(|| {
                codes.push(v);
                codes.len() - 1
            });
            out.push(k);
        }
        succ.push(out);
        next += 1;
    }

    let comp = tarjan(&succ);
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut terminal = vec![true; count];
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            if comp[v] != comp[w] {
                terminal[comp[v]] = false;
            }
        }
    }
    let terminals: Vec<usize> = (0..count).filter(|&c| terminal[c]).collect();
    if terminals.len() != 1 {
        return Err(Error::Invariant(format!("{} terminal components in the avalanche digraph", terminals.len())));
    }
    let mut out: Vec<Vec<u64>> =
        (0..codes.len()).filter(|&v| comp[v] == terminals[0]).map(|v| decode(&radix, codes[v])).collect();
    out.sort();
    Ok(out)
}

/// Iterative Tarjan; returns a component id per vertex.
fn tarjan(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut comps = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < succ[v].len() {
                let w = succ[v][*edge];
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = comps;
                        if w == v {
                            break;
                        }
                    }
                    comps += 1;
                }
            }
        }
    }
    comp
}

/// Recurrence straight from the definition: for every site some
/// `1 ≤ c ≤ max_power` has `A_i^c u = u`.
pub fn is_recurrent_by_definition(d: &TopplingMatrix, u: &[u64], max_power: usize) -> Result<bool> {
    for i in 0..d.n() {
        let mut v = u.to_vec();
        let mut back = false;
        for _ in 0..max_power {
            v = avalanche(d, &v, i)?;
            if v == u {
                back = true;
                break;
            }
        }
        if !back {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariant factors of `Z^n / ⟨Δ_1, …, Δ_n⟩`.
pub fn sandpile_group(d: &TopplingMatrix) -> Result<SmithForm> {
    smith_normal_form(&d.to_matrix())
}

/// Duals of recurrent configurations versus G-parking functions for `Δ = L_G^T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub recurrent: usize,
    pub parking: usize,
    pub determinant: String,
    pub matches: bool,
}

pub fn parking_bijection_check(g: &Digraph, limits: &Limits) -> Result<DualityReport> {
    let d = TopplingMatrix::from_digraph(g)?;
    let rec = recurrent_class(&d, limits)?;
    let duals: BTreeSet<Vec<u32>> = rec
        .iter()
        .map(|u| Ok(dual_config(&d, u)?.into_iter().map(|v| v as u32).collect()))
        .collect::<Result<_>>()?;
    let parking: BTreeSet<Vec<u32>> = enumerate_g_parking(g, limits)?.into_iter().collect();
    let det: BigInt = determinant(&d.to_matrix())?;
    Ok(DualityReport {
        recurrent: rec.len(),
        parking: parking.len(),
        determinant: det.to_string(),
        matches: duals == parking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lim() -> Limits {
        Limits::default()
    }

    fn allowed_by_subsets(d: &TopplingMatrix, u: &[u64]) -> bool {
        let n = d.n();
        (1u32..1 << n).all(|mask| {
            (0..n).filter(|j| mask >> j & 1 == 1).any(|j| {
                u[j] as i64 >= (0..n).filter(|&i| i != j && mask >> i & 1 == 1).map(|i| -d.at(i, j)).sum::<i64>()
            })
        })
    }

    #[test]
    fn validation() {
        let k4 = TopplingMatrix::from_digraph(&Digraph::complete(3)).unwrap();
        assert!(k4.symmetric && k4.row_sums_nonnegative && k4.column_sums_nonnegative);
        assert!(validate_toppling(vec![vec![1, -2], vec![0, 1]]).is_ok());
        assert!(validate_toppling(vec![vec![1, -2], vec![-2, 1]]).is_err());
        assert!(validate_toppling(vec![vec![1, 2], vec![0, 1]]).is_err());
    }

    #[test]
    fn potential_solves_system() {
        let d = TopplingMatrix::from_digraph(&Digraph::example()).unwrap();
        let h = d.potential().unwrap();
        for i in 0..d.n() {
            let s: BigRational = (0..d.n()).map(|j| BigRational::from_integer(d.at(i, j).into()) * &h[j]).sum();
            assert!(s.is_one());
            assert!(h[i].is_positive());
        }
    }

    #[test]
    fn stabilization_basics() {
        let one = validate_toppling(vec![vec![1]]).unwrap();
        assert_eq!(stabilize(&one, &[3]).unwrap(), (vec![0], vec![3]));
        assert_eq!(avalanche(&one, &[0], 0).unwrap(), vec![0]);
        assert_eq!(recurrent_class(&one, &lim()).unwrap(), vec![vec![0]]);
        let k4 = TopplingMatrix::from_digraph(&Digraph::complete(3)).unwrap();
        assert_eq!(stabilize(&k4, &[1, 0, 2]).unwrap(), (vec![1, 0, 2], vec![0, 0, 0]));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = vec![17, 4, 9];
        let base = stabilize(&k4, &u).unwrap();
        for _ in 0..5 {
            assert_eq!(stabilize_random_order(&k4, &u, &mut rng).unwrap(), base);
        }
        assert!(avalanche(&k4, &[3, 0, 0], 0).is_err());
    }

    #[test]
    fn recurrent_classes() {
        for (g, count) in [(Digraph::example(), 8), (Digraph::complete(3), 16)] {
            let d = TopplingMatrix::from_digraph(&g).unwrap();
            let rec = recurrent_class(&d, &lim()).unwrap();
            assert_eq!(rec.len(), count);
            assert_eq!(sandpile_group(&d).unwrap().order(), BigInt::from(count));
            for u in &rec {
                assert!(is_allowed(&d, u));
                assert!(is_recurrent_by_definition(&d, u, rec.len()).unwrap());
            }
            let r = parking_bijection_check(&g, &lim()).unwrap();
            assert!(r.matches);
        }
    }

    #[test]
    fn greedy_allowed_matches_subsets() {
        let d = validate_toppling(vec![vec![3, -2, 0], vec![-1, 2, -1], vec![0, -3, 4]]).unwrap();
        for a in 0..3 {
            for b in 0..2 {
                for c in 0..4 {
                    let u = [a, b, c];
                    assert_eq!(is_allowed(&d, &u), allowed_by_subsets(&d, &u), "{u:?}");
                }
            }
        }
    }

    #[test]
    fn negative_column_sum() {
        let d = validate_toppling(vec![vec![3, -2], vec![0, 1]]).unwrap();
        assert!(!d.column_sums_nonnegative);
        let rec = recurrent_class(&d, &lim()).unwrap();
        assert_eq!(rec.len(), 3);
        assert!(rec.iter().all(|u| is_allowed(&d, u)));
    }

    #[test]
    fn duals() {
        let d = TopplingMatrix::from_digraph(&Digraph::example()).unwrap();
        let top = vec![2, 1, 2];
        assert_eq!(dual_config(&d, &top).unwrap(), vec![0, 0, 0]);
        let u = vec![1, 0, 2];
        assert_eq!(dual_config(&d, &dual_config(&d, &u).unwrap()).unwrap(), u);
        assert!(dual_config(&d, &[3, 0, 0]).is_err());
    }
}
