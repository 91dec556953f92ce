//! Deformed algebras: ideals generated by powers of linear forms, their
//! graded quotient dimensions by exact rank, generosity checks, the
//! square-free algebra `C_G` and the forest algebras.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::modular::{certified_rank, SparseRow};
use crate::exact::{multinomial, QPolynomial};
use crate::graph::{enumerate_slim_subgraphs, enumerate_subforests, Digraph, EdgeList};
use crate::ideal::{self, mask_elements, MonomialFamily};
use crate::monomial::{count_of_degree, exponents_of_degree, exponents_of_degree_in, Monomial};
use crate::par;
use crate::parking::{self, DegreeFunction};

/// A homogeneous polynomial with integer coefficients, terms sorted by
/// [`Monomial::graded_cmp`] and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    n: usize,
    degree: u64,
    terms: Vec<(Monomial, BigInt)>,
}

impl HomogeneousPolynomial {
    pub fn new(n: usize, degree: u64, terms: Vec<(Monomial, BigInt)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.n() != n || m.degree() != degree {
                return Err(Error::Validation(format!("term {m} is not of degree {degree} in {n} variables")));
            }
            *merged.entry(m.exponents().to_vec()).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<(Monomial, BigInt)> =
            merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (Monomial::new(e), c)).collect();
        terms.sort_by(|a, b| a.0.graded_cmp(&b.0));
        Ok(HomogeneousPolynomial { n, degree, terms })
    }

    pub fn from_monomial(m: &Monomial) -> Self {
        HomogeneousPolynomial { n: m.n(), degree: m.degree(), terms: vec![(m.clone(), BigInt::one())] }
    }

    /// `(Σ α_i x_i)^d` expanded with multinomial coefficients.
    pub fn linear_power(alpha: &[i64], d: u32) -> Self {
        let n = alpha.len();
        let mask = alpha.iter().enumerate().filter(|(_, a)| **a != 0).fold(0u32, |m, (i, _)| m | 1 << i);
        let terms = exponents_of_degree_in(n, mask, d)
            .into_iter()
            .map(|e| {
                let mut c = multinomial(&e);
                for (a, &k) in alpha.iter().zip(&e) {
                    if k > 0 {
                        c *= BigInt::from(*a).pow(k);
                    }
                }
                (Monomial::new(e), c)
            })
            .collect();
        Self::new(n, u64::from(d), terms).expect("homogeneous by construction")
    }

    /// `(Σ_{i∈I} x_i)^d` for a label mask `I`.
    pub fn subset_power(n: usize, mask: u32, d: u32) -> Self {
        let alpha: Vec<i64> = (0..n).map(|i| i64::from(mask >> i & 1)).collect();
        Self::linear_power(&alpha, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> u32 {
        self.terms.iter().fold(0, |m, (t, _)| m | t.support())
    }

    pub fn mul(&self, other: &HomogeneousPolynomial) -> HomogeneousPolynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                terms.push((a.mul(b), ca * cb));
            }
        }
        Self::new(self.n, self.degree + other.degree, terms).expect("product of homogeneous polynomials")
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogeneousPolynomial {
        HomogeneousPolynomial {
            n: self.n,
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let abs = c.abs();
            write!(f, "{sign}")?;
            match (abs.is_one(), m.is_one()) {
                (true, false) => write!(f, "{m}")?,
                (_, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

fn require_symmetric(g: &Digraph) -> Result<()> {
    if !g.is_symmetric() {
        return Err(Error::Validation("power generators need an undirected graph (symmetric adjacency)".into()));
    }
    Ok(())
}

fn subsets(n: usize, limits: &Limits) -> Result<std::ops::Range<u32>> {
    if n == 0 || n > limits.max_subset_vars.min(31) {
        return Err(capacity("variables", n as u128, limits.max_subset_vars.min(31) as u128));
    }
    Ok(1..1u32 << n)
}

fn degree_u32(d: u64) -> Result<u32> {
    u32::try_from(d).map_err(|_| capacity("generator degree", d, u32::MAX))
}

/// `p_I = (Σ_{i∈I} x_i)^{D_I}` for every nonempty `I`.
pub fn power_generators(g: &Digraph, limits: &Limits) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    require_symmetric(g)?;
    subsets(g.n(), limits)?
        .map(|mask| Ok((mask, HomogeneousPolynomial::subset_power(g.n(), mask, degree_u32(g.big_d(mask))?))))
        .collect()
}

/// `p̂_I = (Σ_{i∈I} x_i)^{D_I + 1}`.
pub fn hat_power_generators(g: &Digraph, limits: &Limits) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    require_symmetric(g)?;
    subsets(g.n(), limits)?
        .map(|mask| Ok((mask, HomogeneousPolynomial::subset_power(g.n(), mask, degree_u32(g.big_d(mask) + 1)?))))
        .collect()
}

/// `(x_{i_1} + … + x_{i_r})^{r ρ_r}`.
pub fn rho_power_generators(rho: &DegreeFunction, limits: &Limits) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    let n = rho.n();
    subsets(n, limits)?
        .map(|mask| {
            let r = mask.count_ones();
            Ok((mask, HomogeneousPolynomial::subset_power(n, mask, r * rho.at(r as usize))))
        })
        .collect()
}

pub fn kl_power_generators(n: usize, k: u32, l: u32, limits: &Limits) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    rho_power_generators(&DegreeFunction::linear(n, k, l), limits)
}

/// Dimensions of the graded pieces, `dims[k]` for `k = 0..=cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub dims: Vec<u64>,
    pub cap: usize,
}

impl GradedDims {
    pub fn total(&self) -> u64 {
        self.dims.iter().sum()
    }

    pub fn to_polynomial(&self) -> QPolynomial {
        QPolynomial::from_i64s(&self.dims.iter().map(|&d| d as i64).collect::<Vec<_>>())
    }
}

fn column_index(n: usize, d: u32, limits: &Limits) -> Result<(Vec<Vec<u32>>, HashMap<Vec<u32>, usize>)> {
    let count = count_of_degree(n, u64::from(d));
    if count > limits.max_monomials_per_degree as u128 {
        return Err(capacity("monomials per degree", count, limits.max_monomials_per_degree as u128));
    }
    let basis = exponents_of_degree(n, d);
    let index = basis.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
    Ok((basis, index))
}

fn rows_in_degree(gens: &[HomogeneousPolynomial], n: usize, d: u32, index: &HashMap<Vec<u32>, usize>) -> Vec<SparseRow> {
    let mut rows = Vec::new();
    for p in gens.iter().filter(|p| p.degree <= u64::from(d)) {
        for shift in exponents_of_degree(n, d - p.degree as u32) {
            let shift = Monomial::new(shift);
            rows.push(p.terms.iter().map(|(t, c)| (index[t.mul(&shift).exponents()], c.clone())).collect());
        }
    }
    rows
}

/// `dim S_d / J_d` for `d ≤ cap`, with `J` generated by `gens`. Degrees after
/// the first zero are zero without further work, since `S` is generated in
/// degree 1.
pub fn quotient_graded_dims(n: usize, gens: &[HomogeneousPolynomial], cap: usize, limits: &Limits) -> Result<GradedDims> {
    if let Some(p) = gens.iter().find(|p| p.n != n) {
        return Err(Error::Validation(format!("generator {p} has {} variables, expected {n}", p.n)));
    }
    let mut dims = vec![0u64; cap + 1];
    for d in 0..=cap {
        let (basis, index) = column_index(n, d as u32, limits)?;
        let rows = rows_in_degree(gens, n, d as u32, &index);
        let rank = certified_rank(&rows, basis.len())?.rank;
        dims[d] = (basis.len() - rank) as u64;
        if dims[d] == 0 {
            break;
        }
    }
    Ok(GradedDims { dims, cap })
}

/// Default truncation for the generosity check.
pub fn default_deformation_cap(m: &Monomial) -> usize {
    2 * m.degree() as usize + m.n()
}

/// Bounded generosity check: in each degree `≤ cap` of the ring on the
/// variables in `vars`, the monomials not divisible by `m` together with the
/// multiples of `p` span everything.
pub fn is_i_deformation(vars: u32, m: &Monomial, p: &HomogeneousPolynomial, cap: usize, limits: &Limits) -> Result<bool> {
    if p.degree != m.degree() || p.n != m.n() {
        return Err(Error::Validation(format!("deg {p} differs from deg {m}")));
    }
    if (m.support() | p.support()) & !vars != 0 {
        return Err(Error::Validation("m or p uses a variable outside the label".into()));
    }
    let local: Vec<usize> = mask_elements(vars).into_iter().map(|i| i - 1).collect();
    let k = local.len();
    let restrict = |e: &[u32]| -> Vec<u32> { local.iter().map(|&i| e[i]).collect() };
    let m_local = Monomial::new(restrict(m.exponents()));
    let p_local = HomogeneousPolynomial::new(
        k,
        p.degree,
        p.terms.iter().map(|(t, c)| (Monomial::new(restrict(t.exponents())), c.clone())).collect(),
    )?;
    for d in m.degree() as usize..=cap {
        // Rows for monomials outside (m) are unit rows on their own column, so
        // only the square block on the multiples of m matters.
        let cols: Vec<Vec<u32>> =
            exponents_of_degree(k, d as u32).into_iter().filter(|e| m_local.divides(&Monomial::new(e.clone()))).collect();
        if cols.len() > limits.max_monomials_per_degree {
            return Err(capacity("monomials per degree", cols.len() as u128, limits.max_monomials_per_degree as u128));
        }
        let index: HashMap<Vec<u32>, usize> = cols.iter().enumerate().map(|(c, e)| (e.clone(), c)).collect();
        let rows: Vec<SparseRow> = exponents_of_degree(k, (d - m.degree() as usize) as u32)
            .into_iter()
            .map(|shift| {
                let shift = Monomial::new(shift);
                p_local
                    .terms
                    .iter()
                    .filter_map(|(t, c)| index.get(t.mul(&shift).exponents()).map(|&col| (col, c.clone())))
                    .collect()
            })
            .collect();
        if certified_rank(&rows, cols.len())?.rank < cols.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p_I = (Σ_{i∈I} x_i)^{deg m_I}` for each family entry.
pub fn default_deformation(f: &MonomialFamily) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    f.entries()
        .iter()
        .map(|(label, m)| Ok((*label, HomogeneousPolynomial::subset_power(f.n(), *label, degree_u32(m.degree())?))))
        .collect()
}

/// `p_I = (Σ_{i∈I} α_i x_i)^{deg m_I}` with `α_i` uniform in `[-5, 5] ∖ {0}`,
/// redrawn up to 10 times when the bounded generosity check fails.
pub fn random_deformation(f: &MonomialFamily, seed: u64, limits: &Limits) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(f.len());
    for (label, m) in f.entries() {
        let d = degree_u32(m.degree())?;
        let mut accepted = None;
        for _ in 0..10 {
            let alpha: Vec<i64> = (0..f.n())
                .map(|i| {
                    if label >> i & 1 == 0 {
                        0
                    } else {
                        let v = rng.gen_range(1..=5);
                        if rng.gen_bool(0.5) { v } else { -v }
                    }
                })
                .collect();
            let p = HomogeneousPolynomial::linear_power(&alpha, d);
            if is_i_deformation(*label, m, &p, default_deformation_cap(m), limits)? {
                accepted = Some(p);
                break;
            }
        }
        let p = accepted.ok_or_else(|| {
            Error::Invariant(format!("seed {seed}: no generous deformation of m_{} in 10 draws", ideal::format_label(*label)))
        })?;
        out.push((*label, p));
    }
    Ok(out)
}

/// Termwise comparison of `Hilb A` and `Hilb B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub hilb_a: Vec<u64>,
    pub hilb_b: Vec<u64>,
    pub equal: bool,
    pub first_gap_degree: Option<usize>,
    /// `dim A_d ≥ dim B_d` in every degree.
    pub termwise_ge: bool,
}

impl ComparisonReport {
    fn new(mut hilb_a: Vec<u64>, mut hilb_b: Vec<u64>) -> Self {
        let len = hilb_a.len().max(hilb_b.len());
        hilb_a.resize(len, 0);
        hilb_b.resize(len, 0);
        let first_gap_degree = (0..len).find(|&d| hilb_a[d] != hilb_b[d]);
        let termwise_ge = hilb_a.iter().zip(&hilb_b).all(|(a, b)| a >= b);
        while hilb_a.len() > 1 && hilb_a.last() == Some(&0) && hilb_b.last() == Some(&0) {
            hilb_a.pop();
            hilb_b.pop();
        }
        ComparisonReport { equal: first_gap_degree.is_none(), first_gap_degree, termwise_ge, hilb_a, hilb_b }
    }
}

/// Compare the monomial quotient with its deformation. With all singletons
/// present the cap defaults to the socle bound, and the deformed side is
/// checked to vanish one degree beyond it.
pub fn verify_span(
    f: &MonomialFamily,
    gens: &[(u32, HomogeneousPolynomial)],
    cap: Option<usize>,
    limits: &Limits,
) -> Result<ComparisonReport> {
    if gens.len() != f.len() {
        return Err(Error::Validation(format!("{} generators for {} family entries", gens.len(), f.len())));
    }
    for (label, p) in gens {
        let m = f
            .get(*label)
            .ok_or_else(|| Error::Validation(format!("label {} not in the family", ideal::format_label(*label))))?;
        if !is_i_deformation(*label, m, p, default_deformation_cap(m), limits)? {
            return Err(Error::Precondition(format!("p_{} is not a deformation of {m}", ideal::format_label(*label))));
        }
    }
    let cap = match (cap, ideal::socle_bound(f)) {
        (Some(c), _) => c,
        (None, Some(s)) => s as usize,
        (None, None) => {
            return Err(Error::InfiniteDimension("family lacks a singleton; pass an explicit cap".into()))
        }
    };
    let basis = ideal::standard_basis(f, cap as u32, limits)?;
    let mut hilb_a = basis.graded_counts();
    hilb_a.resize(hilb_a.len().max(cap + 1), 0);
    hilb_a.truncate(cap + 1);
    let polys: Vec<HomogeneousPolynomial> = gens.iter().map(|(_, p)| p.clone()).collect();
    let probe = if basis.complete { cap + 1 } else { cap };
    let mut hilb_b = quotient_graded_dims(f.n(), &polys, probe, limits)?.dims;
    if basis.complete {
        if hilb_b[cap + 1] != 0 {
            return Err(Error::Invariant(format!(
                "deformed quotient is nonzero in degree {} beyond the monomial socle bound",
                cap + 1
            )));
        }
        hilb_b.truncate(cap + 1);
    }
    Ok(ComparisonReport::new(hilb_a, hilb_b))
}

/// `α_H = ∏_{e∈H} (y_u - y_v)` with `y_0 = 0`.
pub fn edge_product(el: &EdgeList, mask: u32) -> HomogeneousPolynomial {
    let n = el.n();
    let mut acc = HomogeneousPolynomial::from_monomial(&Monomial::one(n));
    for (k, e) in el.edges().iter().enumerate() {
        if mask >> k & 1 == 1 {
            let mut alpha = vec![0i64; n];
            if e.u > 0 {
                alpha[e.u - 1] = 1;
            }
            alpha[e.v - 1] = -1;
            acc = acc.mul(&HomogeneousPolynomial::linear_power(&alpha, 1));
        }
    }
    acc
}

/// Graded dimensions of `C_G` as ranks of the slim-subgraph coefficient matrices.
pub fn cg_graded_dims(el: &EdgeList, limits: &Limits) -> Result<GradedDims> {
    let slim = enumerate_slim_subgraphs(el, limits)?;
    let top = slim.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
    let n = el.n();
    let dims = par::map_range(top + 1, |k| {
        let (basis, index) = column_index(n, k as u32, limits)?;
        let rows: Vec<SparseRow> = slim
            .iter()
            .filter(|m| m.count_ones() as usize == k)
            .map(|&m| edge_product(el, m).terms.iter().map(|(t, c)| (index[t.exponents()], c.clone())).collect())
            .collect();
        Ok(certified_rank(&rows, basis.len())?.rank as u64)
    })
    .into_iter()
    .collect::<Result<Vec<u64>>>()?;
    Ok(GradedDims { dims, cap: top })
}

/// Forest algebra comparison for an undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestReport {
    pub hilb_b: Vec<u64>,
    /// Subforests `F` with external activity `|G| - |F| - k`, by `k`.
    pub forest_by_degree: Vec<u64>,
    pub forest_total: u64,
    /// Almost-parking counts by degree, reported for complete graphs only.
    pub almost_parking: Option<Vec<u64>>,
    /// Some vertex component misses the root.
    pub degenerate: bool,
    pub equal: bool,
}

pub fn forest_check(el: &EdgeList, limits: &Limits) -> Result<ForestReport> {
    let g = el.to_digraph();
    let n = g.n();
    let forests = enumerate_subforests(el, limits)?;
    let total_edges = el.len();
    let mut forest_by_degree: Vec<u64> = Vec::new();
    for f in &forests {
        let k = total_edges
            .checked_sub(f.edges + f.activity)
            .ok_or_else(|| Error::Invariant("forest activity exceeds the complement size".into()))?;
        if forest_by_degree.len() <= k {
            forest_by_degree.resize(k + 1, 0);
        }
        forest_by_degree[k] += 1;
    }
    let gens: Vec<HomogeneousPolynomial> = hat_power_generators(&g, limits)?.into_iter().map(|(_, p)| p).collect();
    let cap = gens.iter().filter(|p| p.support().count_ones() == 1).map(|p| p.degree as usize - 1).sum::<usize>() + 1;
    let mut hilb_b = quotient_graded_dims(n, &gens, cap, limits)?.dims;
    while hilb_b.len() > 1 && hilb_b.last() == Some(&0) {
        hilb_b.pop();
    }
    let complete = (0..=n).all(|i| (0..=n).all(|j| g.a(i, j) == u32::from(i != j)));
    let almost_parking = if complete && n <= parking::ALMOST_PARKING_MAX_N {
        let mut counts: Vec<u64> = Vec::new();
        for b in parking::enumerate_almost_parking(n, limits)? {
            let d = b.iter().sum::<u32>() as usize;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Some(counts)
    } else {
        None
    };
    let degenerate = !el.spans_connected((1u32 << el.len()).wrapping_sub(1));
    let equal = hilb_b == forest_by_degree && almost_parking.as_ref().is_none_or(|a| a == &hilb_b);
    Ok(ForestReport {
        forest_total: forests.len() as u64,
        hilb_b,
        forest_by_degree,
        almost_parking,
        degenerate,
        equal,
    })
}

/// One probe of the ρ search: `dim A_ρ` from the parking product and `dim B_ρ` by rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoProbe {
    pub rho: Vec<u32>,
    pub almost_linear: bool,
    pub report: ComparisonReport,
}

pub fn compare_rho(rho: &DegreeFunction, limits: &Limits) -> Result<RhoProbe> {
    let f = ideal::rho_family(rho, limits)?;
    let gens = rho_power_generators(rho, limits)?;
    Ok(RhoProbe {
        rho: rho.values().to_vec(),
        almost_linear: rho.is_almost_linear(),
        report: verify_span(&f, &gens, None, limits)?,
    })
}

/// Every weakly decreasing positive `ρ` of length `n` with `ρ_1 ≤ max_value`,
/// optionally only the ones that are not almost linear.
pub fn search_rho(n: usize, max_value: u32, only_nonlinear: bool, limits: &Limits) -> Result<Vec<RhoProbe>> {
    let mut candidates = Vec::new();
    let mut stack: Vec<Vec<u32>> = (1..=max_value).map(|v| vec![v]).collect();
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            let rho = DegreeFunction::new(prefix)?;
            if !(only_nonlinear && rho.is_almost_linear()) {
                candidates.push(rho);
            }
            continue;
        }
        let last = *prefix.last().expect("nonempty");
        for v in 1..=last {
            let mut next = prefix.clone();
            next.push(v);
            stack.push(next);
        }
    }
    candidates.sort_by(|a, b| a.values().cmp(b.values()));
    par::map_slice(&candidates, |rho| compare_rho(rho, limits)).into_iter().collect()
}

/// Integer coefficient of `x^e` in `p`, zero when absent.
pub fn coefficient(p: &HomogeneousPolynomial, e: &[u32]) -> BigInt {
    p.terms.iter().find(|(t, _)| t.exponents() == e).map_or_else(BigInt::zero, |(_, c)| c.clone())
}

/// Convenience for reports: `Σ dims[k] q^k` rendered as `1+3q+4q^2`.
pub fn format_dims(dims: &[u64]) -> String {
    QPolynomial::from_i64s(&dims.iter().map(|&d| d.to_i64().unwrap_or(i64::MAX)).collect::<Vec<_>>()).to_string()
}
