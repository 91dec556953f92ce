//! Monomial families labelled by subsets or by poset elements: the graph,
//! ρ, (k,l) and forest families, the monotone/order/generic condition checks,
//! standard monomial bases and the chain-sum Hilbert and dimension formulas.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::QPolynomial;
use crate::graph::Digraph;
use crate::monomial::{exponents_of_degree, Monomial};
use crate::par;
use crate::parking::DegreeFunction;

/// Elements of a subset bitmask as 1-based indices.
pub fn mask_elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn mask_from_elements(elements: &[usize]) -> Result<u32> {
    elements.iter().try_fold(0u32, |acc, &i| {
        if i == 0 || i > 32 {
            Err(Error::Validation(format!("label element {i} out of range")))
        } else {
            Ok(acc | 1 << (i - 1))
        }
    })
}

/// `{1,3}` style rendering of a label.
pub fn format_label(mask: u32) -> String {
    let parts: Vec<String> = mask_elements(mask).iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn label_order(a: u32, b: u32) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| mask_elements(a).cmp(&mask_elements(b)))
}

/// Monomials `m_I` labelled by distinct nonempty subsets `I ⊆ {1..n}`, kept
/// sorted by label size and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialFamily {
    n: usize,
    entries: Vec<(u32, Monomial)>,
}

impl MonomialFamily {
    pub fn new(n: usize, mut entries: Vec<(u32, Monomial)>) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::Validation(format!("variable count {n} out of range 1..=32")));
        }
        let full: u64 = (1u64 << n) - 1;
        for (label, m) in &entries {
            if *label == 0 || u64::from(*label) & !full != 0 {
                return Err(Error::Validation(format!("label {} is empty or outside 1..={n}", format_label(*label))));
            }
            if m.n() != n {
                return Err(Error::Validation(format!("monomial {m} has {} variables, expected {n}", m.n())));
            }
        }
        entries.sort_by(|a, b| label_order(a.0, b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation(format!("duplicate label {}", format_label(w[0].0))));
        }
        Ok(MonomialFamily { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(u32, Monomial)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn get(&self, label: u32) -> Option<&Monomial> {
        self.entries.iter().find(|e| e.0 == label).map(|e| &e.1)
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.entries.iter().map(|e| e.1.clone()).collect()
    }

    /// `ν_I(i)`, the exponent of `x_i` in `m_I`.
    pub fn nu(&self, label: u32, i: usize) -> Option<u32> {
        self.get(label).map(|m| m.exp(i))
    }

    pub fn has_all_singletons(&self) -> bool {
        (1..=self.n).all(|i| self.get(1 << (i - 1)).is_some())
    }

    /// Keep only the listed labels.
    pub fn restrict(&self, labels: &[u32]) -> Result<Self> {
        let entries = labels
            .iter()
            .map(|&l| {
                self.get(l)
                    .map(|m| (l, m.clone()))
                    .ok_or_else(|| Error::Validation(format!("label {} not in family", format_label(l))))
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialFamily::new(self.n, entries)
    }

    /// The family viewed as a poset family ordered by inclusion.
    pub fn to_poset(&self) -> OrderIdealFamily {
        let k = self.entries.len();
        let less = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let (la, lb) = (self.entries[a].0, self.entries[b].0);
                        la != lb && la & lb == la
                    })
                    .collect()
            })
            .collect();
        OrderIdealFamily {
            n: self.n,
            names: self.entries.iter().map(|e| format_label(e.0)).collect(),
            monomials: self.monomials(),
            less,
        }
    }
}

fn check_subset_vars(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_subset_vars.min(31) {
        return Err(capacity("variables", n as u128, limits.max_subset_vars.min(31) as u128));
    }
    Ok(())
}

fn all_subsets_family(n: usize, limits: &Limits, m: impl Fn(u32) -> Monomial) -> Result<MonomialFamily> {
    check_subset_vars(n, limits)?;
    MonomialFamily::new(n, (1u32..1 << n).map(|mask| (mask, m(mask))).collect())
}

/// `m_I = ∏_{i∈I} x_i^{d_I(i)}` over all nonempty `I`.
pub fn graph_family(g: &Digraph, limits: &Limits) -> Result<MonomialFamily> {
    let n = g.n();
    all_subsets_family(n, limits, |mask| {
        let mut e = vec![0u32; n];
        for i in mask_elements(mask) {
            e[i - 1] = u32::try_from(g.d(mask, i)).unwrap_or(u32::MAX);
        }
        Monomial::new(e)
    })
}

/// `m_I = (x_{i_1}⋯x_{i_r})^{ρ_r}`.
pub fn rho_family(rho: &DegreeFunction, limits: &Limits) -> Result<MonomialFamily> {
    let n = rho.n();
    all_subsets_family(n, limits, |mask| {
        let r = mask.count_ones() as usize;
        let mut e = vec![0u32; n];
        for i in mask_elements(mask) {
            e[i - 1] = rho.at(r);
        }
        Monomial::new(e)
    })
}

/// `m_I = (x_{i_1}⋯x_{i_r})^{l+k(n-r)}`.
pub fn kl_family(n: usize, k: u32, l: u32, limits: &Limits) -> Result<MonomialFamily> {
    rho_family(&DegreeFunction::linear(n, k, l), limits)
}

/// `m_I = (x_{i_1}⋯x_{i_r})^{n-r+1} x_{i_1}` with `i_1 = min I`.
pub fn hat_family(n: usize, limits: &Limits) -> Result<MonomialFamily> {
    all_subsets_family(n, limits, |mask| {
        let r = mask.count_ones();
        let mut e = vec![0u32; n];
        for i in mask_elements(mask) {
            e[i - 1] = n as u32 - r + 1;
        }
        e[mask.trailing_zeros() as usize] += 1;
        Monomial::new(e)
    })
}

/// Monomials labelled by the elements of a finite poset. `less[a][b]` is the
/// strict order `a < b`, transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderIdealFamily {
    n: usize,
    names: Vec<String>,
    monomials: Vec<Monomial>,
    less: Vec<Vec<bool>>,
}

impl OrderIdealFamily {
    /// Build from cover pairs `(a, b)` meaning `a < b`. Rejects cycles.
    pub fn from_covers(
        n: usize,
        names: Vec<String>,
        monomials: Vec<Monomial>,
        covers: &[(usize, usize)],
    ) -> Result<Self> {
        let k = monomials.len();
        if names.len() != k {
            return Err(Error::Validation("one name per poset element required".into()));
        }
        if let Some(m) = monomials.iter().find(|m| m.n() != n) {
            return Err(Error::Validation(format!("monomial {m} has wrong variable count")));
        }
        let mut less = vec![vec![false; k]; k];
        for &(a, b) in covers {
            if a >= k || b >= k {
                return Err(Error::Validation(format!("cover ({a},{b}) out of range")));
            }
            less[a][b] = true;
        }
        for mid in 0..k {
            for a in 0..k {
                if less[a][mid] {
                    for b in 0..k {
                        if less[mid][b] {
                            less[a][b] = true;
                        }
                    }
                }
            }
        }
        if (0..k).any(|a| less[a][a]) {
            return Err(Error::Validation("cover relation has a cycle".into()));
        }
        Ok(OrderIdealFamily { n, names, monomials, less })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.less[a][b]
    }

    /// Lcm of the monomials at the given elements.
    pub fn lcm_of(&self, elements: &[usize]) -> Monomial {
        Monomial::lcm_all(self.n, elements.iter().map(|&e| &self.monomials[e]))
    }

    /// All strictly increasing chains, each listed bottom-up, in lexicographic
    /// order of element indices. Length-1 chains included; the empty chain is not.
    pub fn chains(&self, limits: &Limits) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for start in 0..self.len() {
            cur.push(start);
            self.extend_chains(&mut cur, &mut out, limits)?;
            cur.pop();
        }
        Ok(out)
    }

    fn extend_chains(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limits: &Limits) -> Result<()> {
        if out.len() >= limits.max_faces {
            return Err(capacity("chains", out.len() as u128 + 1, limits.max_faces as u128));
        }
        out.push(cur.clone());
        let top = *cur.last().expect("nonempty chain");
        for next in 0..self.len() {
            if self.less[top][next] {
                cur.push(next);
                self.extend_chains(cur, out, limits)?;
                cur.pop();
            }
        }
        Ok(())
    }
}

/// Outcome of one condition check. Witnesses index family entries
/// (subset families) or poset elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub detail: String,
}

impl Check {
    fn pass() -> Self {
        Check { holds: true, witness: None }
    }

    fn fail(elements: Vec<usize>, detail: String) -> Self {
        Check { holds: false, witness: Some(Witness { elements, detail }) }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "pass"),
            Some(w) => write!(f, "FAIL ({})", w.detail),
        }
    }
}

/// MM1–MM3 and SM2 only make sense for subset-labelled families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub mm1: Option<Check>,
    pub mm2: Option<Check>,
    pub mm3: Option<Check>,
    pub sm1: Check,
    pub sm2: Option<Check>,
    pub om: Check,
    pub gm: Check,
}

impl ConditionReport {
    pub fn is_monotone(&self) -> bool {
        [&self.mm1, &self.mm2, &self.mm3].iter().all(|c| c.as_ref().is_some_and(|c| c.holds))
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.is_monotone() && self.sm1.holds && self.sm2.as_ref().is_some_and(|c| c.holds)
    }
}

pub fn check_family(f: &MonomialFamily) -> ConditionReport {
    let e = f.entries();
    let lbl = |k: usize| format_label(e[k].0);
    let mm1 = (0..e.len())
        .find(|&k| e[k].1.support() & !e[k].0 != 0)
        .map_or_else(Check::pass, |k| Check::fail(vec![k], format!("m_{} = {} uses a variable outside its label", lbl(k), e[k].1)));

    let mut mm2 = Check::pass();
    'mm2: for a in 0..e.len() {
        for b in 0..e.len() {
            let (la, lb) = (e[a].0, e[b].0);
            if la != lb && la & lb == la {
                for i in mask_elements(la) {
                    if e[a].1.exp(i) < e[b].1.exp(i) {
                        mm2 = Check::fail(vec![a, b], format!("exponent of x{i} grows from m_{} to m_{}", lbl(a), lbl(b)));
                        break 'mm2;
                    }
                }
            }
        }
    }

    let mut mm3 = Check::pass();
    'mm3: for a in 0..e.len() {
        for b in a + 1..e.len() {
            let l = e[a].1.lcm(&e[b].1);
            let union = e[a].0 | e[b].0;
            if !e.iter().any(|(lk, mk)| lk & union == union && mk.divides(&l)) {
                mm3 = Check::fail(vec![a, b], format!("no m_K with K ⊇ {} ∪ {} divides {l}", lbl(a), lbl(b)));
                break 'mm3;
            }
        }
    }

    let mut sm2 = Check::pass();
    'sm2: for a in 0..e.len() {
        for b in 0..e.len() {
            let (la, lb) = (e[a].0, e[b].0);
            if la == lb || la & lb != la {
                continue;
            }
            for c in 0..e.len() {
                let lc = e[c].0;
                if lc == lb || lb & lc != lb {
                    continue;
                }
                if !mask_elements(lb & !la).into_iter().any(|i| e[b].1.exp(i) > e[c].1.exp(i)) {
                    sm2 = Check::fail(vec![a, b, c], format!("chain {} ⊂ {} ⊂ {} has no strict drop", lbl(a), lbl(b), lbl(c)));
                    break 'sm2;
                }
            }
        }
    }

    let poset = f.to_poset();
    ConditionReport {
        mm1: Some(mm1),
        mm2: Some(mm2),
        mm3: Some(mm3),
        sm1: check_sm1(&poset),
        sm2: Some(sm2),
        om: check_om(&poset),
        gm: check_gm(&poset),
    }
}

pub fn check_order_family(f: &OrderIdealFamily) -> ConditionReport {
    ConditionReport {
        mm1: None,
        mm2: None,
        mm3: None,
        sm1: check_sm1(f),
        sm2: None,
        om: check_om(f),
        gm: check_gm(f),
    }
}

fn check_sm1(f: &OrderIdealFamily) -> Check {
    let m = f.monomials();
    for a in 0..m.len() {
        for b in 0..m.len() {
            if a != b && m[a].divides(&m[b]) {
                return Check::fail(vec![a, b], format!("m_{} = {} divides m_{} = {}", f.names[a], m[a], f.names[b], m[b]));
            }
        }
    }
    Check::pass()
}

fn check_om(f: &OrderIdealFamily) -> Check {
    let m = f.monomials();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let l = m[a].lcm(&m[b]);
            if !(0..m.len()).any(|w| f.leq(a, w) && f.leq(b, w) && m[w].divides(&l)) {
                return Check::fail(vec![a, b], format!("no upper bound of {} and {} divides {l}", f.names[a], f.names[b]));
            }
        }
    }
    Check::pass()
}

/// Indices of minimal generators: one representative per distinct monomial,
/// dropping any monomial properly divisible by another.
pub fn minimal_generator_indices(ms: &[Monomial]) -> Vec<usize> {
    (0..ms.len())
        .filter(|&a| {
            let first = ms.iter().position(|m| m == &ms[a]) == Some(a);
            first && !ms.iter().any(|m| m != &ms[a] && m.divides(&ms[a]))
        })
        .collect()
}

fn check_gm(f: &OrderIdealFamily) -> Check {
    let m = f.monomials();
    let mins = minimal_generator_indices(m);
    for (x, &a) in mins.iter().enumerate() {
        for &b in &mins[x + 1..] {
            let shared = (1..=f.n).find(|&i| m[a].exp(i) > 0 && m[a].exp(i) == m[b].exp(i));
            let Some(i) = shared else { continue };
            let l = m[a].lcm(&m[b]);
            if !mins.iter().any(|&w| w != a && w != b && m[w].strictly_divides(&l)) {
                return Check::fail(
                    vec![a, b],
                    format!("{} and {} share degree {} in x{i} and nothing strictly divides {l}", m[a], m[b], m[a].exp(i)),
                );
            }
        }
    }
    Check::pass()
}

/// Standard monomials, graded and then lexicographically decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardBasis {
    pub monomials: Vec<Monomial>,
    /// True when every singleton label is present, so the basis is finite and listed in full.
    pub complete: bool,
    /// Degree bound used when the basis is infinite.
    pub cap: Option<u32>,
}

impl StandardBasis {
    pub fn graded_counts(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for m in &self.monomials {
            let d = m.degree() as usize;
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }
}

/// `Σ_i (ν_{{i}}(i) - 1)`, the top degree of a finite quotient's box.
pub fn socle_bound(f: &MonomialFamily) -> Option<u32> {
    (1..=f.n)
        .map(|i| f.get(1 << (i - 1)).map(|m| m.exp(i).saturating_sub(1)))
        .sum()
}

pub fn standard_basis(f: &MonomialFamily, degree_cap: u32, limits: &Limits) -> Result<StandardBasis> {
    let gens = f.monomials();
    let avoids = |e: &[u32]| !gens.iter().any(|g| g.exponents().iter().zip(e).all(|(a, b)| a <= b));
    let mut monomials: Vec<Monomial> = if f.has_all_singletons() {
        let bounds: Vec<u32> = (1..=f.n).map(|i| f.get(1 << (i - 1)).unwrap().exp(i)).collect();
        let total = bounds.iter().try_fold(1u128, |a, &b| a.checked_mul(b as u128)).unwrap_or(u128::MAX);
        if total > limits.max_box {
            return Err(capacity("box size", total, limits.max_box));
        }
        let mut out = Vec::new();
        let mut point = vec![0u32; f.n];
        if total > 0 {
            loop {
                if avoids(&point) {
                    out.push(Monomial::new(point.clone()));
                }
                let mut k = f.n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    point[k] += 1;
                    if point[k] < bounds[k] {
                        break;
                    }
                    point[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
        out
    } else {
        let mut out = Vec::new();
        for d in 0..=degree_cap {
            let count = crate::monomial::count_of_degree(f.n, d as u64);
            if count > limits.max_monomials_per_degree as u128 {
                return Err(capacity("monomials per degree", count, limits.max_monomials_per_degree as u128));
            }
            out.extend(exponents_of_degree(f.n, d).into_iter().filter(|e| avoids(e)).map(Monomial::new));
        }
        out
    };
    monomials.sort_by(Monomial::graded_cmp);
    let complete = f.has_all_singletons();
    Ok(StandardBasis { monomials, complete, cap: (!complete).then_some(degree_cap) })
}

fn require_monotone(f: &MonomialFamily) -> Result<()> {
    let report = check_family(f);
    for (name, c) in [("MM1", &report.mm1), ("MM2", &report.mm2), ("MM3", &report.mm3)] {
        let c = c.as_ref().expect("subset family checks");
        if !c.holds {
            return Err(Error::Precondition(format!(
                "family is not monotone: {name} fails: {}",
                c.witness.as_ref().map(|w| w.detail.as_str()).unwrap_or("")
            )));
        }
    }
    Ok(())
}

/// Labels grouped by size, each group in canonical order.
pub(crate) fn layers(f: &MonomialFamily) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); f.n + 1];
    for (k, (label, _)) in f.entries.iter().enumerate() {
        out[label.count_ones() as usize].push(k);
    }
    out
}

/// Dynamic programme over the inclusion poset: `value[J]` is the signed sum of
/// `weight` products over all chains ending at `J`, where a chain
/// `I_1 ⊂ … ⊂ I_k = J` has sign `(-1)^k` and weight `∏_r step(I_{r-1}, I_r)`.
fn chain_dp<T, S>(f: &MonomialFamily, step: S) -> Vec<T>
where
    T: Clone + Send + Sync + Default + std::ops::Add<Output = T>,
    for<'a> &'a T: std::ops::Neg<Output = T> + std::ops::Mul<&'a T, Output = T>,
    S: Fn(u32, usize) -> T + Sync + Send,
{
    let e = &f.entries;
    let mut value: Vec<T> = vec![T::default(); e.len()];
    for layer in layers(f) {
        let computed: Vec<T> = par::map_slice(&layer, |&j| {
            let lj = e[j].0;
            let mut acc = -&step(0, j);
            for (i, (li, _)) in e.iter().enumerate() {
                if *li != lj && li & lj == *li {
                    acc = acc + -&(&value[i] * &step(*li, j));
                }
            }
            acc
        });
        for (&j, v) in layer.iter().zip(computed) {
            value[j] = v;
        }
    }
    value
}

/// `d(I, J) = Σ_{i∈J∖I} ν_J(i)`: the degree added when a chain steps from `I` to `J`.
pub(crate) fn step_degree(f: &MonomialFamily, from: u32, to: usize) -> usize {
    let (lj, m) = &f.entries[to];
    mask_elements(lj & !from).iter().map(|&i| m.exp(i) as usize).sum()
}

/// Numerator of the Hilbert series over `(1-q)^n`: `1 + Σ_k (-1)^k Σ_chains q^{deg}`.
pub fn hilbert_numerator(f: &MonomialFamily, limits: &Limits) -> Result<QPolynomial> {
    check_subset_vars(f.n, limits)?;
    require_monotone(f)?;
    let values = chain_dp(f, |from, to| QPolynomial::monomial(BigInt::one(), step_degree(f, from, to)));
    Ok(values.iter().fold(QPolynomial::one(), |acc, v| &acc + v))
}

/// The Hilbert series truncated at `cap`, from the chain-sum numerator.
pub fn hilbert_series(f: &MonomialFamily, cap: usize, limits: &Limits) -> Result<Vec<BigInt>> {
    Ok(hilbert_numerator(f, limits)?.series_div_one_minus_q_pow(f.n, cap))
}

/// `dim A` as the alternating chain sum with weights `∏ (ν(i) - ν_J(i))` and
/// the factor `∏_{i∉I_k} ν(i)`, where `ν(i) = ν_{{i}}(i)`.
pub fn dimension_chain_formula(f: &MonomialFamily, limits: &Limits) -> Result<BigInt> {
    check_subset_vars(f.n, limits)?;
    if !f.has_all_singletons() {
        return Err(Error::InfiniteDimension("some singleton label is missing, so a pure power survives".into()));
    }
    require_monotone(f)?;
    let nu: Vec<i64> = (1..=f.n).map(|i| f.get(1 << (i - 1)).unwrap().exp(i) as i64).collect();
    let values = chain_dp(f, |from, to| {
        let (lj, m) = &f.entries[to];
        mask_elements(lj & !from)
            .iter()
            .map(|&i| BigInt::from(nu[i - 1] - m.exp(i) as i64))
            .product::<BigInt>()
    });
    let outside = |mask: u32| -> BigInt {
        (1..=f.n).filter(|&i| mask >> (i - 1) & 1 == 0).map(|i| BigInt::from(nu[i - 1])).product()
    };
    let mut total = outside(0);
    for (k, v) in values.iter().enumerate() {
        if !v.is_zero() {
            total += v * outside(f.entries[k].0);
        }
    }
    Ok(total)
}

/// Lcm of a strictly increasing chain of labels via the layered product
/// formula: each new element `i ∈ I_r ∖ I_{r-1}` contributes `ν_{I_r}(i)`.
pub fn chain_lcm(f: &MonomialFamily, chain: &[u32]) -> Result<Monomial> {
    if chain.is_empty() {
        return Err(Error::Validation("empty chain".into()));
    }
    let mut e = vec![0u32; f.n];
    let mut prev = 0u32;
    for &l in chain {
        if l == prev || l & prev != prev {
            return Err(Error::Validation(format!("{} does not strictly contain the previous label", format_label(l))));
        }
        let m = f.get(l).ok_or_else(|| Error::Validation(format!("label {} not in family", format_label(l))))?;
        for i in mask_elements(l & !prev) {
            e[i - 1] = m.exp(i);
        }
        prev = l;
    }
    Ok(Monomial::new(e))
}

/// Inclusion–exclusion over all generator subsets:
/// `Σ_U (-1)^{|U|} q^{deg lcm(U)}`. Valid for any monomial ideal.
pub fn taylor_numerator(gens: &[Monomial], n: usize) -> Result<QPolynomial> {
    if gens.len() > 20 {
        return Err(capacity("generators", gens.len() as u128, 20u128));
    }
    let mut by_degree: HashMap<usize, i64> = HashMap::new();
    for mask in 0u32..1 << gens.len() {
        let l = Monomial::lcm_all(n, (0..gens.len()).filter(|k| mask >> k & 1 == 1).map(|k| &gens[k]));
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *by_degree.entry(l.degree() as usize).or_insert(0) += sign;
    }
    let top = by_degree.keys().copied().max().unwrap_or(0);
    Ok(QPolynomial::from_i64s(&(0..=top).map(|d| by_degree.get(&d).copied().unwrap_or(0)).collect::<Vec<_>>()))
}
