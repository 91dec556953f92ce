//! Homological order complexes, Scarf complexes, graded Betti numbers and
//! the homology of the lcm-bounded subcomplexes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::modular::{certified_rank, SparseRow};
use crate::exact::{multinomial, QPolynomial};
use crate::ideal::{self, check_family, MonomialFamily, OrderIdealFamily};
use crate::monomial::Monomial;
use crate::par;
use crate::parking::DegreeFunction;

/// One summand group `S(-d)^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Shift {
    pub d: u64,
    pub r: u64,
}

/// `terms[k-1]` lists the shifts of `C_k`, sorted by degree with distinct degrees.
/// `C_0 = S` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedResolution {
    terms: Vec<Vec<Shift>>,
}

impl GradedResolution {
    /// Build from `(k, d) -> rank` entries; zero ranks are dropped.
    pub fn from_betti<I: IntoIterator<Item = ((usize, u64), u64)>>(entries: I) -> Result<Self> {
        let mut table: BTreeMap<(usize, u64), u64> = BTreeMap::new();
        for ((k, d), r) in entries {
            if k == 0 {
                return Err(Error::Validation("homological degree 0 is the implicit S".into()));
            }
            *table.entry((k, d)).or_insert(0) += r;
        }
        let top = table.keys().map(|k| k.0).max().unwrap_or(0);
        let mut terms = vec![Vec::new(); top];
        for ((k, d), r) in table {
            if r > 0 {
                terms[k - 1].push(Shift { d, r });
            }
        }
        while terms.last().is_some_and(Vec::is_empty) {
            terms.pop();
        }
        Ok(GradedResolution { terms })
    }

    pub fn terms(&self) -> &[Vec<Shift>] {
        &self.terms
    }

    pub fn length(&self) -> usize {
        self.terms.len()
    }

    pub fn betti(&self, k: usize, d: u64) -> u64 {
        if k == 0 {
            return u64::from(d == 0);
        }
        self.terms.get(k - 1).and_then(|t| t.iter().find(|s| s.d == d)).map_or(0, |s| s.r)
    }

    /// `(β_0, β_1, …)` with `β_0 = 1`.
    pub fn total_betti(&self) -> Vec<u64> {
        std::iter::once(1).chain(self.terms.iter().map(|t| t.iter().map(|s| s.r).sum())).collect()
    }

    /// `Σ_k (-1)^k Σ r q^d`, the Hilbert series numerator the resolution predicts.
    pub fn euler_numerator(&self) -> QPolynomial {
        let mut acc = QPolynomial::one();
        for (k, term) in self.terms.iter().enumerate() {
            let sign: i64 = if k % 2 == 0 { -1 } else { 1 };
            for s in term {
                acc = &acc + &QPolynomial::monomial(BigInt::from(sign) * s.r, s.d as usize);
            }
        }
        acc
    }
}

impl fmt::Display for GradedResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")?;
        for term in self.terms.iter().rev() {
            let parts: Vec<String> = term
                .iter()
                .map(|s| if s.r == 1 { format!("S(-{})", s.d) } else { format!("S(-{})^{}", s.d, s.r) })
                .collect();
            write!(f, " → {}", parts.join(" ⊕ "))?;
        }
        write!(f, " → S")
    }
}

/// Faces are sorted vertex index lists, ordered by size then lexicographically.
/// The empty face is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    pub faces: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    fn new(vertices: Vec<String>, mut faces: Vec<Vec<usize>>) -> Self {
        for face in &mut faces {
            face.sort_unstable();
        }
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        SimplicialComplex { vertices, faces }
    }

    /// Number of faces of each size `1, 2, …`.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![0; top];
        for face in &self.faces {
            out[face.len() - 1] += 1;
        }
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        let set: HashSet<&[usize]> = self.faces.iter().map(Vec::as_slice).collect();
        self.faces.iter().all(|face| {
            face.len() == 1
                || (0..face.len()).all(|i| {
                    let mut sub = face.clone();
                    sub.remove(i);
                    set.contains(sub.as_slice())
                })
        })
    }

    /// Connectivity of the 1-skeleton over the vertices that occur in some face.
    pub fn is_connected(&self) -> bool {
        let used: Vec<usize> = self.faces.iter().filter(|f| f.len() == 1).map(|f| f[0]).collect();
        let Some(&start) = used.first() else { return true };
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            adj.entry(f[0]).or_default().push(f[1]);
            adj.entry(f[1]).or_default().push(f[0]);
        }
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == used.len()
    }
}

/// Result of building the homological order complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderComplexResolution {
    pub resolution: GradedResolution,
    /// Chains bottom-up, in the enumeration order used for boundary matrices.
    pub chains: Vec<Vec<usize>>,
    /// No chain shares its lcm with a chain obtained by dropping one element.
    pub minimal: bool,
    pub collision: Option<(Vec<usize>, Vec<usize>)>,
}

/// The free resolution indexed by strictly increasing chains. Requires OM.
pub fn order_complex_resolution(f: &OrderIdealFamily, limits: &Limits) -> Result<OrderComplexResolution> {
    let om = ideal::check_order_family(f).om;
    if let Some(w) = om.witness {
        return Err(Error::Precondition(format!("not an order monomial family: {}", w.detail)));
    }
    let chains = f.chains(limits)?;
    let lcms: Vec<Monomial> = par::map_slice(&chains, |c| f.lcm_of(c));
    let index: HashMap<&[usize], usize> = chains.iter().enumerate().map(|(k, c)| (c.as_slice(), k)).collect();

    let mut collision = None;
    'outer: for (k, chain) in chains.iter().enumerate() {
        for drop in 0..chain.len() {
            let mut sub = chain.clone();
            sub.remove(drop);
            let same = if sub.is_empty() { lcms[k].is_one() } else { lcms[index[sub.as_slice()]] == lcms[k] };
            if same {
                collision = Some((chain.clone(), sub));
                break 'outer;
            }
        }
    }

    let resolution = GradedResolution::from_betti(chains.iter().zip(&lcms).map(|(c, m)| ((c.len(), m.degree()), 1)))?;
    Ok(OrderComplexResolution { resolution, minimal: collision.is_none(), collision, chains })
}

/// Graded Betti table computed by a chain-count recursion over the inclusion
/// poset, using the additive chain degree of monotone families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub resolution: GradedResolution,
    /// Strict monotonicity holds, so the counts are the minimal Betti numbers.
    pub minimal: bool,
}

pub fn betti_numbers(f: &MonomialFamily, limits: &Limits) -> Result<BettiTable> {
    if f.n() > limits.max_subset_vars {
        return Err(capacity("variables", f.n() as u128, limits.max_subset_vars as u128));
    }
    let report = check_family(f);
    if !report.is_monotone() {
        return Err(Error::Precondition("betti_numbers needs a monotone family".into()));
    }
    let e = f.entries();
    let mut counts: Vec<HashMap<(usize, u64), u64>> = vec![HashMap::new(); e.len()];
    for layer in ideal::layers(f) {
        let computed: Vec<HashMap<(usize, u64), u64>> = par::map_slice(&layer, |&j| {
            let lj = e[j].0;
            let mut here: HashMap<(usize, u64), u64> = HashMap::new();
            here.insert((1, ideal::step_degree(f, 0, j) as u64), 1);
            for (i, (li, _)) in e.iter().enumerate() {
                if *li != lj && li & lj == *li {
                    let w = ideal::step_degree(f, *li, j) as u64;
                    for (&(k, d), &c) in &counts[i] {
                        *here.entry((k + 1, d + w)).or_insert(0) += c;
                    }
                }
            }
            here
        });
        for (&j, c) in layer.iter().zip(computed) {
            counts[j] = c;
        }
    }
    let mut total: HashMap<(usize, u64), u64> = HashMap::new();
    for c in counts {
        for (key, v) in c {
            *total.entry(key).or_insert(0) += v;
        }
    }
    Ok(BettiTable { resolution: GradedResolution::from_betti(total)?, minimal: report.is_strictly_monotone() })
}

/// The resolution of `I_ρ` for strictly decreasing `ρ` in closed form, summed
/// over compositions `l_1 + … + l_k ≤ n`.
pub fn rho_resolution(rho: &DegreeFunction) -> Result<GradedResolution> {
    let n = rho.n();
    if rho.values().windows(2).any(|w| w[0] <= w[1]) || rho.values().last().is_some_and(|&v| v == 0) {
        return Err(Error::Precondition("ρ must be strictly decreasing and positive".into()));
    }
    let mut entries = Vec::new();
    let mut stack: Vec<Vec<u32>> = (1..=n as u32).map(|l| vec![l]).collect();
    while let Some(parts) = stack.pop() {
        let used: u32 = parts.iter().sum();
        let mut prefix = 0u32;
        let d: u64 = parts
            .iter()
            .map(|&l| {
                prefix += l;
                u64::from(l) * u64::from(rho.at(prefix as usize))
            })
            .sum();
        let mut all = parts.clone();
        all.push(n as u32 - used);
        let r = multinomial(&all).to_u64().ok_or_else(|| capacity("multinomial", u128::MAX, u64::MAX as u128))?;
        entries.push(((parts.len(), d), r));
        for l in 1..=(n as u32 - used) {
            let mut next = parts.clone();
            next.push(l);
            stack.push(next);
        }
    }
    GradedResolution::from_betti(entries)
}

/// Faces are the generator subsets whose lcm no other subset shares.
pub fn scarf_complex(gens: &[Monomial], limits: &Limits) -> Result<SimplicialComplex> {
    let names = gens.iter().map(ToString::to_string).collect();
    scarf_faces(gens, names, limits)
}

fn scarf_faces(gens: &[Monomial], names: Vec<String>, limits: &Limits) -> Result<SimplicialComplex> {
    let g = gens.len();
    if g > limits.max_scarf_generators.min(30) {
        return Err(capacity("Scarf generators", g as u128, limits.max_scarf_generators.min(30) as u128));
    }
    let Some(first) = gens.first() else {
        return Ok(SimplicialComplex::new(names, Vec::new()));
    };
    let n = first.n();
    for a in 0..g {
        for b in 0..g {
            if a != b && gens[a].divides(&gens[b]) {
                return Err(Error::Validation(format!("generators not minimal: {} divides {}", gens[a], gens[b])));
            }
        }
    }
    let total = 1u64 << g;
    let lcms: Vec<(u32, Monomial)> = par::flat_map_chunks(total - 1, 1 << 12, |lo, hi| {
        (lo + 1..hi + 1)
            .map(|mask| {
                let mask = mask as u32;
                (mask, Monomial::lcm_all(n, (0..g).filter(|k| mask >> k & 1 == 1).map(|k| &gens[k])))
            })
            .collect()
    });
    let mut seen: HashMap<&Monomial, u32> = HashMap::new();
    for (_, m) in &lcms {
        *seen.entry(m).or_insert(0) += 1;
    }
    let faces: Vec<Vec<usize>> = lcms
        .iter()
        .filter(|(_, m)| seen[m] == 1)
        .map(|(mask, _)| (0..g).filter(|k| mask >> k & 1 == 1).collect())
        .collect();
    if faces.len() > limits.max_faces {
        return Err(capacity("faces", faces.len() as u128, limits.max_faces as u128));
    }
    Ok(SimplicialComplex::new(names, faces))
}

/// Graded shifts of the homological Scarf complex: one `S(-deg lcm U)` per face `U`.
/// It is a resolution only when the ideal is generic.
pub fn scarf_resolution(gens: &[Monomial], limits: &Limits) -> Result<GradedResolution> {
    let complex = scarf_complex(gens, limits)?;
    let n = gens.first().map_or(0, Monomial::n);
    GradedResolution::from_betti(
        complex
            .faces
            .iter()
            .map(|face| ((face.len(), Monomial::lcm_all(n, face.iter().map(|&k| &gens[k])).degree()), 1)),
    )
}

/// Generic in the sense that makes the Scarf complex a resolution: whenever two
/// generators share a positive exponent in some variable, a third generator
/// strongly divides their lcm (divides it with strict inequality on its support).
pub fn is_generic(gens: &[Monomial]) -> bool {
    let Some(n) = gens.first().map(Monomial::n) else { return true };
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let shared = (1..=n).any(|i| gens[a].exp(i) > 0 && gens[a].exp(i) == gens[b].exp(i));
            if !shared {
                continue;
            }
            let l = gens[a].lcm(&gens[b]);
            let strong = gens.iter().any(|c| (1..=n).all(|i| if l.exp(i) > 0 { c.exp(i) < l.exp(i) } else { c.exp(i) == 0 }));
            if !strong {
                return false;
            }
        }
    }
    true
}

/// Minimal graded Betti numbers from the upper Koszul simplicial complexes:
/// `β_{k,b}` is the rank of `H̃_{k-2}(K^b)` where `K^b` collects the squarefree
/// `F ⊆ supp b` with `x^{b-F} ∈ I`, and `b` runs over the lcm lattice.
pub fn koszul_betti(gens: &[Monomial], limits: &Limits) -> Result<GradedResolution> {
    let Some(n) = gens.first().map(Monomial::n) else {
        return GradedResolution::from_betti(std::iter::empty());
    };
    if n > limits.max_subset_vars {
        return Err(capacity("variables", n as u128, limits.max_subset_vars as u128));
    }
    let mut lattice: HashSet<Monomial> = gens.iter().cloned().collect();
    let mut frontier: Vec<Monomial> = lattice.iter().cloned().collect();
    while let Some(m) = frontier.pop() {
        for g in gens {
            let l = m.lcm(g);
            if lattice.insert(l.clone()) {
                if lattice.len() > limits.max_faces {
                    return Err(capacity("lcm lattice", lattice.len() as u128, limits.max_faces as u128));
                }
                frontier.push(l);
            }
        }
    }
    let lattice: Vec<Monomial> = lattice.into_iter().collect();
    let in_ideal = |m: &Monomial| gens.iter().any(|g| g.divides(m));
    let homology: Vec<(u64, Vec<usize>)> = par::map_slice(&lattice, |b| {
        let support: Vec<usize> = (1..=n).filter(|&i| b.exp(i) > 0).collect();
        let faces: Vec<Vec<usize>> = (1u32..1 << support.len())
            .filter_map(|mask| {
                let face: Vec<usize> = (0..support.len()).filter(|k| mask >> k & 1 == 1).collect();
                let mut e = b.exponents().to_vec();
                for &k in &face {
                    e[support[k] - 1] -= 1;
                }
                in_ideal(&Monomial::new(e)).then_some(face)
            })
            .collect();
        reduced_homology(&faces).map(|ranks| (b.degree(), ranks))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    GradedResolution::from_betti(homology.into_iter().flat_map(|(d, ranks)| {
        ranks.into_iter().enumerate().filter(|&(_, r)| r > 0).map(move |(j, r)| ((j + 1, d), r as u64))
    }))
}

/// The geometrical order complex: chains as vertex sets.
pub fn order_complex(f: &OrderIdealFamily, limits: &Limits) -> Result<SimplicialComplex> {
    Ok(SimplicialComplex::new(f.names().to_vec(), f.chains(limits)?))
}

/// Scarf complex of the minimal generators, with faces relabelled by poset elements.
pub fn scarf_complex_of(f: &OrderIdealFamily, limits: &Limits) -> Result<SimplicialComplex> {
    let mins = ideal::minimal_generator_indices(f.monomials());
    let gens: Vec<Monomial> = mins.iter().map(|&k| f.monomials()[k].clone()).collect();
    let local = scarf_faces(&gens, Vec::new(), limits)?;
    let faces = local.faces.into_iter().map(|face| face.into_iter().map(|k| mins[k]).collect()).collect();
    Ok(SimplicialComplex::new(f.names().to_vec(), faces))
}

/// True iff the order complex and the Scarf complex have the same faces.
pub fn compare_order_scarf(f: &OrderIdealFamily, limits: &Limits) -> Result<bool> {
    Ok(order_complex(f, limits)?.faces == scarf_complex_of(f, limits)?.faces)
}

/// The resolution's alternating sum agrees with the chain-sum numerator.
pub fn euler_check(res: &GradedResolution, f: &MonomialFamily, limits: &Limits) -> Result<bool> {
    Ok(res.euler_numerator() == ideal::hilbert_numerator(f, limits)?)
}

/// Reduced rational homology of `Δ_{≤m}`, the chains whose lcm divides `m`.
/// Entry `k` holds the rank in degree `k - 1`; the empty complex has rank 1
/// in degree −1.
pub fn subcomplex_homology(f: &OrderIdealFamily, m: &Monomial, limits: &Limits) -> Result<Vec<usize>> {
    let keep: Vec<usize> = (0..f.len()).filter(|&u| f.monomials()[u].divides(m)).collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = keep.iter().map(|&u| vec![u]).collect();
    while let Some(chain) = stack.pop() {
        if faces.len() >= limits.max_faces {
            return Err(capacity("faces", faces.len() as u128 + 1, limits.max_faces as u128));
        }
        let top = *chain.last().expect("nonempty");
        for &v in &keep {
            if f.less(top, v) {
                let mut next = chain.clone();
                next.push(v);
                stack.push(next);
            }
        }
        faces.push(chain);
    }
    reduced_homology(&faces)
}

/// Reduced homology ranks of the complex whose faces are the given ordered
/// vertex lists (boundary `Σ (-1)^i` drop-i), indexed from degree −1.
pub fn reduced_homology(faces: &[Vec<usize>]) -> Result<Vec<usize>> {
    let top = faces.iter().map(Vec::len).max().unwrap_or(0);
    // by_size[s] lists faces with s vertices; size 0 is the empty face.
    let mut by_size: Vec<Vec<&[usize]>> = vec![Vec::new(); top + 1];
    by_size[0].push(&[]);
    for face in faces {
        by_size[face.len()].push(face);
    }
    for group in &mut by_size {
        group.sort_unstable();
        group.dedup();
    }
    let index: Vec<HashMap<&[usize], usize>> =
        by_size.iter().map(|g| g.iter().enumerate().map(|(k, f)| (*f, k)).collect()).collect();
    // ranks[s] = rank of the boundary from size-s faces to size-(s-1) faces.
    let ranks: Vec<usize> = par::map_range(top + 2, |s| {
        if s == 0 || s > top {
            return Ok(0);
        }
        let rows: Vec<SparseRow> = by_size[s]
            .iter()
            .map(|face| {
                (0..face.len())
                    .map(|i| {
                        let mut sub = face.to_vec();
                        sub.remove(i);
                        let col = index[s - 1].get(sub.as_slice()).copied().ok_or_else(|| {
                            Error::Validation(format!("face {face:?} has a missing facet"))
                        })?;
                        Ok((col, BigInt::from(if i % 2 == 0 { 1 } else { -1 })))
                    })
                    .collect::<Result<SparseRow>>()
            })
            .collect::<Result<_>>()?;
        Ok(certified_rank(&rows, by_size[s - 1].len())?.rank)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok((0..=top).map(|s| by_size[s].len() - ranks[s] - ranks[s + 1]).collect())
}
