//! Rooted multigraphs on vertices `0..=n` (vertex 0 is the root), their
//! Laplacians, and exhaustive enumeration of spanning trees, forests and slim
//! subgraphs together with the activity and inversion statistics.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Limits, Result};
use crate::exact::{determinant, BigIntMatrix};
use crate::par;

/// Multigraph given by its `(n+1)×(n+1)` adjacency matrix; `a[i][j]` is the
/// number of edges `i → j`. Undirected graphs have symmetric adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    adj: Vec<Vec<u32>>,
}

impl Digraph {
    pub fn new(adj: Vec<Vec<u32>>) -> Result<Self> {
        if adj.is_empty() {
            return Err(Error::Validation("adjacency matrix must have at least the root row".into()));
        }
        let size = adj.len();
        if let Some(r) = adj.iter().position(|row| row.len() != size) {
            return Err(Error::Validation(format!(
                "adjacency row {r} has length {}, expected {size}",
                adj[r].len()
            )));
        }
        Ok(Digraph { n: size - 1, adj })
    }

    /// Undirected multigraph from an edge list; repeated pairs become parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![vec![0u32; n + 1]; n + 1];
        for &(i, j) in edges {
            if i > n || j > n {
                return Err(Error::Validation(format!("edge ({i},{j}) outside 0..={n}")));
            }
            adj[i][j] += 1;
            if i != j {
                adj[j][i] += 1;
            }
        }
        Ok(Digraph { n, adj })
    }

    /// The complete graph `K_{n+1}`.
    pub fn complete(n: usize) -> Self {
        Self::complete_kl(n, 1, 1)
    }

    /// `K_{n+1}^{k,l}`: edges among non-root vertices have multiplicity `k`,
    /// edges to the root multiplicity `l`.
    pub fn complete_kl(n: usize, k: u32, l: u32) -> Self {
        let mut adj = vec![vec![0u32; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    adj[i][j] = if i == 0 || j == 0 { l } else { k };
                }
            }
        }
        Digraph { n, adj }
    }

    /// The four-vertex running example: every edge of `K_4` except `0–2`.
    pub fn example() -> Self {
        Self::from_edges(3, &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("valid edges")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn a(&self, i: usize, j: usize) -> u32 {
        self.adj[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..=self.n).all(|i| (0..i).all(|j| self.adj[i][j] == self.adj[j][i]))
    }

    /// Edge count: undirected edges for symmetric input, arcs otherwise. Loops are not counted.
    pub fn num_edges(&self) -> usize {
        let arcs: u64 = (0..=self.n)
            .flat_map(|i| (0..=self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.adj[i][j] as u64)
            .sum();
        if self.is_symmetric() {
            (arcs / 2) as usize
        } else {
            arcs as usize
        }
    }

    /// `d_I(i)`: number of edges from `i` to vertices outside `I` (the root is always outside).
    /// `mask` has bit `k-1` set for vertex `k`.
    pub fn d(&self, mask: u32, i: usize) -> u64 {
        (0..=self.n)
            .filter(|&j| j != i && (j == 0 || mask >> (j - 1) & 1 == 0))
            .map(|j| self.adj[i][j] as u64)
            .sum()
    }

    /// `D_I = Σ_{i∈I} d_I(i)`.
    pub fn big_d(&self, mask: u32) -> u64 {
        (1..=self.n)
            .filter(|&i| mask >> (i - 1) & 1 == 1)
            .map(|i| self.d(mask, i))
            .sum()
    }

    /// The truncated Laplacian on vertices `1..=n`; loops are ignored.
    pub fn truncated_laplacian(&self) -> BigIntMatrix {
        let n = self.n;
        let mut m = BigIntMatrix::zeros(n, n);
        for i in 1..=n {
            let deg: u64 = (0..=n).filter(|&r| r != i).map(|r| self.adj[i][r] as u64).sum();
            m.set(i - 1, i - 1, BigInt::from(deg));
            for j in 1..=n {
                if j != i {
                    m.set(i - 1, j - 1, -BigInt::from(self.adj[i][j]));
                }
            }
        }
        m
    }

    /// Number of oriented spanning trees, by the matrix-tree theorem.
    pub fn spanning_tree_count(&self) -> BigInt {
        determinant(&self.truncated_laplacian()).expect("laplacian is square")
    }

    /// Remove one copy of the undirected edge `u–v`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Digraph> {
        if u > self.n || v > self.n || self.adj[u][v] == 0 {
            return Err(Error::Validation(format!("no edge {u}–{v} to delete")));
        }
        let mut adj = self.adj.clone();
        adj[u][v] -= 1;
        if u != v {
            adj[v][u] -= 1;
        }
        Ok(Digraph { n: self.n, adj })
    }

    /// Contract one copy of the undirected non-loop edge `u–v`. The larger
    /// endpoint merges into the smaller; remaining parallel copies become loops
    /// and multi-edges are kept.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<Digraph> {
        if u == v {
            return Err(Error::Validation("cannot contract a loop".into()));
        }
        let g = self.delete_edge(u, v)?;
        let (keep, gone) = (u.min(v), u.max(v));
        let size = self.n + 1;
        let mut merged = g.adj.clone();
        for y in 0..size {
            if y != keep && y != gone {
                merged[keep][y] += g.adj[gone][y];
                merged[y][keep] += g.adj[y][gone];
            }
        }
        merged[keep][keep] += g.adj[gone][gone] + g.adj[keep][gone];
        let adj: Vec<Vec<u32>> = (0..size)
            .filter(|&x| x != gone)
            .map(|x| (0..size).filter(|&y| y != gone).map(|y| merged[x][y]).collect())
            .collect();
        Digraph::new(adj)
    }

    pub fn edge_list(&self) -> Result<EdgeList> {
        EdgeList::from_digraph(self)
    }
}

/// One copy of an undirected edge `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub copy: u32,
}

/// Undirected edges in a fixed linear order; position in the list is the order
/// used by external activity. Loops are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    n: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl EdgeList {
    /// Edges sorted by `(min endpoint, max endpoint, copy)`.
    pub fn from_digraph(g: &Digraph) -> Result<Self> {
        if !g.is_symmetric() {
            return Err(Error::Validation("edge lists need a symmetric adjacency matrix".into()));
        }
        let mut edges = Vec::new();
        for u in 0..=g.n {
            for v in u + 1..=g.n {
                for copy in 0..g.adj[u][v] {
                    edges.push(Edge { u, v, copy });
                }
            }
        }
        Ok(Self::build(g.n, edges))
    }

    fn build(n: usize, edges: Vec<Edge>) -> Self {
        let index = edges.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        EdgeList { n, edges, index }
    }

    /// Same edges, new order: position `k` holds old edge `perm[k]`.
    pub fn reordered(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.edges.len()];
        if perm.len() != self.edges.len() || perm.iter().any(|&p| p >= seen.len() || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Validation("edge order must be a permutation".into()));
        }
        Ok(Self::build(self.n, perm.iter().map(|&p| self.edges[p]).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn to_digraph(&self) -> Digraph {
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        Digraph::from_edges(self.n, &pairs).expect("edges in range")
    }

    fn guard(&self, limits: &Limits) -> Result<()> {
        if self.edges.len() > limits.max_edges.min(32) {
            return Err(capacity("edges", self.edges.len() as u128, limits.max_edges.min(32) as u128));
        }
        Ok(())
    }

    fn dsu(&self, mask: u32) -> Dsu {
        let mut d = Dsu::new(self.n + 1);
        for (k, e) in self.edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                d.union(e.u, e.v);
            }
        }
        d
    }

    /// Whether the edges in `mask` connect all `n+1` vertices.
    pub fn spans_connected(&self, mask: u32) -> bool {
        self.dsu(mask).components == 1
    }

    pub fn is_forest(&self, mask: u32) -> bool {
        let mut d = Dsu::new(self.n + 1);
        self.edges
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .all(|(_, e)| d.union(e.u, e.v))
    }

    pub fn is_spanning_tree(&self, mask: u32) -> bool {
        mask.count_ones() as usize == self.n && self.is_forest(mask)
    }

    /// Edge indices on the path between `a` and `b` inside the forest `mask`,
    /// or `None` if they lie in different components.
    fn forest_path(&self, mask: u32, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n + 1];
        for (k, e) in self.edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                nbrs[e.u].push((e.v, k));
                nbrs[e.v].push((e.u, k));
            }
        }
        let mut via: Vec<Option<(usize, usize)>> = vec![None; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, k) in &nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, k));
                    queue.push_back(y);
                }
            }
        }
        if !seen[b] {
            return None;
        }
        let mut path = Vec::new();
        let mut x = b;
        while let Some((p, k)) = via[x] {
            path.push(k);
            x = p;
        }
        Some(path)
    }
}

struct Dsu {
    parent: Vec<usize>,
    components: usize,
}

impl Dsu {
    fn new(size: usize) -> Self {
        Dsu { parent: (0..size).collect(), components: size }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.components -= 1;
        true
    }
}

/// An oriented spanning tree: every non-root vertex `i` has one out-edge to
/// `parent[i]`; `arc[i]` says which of the parallel edges is used.
/// Index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpanningTree {
    pub parent: Vec<usize>,
    pub arc: Vec<u32>,
}

impl SpanningTree {
    /// The tree as an edge subset of an undirected edge list.
    pub fn edge_mask(&self, el: &EdgeList) -> Result<u32> {
        let mut mask = 0u32;
        for i in 1..self.parent.len() {
            let p = self.parent[i];
            let e = Edge { u: i.min(p), v: i.max(p), copy: self.arc[i] };
            let k = el
                .index_of(&e)
                .ok_or_else(|| Error::Validation(format!("tree edge {}–{} not in the graph", e.u, e.v)))?;
            mask |= 1 << k;
        }
        Ok(mask)
    }

    pub fn inversions(&self) -> usize {
        tree_inversions(&self.parent)
    }
}

/// All oriented spanning trees rooted at 0, ordered lexicographically by the
/// sequence of `(parent, arc)` choices of vertices `1..=n`.
pub fn enumerate_spanning_trees(g: &Digraph, limits: &Limits) -> Result<Vec<SpanningTree>> {
    let edges = g.num_edges();
    if edges > limits.max_edges {
        return Err(capacity("edges", edges as u128, limits.max_edges as u128));
    }
    let n = g.n;
    if n == 0 {
        return Ok(vec![SpanningTree { parent: vec![0], arc: vec![0] }]);
    }
    let choices: Vec<Vec<(usize, u32)>> = (0..=n)
        .map(|i| {
            if i == 0 {
                return Vec::new();
            }
            (0..=n)
                .filter(|&j| j != i)
                .flat_map(|j| (0..g.adj[i][j]).map(move |c| (j, c)))
                .collect()
        })
        .collect();
    let parts = par::map_slice(&choices[1], |&(p, c)| {
        let mut parent = vec![usize::MAX; n + 1];
        let mut arc = vec![0u32; n + 1];
        parent[0] = 0;
        parent[1] = p;
        arc[1] = c;
        let mut out = Vec::new();
        if !closes_cycle(&parent, 1) {
            extend_trees(&choices, 2, &mut parent, &mut arc, &mut out);
        }
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

fn closes_cycle(parent: &[usize], start: usize) -> bool {
    let mut x = parent[start];
    let mut steps = 0;
    while x != 0 && x != usize::MAX {
        if x == start {
            return true;
        }
        x = parent[x];
        steps += 1;
        if steps > parent.len() {
            return true;
        }
    }
    false
}

fn extend_trees(
    choices: &[Vec<(usize, u32)>],
    i: usize,
    parent: &mut Vec<usize>,
    arc: &mut Vec<u32>,
    out: &mut Vec<SpanningTree>,
) {
    if i == choices.len() {
        out.push(SpanningTree { parent: parent.clone(), arc: arc.clone() });
        return;
    }
    for &(p, c) in &choices[i] {
        parent[i] = p;
        arc[i] = c;
        if !closes_cycle(parent, i) {
            extend_trees(choices, i + 1, parent, arc, out);
        }
    }
    parent[i] = usize::MAX;
    arc[i] = 0;
}

/// Spanning trees of an undirected graph as edge masks, in the order of
/// [`enumerate_spanning_trees`].
pub fn spanning_tree_masks(el: &EdgeList, limits: &Limits) -> Result<Vec<u32>> {
    el.guard(limits)?;
    enumerate_spanning_trees(&el.to_digraph(), limits)?
        .iter()
        .map(|t| t.edge_mask(el))
        .collect()
}

/// Number of edges outside the forest `mask` that are the smallest edge of a
/// cycle whose other edges lie in the forest.
pub fn forest_external_activity(el: &EdgeList, mask: u32) -> Result<usize> {
    if !el.is_forest(mask) {
        return Err(Error::Validation("edge subset contains a cycle".into()));
    }
    let mut active = 0;
    for (k, e) in el.edges.iter().enumerate() {
        if mask >> k & 1 == 1 {
            continue;
        }
        if let Some(path) = el.forest_path(mask, e.u, e.v) {
            if path.iter().all(|&j| j > k) {
                active += 1;
            }
        }
    }
    Ok(active)
}

/// External activity of a spanning tree given as an edge mask.
pub fn external_activity(el: &EdgeList, tree: u32) -> Result<usize> {
    if !el.is_spanning_tree(tree) {
        return Err(Error::Validation("edge subset is not a spanning tree".into()));
    }
    forest_external_activity(el, tree)
}

/// `k ↦` number of spanning trees with external activity `k`.
pub fn activity_distribution(el: &EdgeList, limits: &Limits) -> Result<BTreeMap<usize, u64>> {
    let masks = spanning_tree_masks(el, limits)?;
    let acts = par::map_slice(&masks, |&m| forest_external_activity(el, m));
    let mut dist = BTreeMap::new();
    for a in acts {
        *dist.entry(a?).or_insert(0) += 1;
    }
    Ok(dist)
}

/// Pairs `i > j` with `i` on the path from `j` to the root. `parent[0]` is ignored.
pub fn tree_inversions(parent: &[usize]) -> usize {
    let mut count = 0;
    for j in 1..parent.len() {
        let mut a = parent[j];
        let mut steps = 0;
        while a != 0 && steps < parent.len() {
            if a > j {
                count += 1;
            }
            a = parent[a];
            steps += 1;
        }
    }
    count
}

/// Inversions of a forest on `0..=n`: pairs `i > j` with `i` on the path from
/// `j` to the smallest vertex of its component.
pub fn forest_inversions(el: &EdgeList, mask: u32) -> Result<usize> {
    if !el.is_forest(mask) {
        return Err(Error::Validation("edge subset contains a cycle".into()));
    }
    let size = el.n + 1;
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (k, e) in el.edges.iter().enumerate() {
        if mask >> k & 1 == 1 {
            nbrs[e.u].push(e.v);
            nbrs[e.v].push(e.u);
        }
    }
    // Vertices are visited in increasing order, so each component's search starts at its minimum.
    let mut parent = vec![usize::MAX; size];
    for root in 0..size {
        if parent[root] != usize::MAX {
            continue;
        }
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &nbrs[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
    }
    let mut count = 0;
    for j in 0..size {
        let mut a = j;
        while parent[a] != a {
            a = parent[a];
            if a > j {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Edge subsets `H` whose complement connects all vertices, ascending by mask.
pub fn enumerate_slim_subgraphs(el: &EdgeList, limits: &Limits) -> Result<Vec<u32>> {
    el.guard(limits)?;
    let m = el.len();
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    if !el.spans_connected(full) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    slim_rec(el, 0, 0, full, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// `h` holds edges decided into H among the first `k`; `keep` = everything not in `h`.
fn slim_rec(el: &EdgeList, k: usize, h: u32, keep: u32, out: &mut Vec<u32>) {
    if k == el.len() {
        out.push(h);
        return;
    }
    slim_rec(el, k + 1, h, keep, out);
    let keep2 = keep & !(1 << k);
    if el.spans_connected(keep2) {
        slim_rec(el, k + 1, h | 1 << k, keep2, out);
    }
}

/// A subforest with its external activity and inversion count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subforest {
    pub mask: u32,
    pub edges: usize,
    pub activity: usize,
    pub inversions: usize,
}

/// All acyclic edge subsets, ascending by mask.
pub fn enumerate_subforests(el: &EdgeList, limits: &Limits) -> Result<Vec<Subforest>> {
    el.guard(limits)?;
    let mut masks = Vec::new();
    forest_rec(el, 0, 0, &mut masks);
    masks.sort_unstable();
    par::map_slice(&masks, |&mask| {
        Ok(Subforest {
            mask,
            edges: mask.count_ones() as usize,
            activity: forest_external_activity(el, mask)?,
            inversions: forest_inversions(el, mask)?,
        })
    })
    .into_iter()
    .collect()
}

fn forest_rec(el: &EdgeList, k: usize, mask: u32, out: &mut Vec<u32>) {
    if k == el.len() {
        out.push(mask);
        return;
    }
    forest_rec(el, k + 1, mask, out);
    let with = mask | 1 << k;
    if el.is_forest(with) {
        forest_rec(el, k + 1, with, out);
    }
}
