//! JSON input formats and the named example inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::ideal::{mask_elements, mask_from_elements, MonomialFamily, OrderIdealFamily};
use crate::monomial::Monomial;

/// `{"n": 3, "adjacency": [[…]]}` or `{"edges": [[0,1], …]}` (undirected,
/// `n` optional and otherwise the largest vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphJson {
    Adjacency { n: usize, adjacency: Vec<Vec<u32>> },
    Edges { n: Option<usize>, edges: Vec<[usize; 2]> },
}

impl GraphJson {
    pub fn to_digraph(&self) -> Result<Digraph> {
        match self {
            GraphJson::Adjacency { n, adjacency } => {
                if adjacency.len() != n + 1 {
                    return Err(Error::Validation(format!(
                        "adjacency has {} rows, expected n+1 = {}",
                        adjacency.len(),
                        n + 1
                    )));
                }
                Digraph::new(adjacency.clone())
            }
            GraphJson::Edges { n, edges } => {
                let n = n.unwrap_or_else(|| edges.iter().flatten().copied().max().unwrap_or(0));
                let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                Digraph::from_edges(n, &pairs)
            }
        }
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        GraphJson::Adjacency { n: g.n(), adjacency: g.adjacency().to_vec() }
    }
}

pub fn parse_graph(text: &str) -> Result<Digraph> {
    let json: GraphJson = serde_json::from_str(text).map_err(|e| Error::Validation(format!("graph JSON: {e}")))?;
    json.to_digraph()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub label: Vec<usize>,
    pub exponents: Vec<u32>,
}

/// `{"n": 3, "generators": [{"label": [1,3], "exponents": [2,0,2]}, …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub generators: Vec<GeneratorJson>,
}

impl FamilyJson {
    pub fn to_family(&self) -> Result<MonomialFamily> {
        let entries = self
            .generators
            .iter()
            .map(|g| {
                if g.exponents.len() != self.n {
                    return Err(Error::Validation(format!(
                        "generator {:?} has {} exponents, expected {}",
                        g.label,
                        g.exponents.len(),
                        self.n
                    )));
                }
                Ok((mask_from_elements(&g.label)?, Monomial::new(g.exponents.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialFamily::new(self.n, entries)
    }

    pub fn from_family(f: &MonomialFamily) -> Self {
        FamilyJson {
            n: f.n(),
            generators: f
                .entries()
                .iter()
                .map(|(l, m)| GeneratorJson { label: mask_elements(*l), exponents: m.exponents().to_vec() })
                .collect(),
        }
    }
}

pub fn parse_family(text: &str) -> Result<MonomialFamily> {
    let json: FamilyJson = serde_json::from_str(text).map_err(|e| Error::Validation(format!("family JSON: {e}")))?;
    json.to_family()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetElementJson {
    pub name: String,
    pub exponents: Vec<u32>,
}

/// `{"n": 2, "elements": [{"name": "a", "exponents": [2,0]}, …], "covers": [[0,1], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFamilyJson {
    pub n: usize,
    pub elements: Vec<PosetElementJson>,
    pub covers: Vec<[usize; 2]>,
}

impl PosetFamilyJson {
    pub fn to_family(&self) -> Result<OrderIdealFamily> {
        let names = self.elements.iter().map(|e| e.name.clone()).collect();
        let monomials = self.elements.iter().map(|e| Monomial::new(e.exponents.clone())).collect();
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|c| (c[0], c[1])).collect();
        OrderIdealFamily::from_covers(self.n, names, monomials, &covers)
    }
}

/// `{"matrix": [[…]]}` or a bare nested array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Wrapped { matrix: Vec<Vec<i64>> },
    Bare(Vec<Vec<i64>>),
}

impl MatrixJson {
    pub fn into_rows(self) -> Vec<Vec<i64>> {
        match self {
            MatrixJson::Wrapped { matrix } | MatrixJson::Bare(matrix) => matrix,
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    let json: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Validation(format!("matrix JSON: {e}")))?;
    Ok(json.into_rows())
}

/// Graph with edges 01, 02, 03, 12, 23.
pub fn square_with_diagonal() -> Digraph {
    Digraph::from_edges(3, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).expect("valid edge list")
}

/// Names accepted by [`named_family`].
pub const EXAMPLE_NAMES: [&str; 5] = ["example-graph", "res1", "res2", "res3", "res4"];

/// The worked example families. `res2` restricts the example graph's family to
/// `{1,2,3,12,23,123}`; `res3` is the three-generator non-generic family.
pub fn named_family(name: &str) -> Result<MonomialFamily> {
    let limits = crate::error::Limits::default();
    match name {
        "example-graph" => crate::ideal::graph_family(&Digraph::example(), &limits),
        "res1" => crate::ideal::graph_family(&Digraph::complete(3), &limits),
        "res2" => crate::ideal::graph_family(&Digraph::example(), &limits)?
            .restrict(&[0b001, 0b010, 0b100, 0b011, 0b110, 0b111]),
        "res3" => MonomialFamily::new(
            3,
            vec![
                (0b011, Monomial::new(vec![2, 2, 0])),
                (0b110, Monomial::new(vec![0, 2, 1])),
                (0b111, Monomial::new(vec![1, 1, 1])),
            ],
        ),
        "res4" => crate::ideal::graph_family(&square_with_diagonal(), &limits),
        other => Err(Error::Validation(format!("unknown example {other:?}; known: {}", EXAMPLE_NAMES.join(", ")))),
    }
}

/// Graphs behind the named examples, when there is one.
pub fn named_graph(name: &str) -> Result<Digraph> {
    match name {
        "example-graph" | "res2" => Ok(Digraph::example()),
        "res1" => Ok(Digraph::complete(3)),
        "res4" => Ok(square_with_diagonal()),
        other => Err(Error::Validation(format!("example {other:?} has no underlying graph"))),
    }
}
