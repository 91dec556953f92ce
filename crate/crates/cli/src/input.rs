//! Resolving the input flags into one mathematical object.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use parking_algebra::deformation::{
    hat_power_generators, kl_power_generators, power_generators, random_deformation, rho_power_generators,
    HomogeneousPolynomial,
};
use parking_algebra::error::{Error, Limits, Result};
use parking_algebra::graph::Digraph;
use parking_algebra::ideal::{graph_family, hat_family, kl_family, rho_family, MonomialFamily, OrderIdealFamily};
use parking_algebra::io::{self, FamilyJson, GraphJson, PosetFamilyJson};
use parking_algebra::parking::DegreeFunction;
use sha2::{Digest, Sha256};

#[derive(Args, Debug, Clone, Default)]
#[group(id = "input", multiple = false)]
pub struct InputArgs {
    /// Graph JSON: {"n", "adjacency"} or {"edges"}.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Monomial family JSON: {"n", "generators": [{"label", "exponents"}]}.
    #[arg(long, value_name = "FILE")]
    pub family: Option<PathBuf>,
    /// Poset-labelled family JSON: {"n", "elements", "covers"}.
    #[arg(long, value_name = "FILE")]
    pub poset: Option<PathBuf>,
    /// Toppling matrix JSON: {"matrix"} or a bare nested array.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    /// Weakly decreasing degree function, e.g. 4,2,1.
    #[arg(long, value_delimiter = ',', value_name = "R1,R2,..")]
    pub rho: Option<Vec<u32>>,
    /// Complete (k,l) graph parameters n,k,l.
    #[arg(long, value_delimiter = ',', value_name = "N,K,L")]
    pub kl: Option<Vec<u32>>,
    /// Complete graph K_{n+1} on the root and n vertices.
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// Forest family on K_{n+1}.
    #[arg(long, value_name = "N")]
    pub hat: Option<usize>,
    /// Named worked example.
    #[arg(long, value_name = "NAME")]
    pub example: Option<String>,
}

/// The resolved input.
pub enum Source {
    Graph(Digraph),
    Rho(DegreeFunction),
    Kl { n: usize, k: u32, l: u32 },
    Hat(usize),
    Family(MonomialFamily),
    Poset(OrderIdealFamily),
    Matrix(Vec<Vec<i64>>),
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

impl InputArgs {
    pub fn resolve(&self) -> Result<Source> {
        if let Some(p) = &self.graph {
            return Ok(Source::Graph(io::parse_graph(&read(p)?)?));
        }
        if let Some(p) = &self.family {
            return Ok(Source::Family(io::parse_family(&read(p)?)?));
        }
        if let Some(p) = &self.poset {
            let json: PosetFamilyJson = serde_json::from_str(&read(p)?)
                .map_err(|e| Error::Validation(format!("poset JSON: {e}")))?;
            return Ok(Source::Poset(json.to_family()?));
        }
        if let Some(p) = &self.matrix {
            return Ok(Source::Matrix(io::parse_matrix(&read(p)?)?));
        }
        if let Some(r) = &self.rho {
            return Ok(Source::Rho(DegreeFunction::new(r.clone())?));
        }
        if let Some(v) = &self.kl {
            let [n, k, l] = v[..] else {
                return Err(Error::Validation(format!("--kl takes n,k,l; got {} values", v.len())));
            };
            return Ok(Source::Kl { n: n as usize, k, l });
        }
        if let Some(n) = self.complete {
            return Ok(Source::Graph(Digraph::complete(n)));
        }
        if let Some(n) = self.hat {
            return Ok(Source::Hat(n));
        }
        if let Some(name) = &self.example {
            return Ok(match io::named_graph(name) {
                Ok(g) if name != "res2" => Source::Graph(g),
                _ => Source::Family(io::named_family(name)?),
            });
        }
        Err(Error::Validation(
            "no input given; use one of --graph, --family, --poset, --matrix, --rho, --kl, --complete, --hat, --example".into(),
        ))
    }
}

impl Source {
    /// Canonical JSON of the resolved object; its digest goes into the manifest.
    pub fn canonical(&self) -> String {
        let value = match self {
            Source::Graph(g) => serde_json::json!({"graph": GraphJson::from_digraph(g)}),
            Source::Rho(r) => serde_json::json!({"rho": r.values()}),
            Source::Kl { n, k, l } => serde_json::json!({"kl": [n, k, l]}),
            Source::Hat(n) => serde_json::json!({"hat": n}),
            Source::Family(f) => serde_json::json!({"family": FamilyJson::from_family(f)}),
            Source::Poset(p) => serde_json::json!({
                "poset": {
                    "n": p.n(),
                    "names": p.names(),
                    "exponents": p.monomials().iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
                    "less": (0..p.len()).map(|a| (0..p.len()).filter(|&b| p.less(a, b)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }
            }),
            Source::Matrix(m) => serde_json::json!({"matrix": m}),
        };
        value.to_string()
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn graph(&self) -> Result<Digraph> {
        match self {
            Source::Graph(g) => Ok(g.clone()),
            Source::Kl { n, k, l } => Ok(Digraph::complete_kl(*n, *k, *l)),
            Source::Hat(n) => Ok(Digraph::complete(*n)),
            _ => Err(Error::Validation("this command needs a graph input (--graph, --complete, --kl, --example)".into())),
        }
    }

    pub fn family(&self, limits: &Limits) -> Result<MonomialFamily> {
        match self {
            Source::Graph(g) => graph_family(g, limits),
            Source::Rho(r) => rho_family(r, limits),
            Source::Kl { n, k, l } => kl_family(*n, *k, *l, limits),
            Source::Hat(n) => hat_family(*n, limits),
            Source::Family(f) => Ok(f.clone()),
            Source::Poset(_) | Source::Matrix(_) => {
                Err(Error::Validation("this command needs a subset-labelled family input".into()))
            }
        }
    }

    pub fn poset(&self, limits: &Limits) -> Result<OrderIdealFamily> {
        match self {
            Source::Poset(p) => Ok(p.clone()),
            _ => Ok(self.family(limits)?.to_poset()),
        }
    }

    /// The deformed generators: powers of linear forms for the named families,
    /// a seeded random deformation for families read from a file.
    pub fn deformation(
        &self,
        f: &MonomialFamily,
        seed: u64,
        limits: &Limits,
    ) -> Result<Vec<(u32, HomogeneousPolynomial)>> {
        match self {
            Source::Graph(g) => power_generators(g, limits),
            Source::Rho(r) => rho_power_generators(r, limits),
            Source::Kl { n, k, l } => kl_power_generators(*n, *k, *l, limits),
            Source::Hat(n) => hat_power_generators(&Digraph::complete(*n), limits),
            Source::Family(_) => random_deformation(f, seed, limits),
            Source::Poset(_) | Source::Matrix(_) => unreachable!("family() rejects these inputs first"),
        }
    }
}
