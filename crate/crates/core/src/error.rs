use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, sign constraints, non-tree edge sets and so on.
    #[error("validation error: {0}")]
    Validation(String),
    /// Matrix shape does not fit the operation.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// Singular matrix where a nonsingular one is required.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// A size guard was exceeded.
    #[error("capacity guard exceeded: {what} = {value} > {limit}")]
    Capacity {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    /// The mathematical precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The quotient algebra is infinite dimensional.
    #[error("infinite dimension: {0}")]
    InfiniteDimension(String),
    /// A proven identity failed to hold; indicates an implementation bug.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn capacity(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Error {
    Error::Capacity {
        what,
        value: value.into(),
        limit: limit.into(),
    }
}

/// Size guards for the exhaustive enumerations. `Default` gives the documented limits;
/// the CLI raises them only through an explicit override flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of edges for spanning-tree, forest and slim-subgraph sweeps.
    pub max_edges: usize,
    /// Maximum number of non-root vertices for subset sweeps (2^n subsets).
    pub max_subset_vars: usize,
    /// Maximum number of lattice points in a box enumeration of parking vectors.
    pub max_box: u128,
    /// Maximum number of monomials in one graded piece of a quotient.
    pub max_monomials_per_degree: usize,
    /// Maximum number of generators for the Scarf sweep.
    pub max_scarf_generators: usize,
    /// Maximum number of faces when building boundary matrices.
    pub max_faces: usize,
    /// Maximum number of stable configurations explored by the sandpile code.
    pub max_states: u128,
    /// Maximum n for permutation sweeps.
    pub max_permutation_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_edges: 24,
            max_subset_vars: 12,
            max_box: 1 << 26,
            max_monomials_per_degree: 20_000,
            max_scarf_generators: 20,
            max_faces: 1 << 16,
            max_states: 1 << 20,
            max_permutation_n: 9,
        }
    }
}

impl Limits {
    /// Every guard lifted to its type maximum.
    pub fn unbounded() -> Self {
        Limits {
            max_edges: 32,
            max_subset_vars: 24,
            max_box: u128::MAX,
            max_monomials_per_degree: usize::MAX,
            max_scarf_generators: 30,
            max_faces: usize::MAX,
            max_states: u128::MAX,
            max_permutation_n: 12,
        }
    }
}
