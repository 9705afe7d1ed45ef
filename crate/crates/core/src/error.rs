use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("leaf labels must be exactly 1..={expected}; found {found:?}")]
    LeafLabels { expected: usize, found: Vec<u32> },

    #[error("graph has {0} edges; at most 64 are supported")]
    TooManyEdges(usize),

    #[error("graph has {0} vertices; isomorphism search supports at most 16")]
    TooManyVertices(usize),

    #[error("automorphism group has {0} elements, too many to list")]
    GroupTooLarge(u128),

    #[error("(genus, leaves) = ({genus}, {leaves}) violates 2 - 2g - n < 0")]
    UnstableRange { genus: u32, leaves: u32 },

    #[error("{what} involves {size} edges, above the limit of {limit} (raise TROPMOD_MAX_EDGES to override)")]
    ScaleLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("base graph must be connected")]
    Disconnected,

    #[error("base graph is not a regular tropicalization (connected, trivalent, all weights 0)")]
    NotRegular,

    #[error("points are defined over different base graphs")]
    MismatchedBase,

    #[error("operation needs a point of the compactified cone, not the closed cone")]
    ClosedCone,

    #[error("invalid length `{0}` (expected a nonnegative rational such as 3/4, 0.5, 2, or `inf`)")]
    BadLength(String),

    #[error("coordinate `{0}` is not an edge of the base graph")]
    StrayCoordinate(String),

    #[error("missing coordinate for edge `{0}`")]
    MissingCoordinate(String),

    #[error("`inf` is not a valid length in the closed cone")]
    InfiniteInClosedCone,

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    /// A failed internal invariant. Never caused by user input.
    #[error("integrity violation: {0}")]
    Integrity(String),
}

impl Error {
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Integrity(_))
    }
}
