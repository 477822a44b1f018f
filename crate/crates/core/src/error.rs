use thiserror::Error;

/// Errors raised while building graphs, BIGs, designs and estimates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BigsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node `{node}` is not allowed in a simple graph")]
    SelfLoop { line: usize, node: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    /// Some motif cannot be observed from any frame unit (no ancestors).
    #[error("infeasible BIG representation: motif `{motif}` has no ancestors ({reason})")]
    NoAncestors { motif: String, reason: String },

    /// At least two nodes of a motif have infinite observation distance.
    #[error(
        "infeasible BIG representation of T-stage snowball sampling: motif `{motif}` has infinite \
         observation diameter (two or more of its nodes cannot reach the rest)"
    )]
    InfiniteObservationDiameter { motif: String },

    #[error("infeasible ACS representation: edge grid `{grid}` borders {networks} distinct networks")]
    AmbiguousEdgeGrid { grid: String, networks: usize },

    #[error("weights for motif `{motif}` sum to {sum}, expected 1")]
    WeightConstraint { motif: String, sum: String },

    #[error("ancestral violation: {0}")]
    AncestralViolation(String),

    #[error("joint inclusion probability of motifs `{0}` and `{1}` is zero")]
    ZeroJointInclusion(String, String),

    #[error(
        "design has {support} support points, above the enumeration cap of {cap}; use Monte Carlo"
    )]
    EnumerationCap { support: String, cap: u64 },

    #[error("invalid design: {0}")]
    InvalidDesign(String),
}

pub type Result<T> = std::result::Result<T, BigsError>;
