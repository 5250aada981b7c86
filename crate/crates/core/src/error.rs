use thiserror::Error;

use crate::graph::ElementId;

/// Failures of graph-level constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("element names must be non-empty")]
    EmptyName,
    #[error("duplicate {0}")]
    DuplicateElement(ElementId),
    #[error("arrow {arrow} refers to missing node {node}")]
    MissingEndpoint { arrow: String, node: String },
    #[error("arrow {0} has different endpoints in the two graphs")]
    ConflictingArrow(String),
    #[error("unknown {0}")]
    UnknownElement(ElementId),
    #[error("{0} is selected without its endpoints")]
    NotClosed(ElementId),
    #[error("{0} is not mapped")]
    NotTotal(ElementId),
    #[error("{element} is mapped to {image}, which is not in the codomain")]
    BadImage { element: ElementId, image: String },
    #[error("arrow {0} violates the homomorphism law")]
    HomomorphismLaw(String),
    #[error("domain of definition is not a subgraph of the domain")]
    NotASubgraph,
    #[error("codomain of the first morphism differs from the domain of the second")]
    CodomainMismatch,
    #[error("morphisms do not share domain and codomain")]
    SignatureMismatch,
    #[error("morphism is not an inclusion")]
    NotInclusion,
    #[error("deleted {deleted} and preserved {preserved} are both sent to {image}; no final pullback complement exists")]
    IdentificationConflict {
        deleted: ElementId,
        preserved: ElementId,
        image: String,
    },
    #[error("constructed square is not a pullback: {0}")]
    PullbackViolation(String),
}
