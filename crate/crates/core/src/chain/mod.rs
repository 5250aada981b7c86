//! Typing chains, inclusion chains, level maps, chain morphisms, multilevel
//! typings and reducts.

mod inclusion;
mod level_map;
mod morphism;
mod reduct;
mod typing;
mod typing_chain;

pub use inclusion::InclusionChain;
pub use level_map::LevelMap;
pub use morphism::{CompatibilityViolation, TypingChainMorphism};
pub use reduct::{closed_with_pullback_intersections, left_squares_are_pullbacks, reduct};
pub use typing::{MultilevelTyping, TypeAnnotations};
pub use typing_chain::{Axiom, DirectType, TypeAt, TypingChain, ValidationReport, Violation};

use thiserror::Error;

use crate::error::GraphError;
use crate::graph::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("at level {level}: {source}")]
    AtLevel { level: usize, source: GraphError },
    #[error("a chain needs at least one graph")]
    EmptyChain,
    #[error("typing morphism {j} -> {i} is missing or has the wrong signature")]
    MalformedTyping { j: usize, i: usize },
    #[error("level {level} is out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("{element} does not exist at level {level}")]
    UnknownElement { level: usize, element: ElementId },
    #[error("{element} is typed by {type_name} at level {level}, which does not exist there")]
    DanglingTypeReference {
        element: ElementId,
        level: usize,
        type_name: String,
    },
    #[error("{element} is annotated at level {level}, which is not strictly above level {subject_level}")]
    LevelNotAbove {
        element: ElementId,
        level: usize,
        subject_level: usize,
    },
    #[error("{0} has no type at level 0")]
    UntypedElement(ElementId),
    #[error("level {level} is not a subgraph of the host")]
    NotASubgraph { level: usize },
    #[error("chain violates its axioms:\n{0}")]
    AxiomViolation(ValidationReport),
    #[error("{0}")]
    Incompatible(CompatibilityViolation),
    #[error("chains or level maps do not line up")]
    ChainMismatch,
    #[error("map at level {level} has the wrong domain or codomain")]
    MapSignature { level: usize },
    #[error("invalid level map: {0}")]
    BadLevelMap(String),
}
