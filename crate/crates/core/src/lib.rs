//! Multilevel typed graph transformation.
//!
//! Graphs and (partial) graph homomorphisms, typing chains and their
//! morphisms, multilevel typed rules, match finding and rule application
//! by a pushout followed by a final pullback complement.

pub mod apply;
pub mod chain;
pub mod error;
pub mod graph;
pub mod limits;
pub mod matching;
pub mod morphism;
pub mod rule;
pub mod search;
#[cfg(test)]
mod test_support;

pub use error::GraphError;
pub use graph::{ElementId, Ends, Graph, Kind};
pub use morphism::{compose_partial, leq_partial, GraphMorphism, PartialGraphMorphism};
pub use apply::{apply_rule, fpbc_step, pushout_step, ApplicationResult, ApplyError, FpbcStep, PushoutStep};
pub use chain::{
    ChainError, InclusionChain, LevelMap, MultilevelTyping, TypeAnnotations, TypingChain,
    TypingChainMorphism, ValidationReport,
};
pub use matching::{
    check_match, enumerate_chain_morphisms, enumerate_level_maps, find_matches, MatchCandidate,
    MatchDiagnostic, MatchError, MatchOptions, Pins,
};
pub use rule::{build_rule, rule_deletes, Rule, RuleError};
