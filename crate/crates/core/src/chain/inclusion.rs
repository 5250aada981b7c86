use std::collections::BTreeMap;

use super::{ChainError, TypingChain};
use crate::graph::{ElementId, Graph};
use crate::morphism::{GraphMorphism, PartialGraphMorphism};

/// A typing chain of subgraphs `H_n, …, H_1` of a host `H_0`, where each
/// typing `H_j ⇀ H_i` is the inclusion of `H_j ∩ H_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionChain {
    chain: TypingChain,
}

impl InclusionChain {
    /// `levels[0]` is the host; every other level must be a subgraph of it.
    pub fn new(levels: Vec<Graph>) -> Result<Self, ChainError> {
        let host = levels.first().ok_or(ChainError::EmptyChain)?;
        for (level, g) in levels.iter().enumerate().skip(1) {
            if !g.is_subgraph_of(host) {
                return Err(ChainError::NotASubgraph { level });
            }
        }
        let mut typing = BTreeMap::new();
        for j in 1..levels.len() {
            for i in 0..j {
                let common = levels[j].intersection(&levels[i]);
                let map = GraphMorphism::inclusion(&common, &levels[i])?;
                typing.insert((j, i), PartialGraphMorphism::new(levels[j].clone(), map)?);
            }
        }
        Ok(InclusionChain {
            chain: TypingChain::new(levels, typing)?,
        })
    }

    /// The chain with every level equal to `host`.
    pub fn constant(host: &Graph, depth: usize) -> Self {
        InclusionChain::new(vec![host.clone(); depth + 1]).expect("host is a subgraph of itself")
    }

    pub fn host(&self) -> &Graph {
        self.chain.graph(0)
    }

    pub fn level(&self, i: usize) -> &Graph {
        self.chain.graph(i)
    }

    pub fn levels(&self) -> &[Graph] {
        self.chain.graphs()
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    /// Whether `e` belongs to level `i`.
    pub fn contains(&self, i: usize, e: &ElementId) -> bool {
        self.level(i).contains(e)
    }

    pub fn as_chain(&self) -> &TypingChain {
        &self.chain
    }

    pub fn into_chain(self) -> TypingChain {
        self.chain
    }
}
