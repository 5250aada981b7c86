//! A tree of typed graphs: every path from the root is a typing chain and
//! the leaves are models typed over their parent's chain.

use std::collections::BTreeMap;

use mlrewrite_core::{ChainError, MultilevelTyping, TypingChain};
use thiserror::Error;

use crate::dsl::{GraphBlock, HierarchyDoc};

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("unknown graph `{0}`")]
    UnknownGraph(String),
    #[error("graph `{0}` is at the root and has no metamodel")]
    Root(String),
    #[error("graph `{name}`: {source}")]
    Graph { name: String, source: ChainError },
    #[error("graph `{name}` depends on invalid graph `{bad}`")]
    Ancestor { name: String, bad: String },
}

/// One problem found by [`Hierarchy::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub graph: String,
    pub message: String,
}

pub struct Hierarchy {
    pub doc: HierarchyDoc,
    index: BTreeMap<String, usize>,
}

impl Hierarchy {
    pub fn new(doc: HierarchyDoc) -> Self {
        let index = doc
            .graphs
            .iter()
            .enumerate()
            .map(|(k, b)| (b.name.clone(), k))
            .collect();
        Hierarchy { doc, index }
    }

    pub fn block(&self, name: &str) -> Result<&GraphBlock, HierarchyError> {
        self.index
            .get(name)
            .map(|&k| &self.doc.graphs[k])
            .ok_or_else(|| HierarchyError::UnknownGraph(name.to_string()))
    }

    /// Graph names from the root down to `name`.
    pub fn path(&self, name: &str) -> Result<Vec<String>, HierarchyError> {
        let mut out = vec![name.to_string()];
        let mut cur = self.block(name)?;
        while let Some(p) = &cur.parent {
            out.push(p.clone());
            cur = self.block(p)?;
        }
        out.reverse();
        Ok(out)
    }

    pub fn level(&self, name: &str) -> Result<usize, HierarchyError> {
        Ok(self.path(name)?.len() - 1)
    }

    pub fn children(&self, name: &str) -> Vec<&str> {
        self.doc
            .graphs
            .iter()
            .filter(|b| b.parent.as_deref() == Some(name))
            .map(|b| b.name.as_str())
            .collect()
    }

    pub fn is_leaf(&self, name: &str) -> bool {
        self.children(name).is_empty()
    }

    pub fn leaves(&self) -> Vec<&str> {
        self.doc
            .graphs
            .iter()
            .map(|b| b.name.as_str())
            .filter(|n| self.is_leaf(n))
            .collect()
    }

    /// The typing of `name` over its parent's chain.
    pub fn typing(&self, name: &str) -> Result<MultilevelTyping, HierarchyError> {
        let block = self.block(name)?;
        let Some(parent) = &block.parent else {
            return Err(HierarchyError::Root(name.to_string()));
        };
        let chain = self.chain(parent)?;
        MultilevelTyping::from_direct_types(&block.graph, &chain, &block.annotations).map_err(|source| {
            HierarchyError::Graph {
                name: name.to_string(),
                source,
            }
        })
    }

    /// The validated chain ending at `name`.
    pub fn chain(&self, name: &str) -> Result<TypingChain, HierarchyError> {
        let block = self.block(name)?;
        let chain = match &block.parent {
            None => TypingChain::single(block.graph.clone()),
            Some(_) => {
                let typing = self.typing(name)?;
                typing
                    .target()
                    .extend(&typing)
                    .map_err(|source| HierarchyError::Graph {
                        name: name.to_string(),
                        source,
                    })?
            }
        };
        let report = chain.validate();
        if report.is_clean() {
            Ok(chain)
        } else {
            Err(HierarchyError::Graph {
                name: name.to_string(),
                source: ChainError::AxiomViolation(report),
            })
        }
    }

    /// Every graph is checked once. Inner graphs must end a valid chain;
    /// leaves only need a well-formed typing, since models may leave
    /// elements untyped at some levels.
    pub fn validate(&self) -> Vec<Problem> {
        let mut bad: BTreeMap<&str, ()> = BTreeMap::new();
        let mut out = Vec::new();
        // Parents come before children in a parsed document.
        for b in &self.doc.graphs {
            if let Some(p) = b.parent.as_deref().filter(|p| bad.contains_key(p)) {
                bad.insert(&b.name, ());
                out.push(Problem {
                    graph: b.name.clone(),
                    message: HierarchyError::Ancestor {
                        name: b.name.clone(),
                        bad: p.to_string(),
                    }
                    .to_string(),
                });
                continue;
            }
            let result = if self.is_leaf(&b.name) && b.parent.is_some() {
                self.typing(&b.name).map(|_| ())
            } else {
                self.chain(&b.name).map(|_| ())
            };
            if let Err(e) = result {
                bad.insert(&b.name, ());
                out.push(Problem {
                    graph: b.name.clone(),
                    message: e.to_string(),
                });
            }
        }
        out
    }

    /// Replaces the graph and annotations of `name`.
    pub fn replace(&mut self, name: &str, typing: &MultilevelTyping) -> Result<(), HierarchyError> {
        let k = *self
            .index
            .get(name)
            .ok_or_else(|| HierarchyError::UnknownGraph(name.to_string()))?;
        let block = &mut self.doc.graphs[k];
        block.graph = typing.subject().clone();
        block.annotations = typing.annotations();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_hierarchy;

    const TEXT: &str = "hierarchy h
graph top
  node C
  arrow r: C -> C
end
graph mid: top
  node A
  node B
  arrow ab: A -> B
  type A @ 0:C
  type B @ 0:C
  type ab @ 0:r
end
graph model: mid
  node a
  type a @ 1:A
end
";

    #[test]
    fn paths_and_leaves() {
        let h = Hierarchy::new(parse_hierarchy(TEXT).unwrap());
        assert_eq!(h.path("model").unwrap(), ["top", "mid", "model"]);
        assert_eq!(h.level("mid").unwrap(), 1);
        assert_eq!(h.leaves(), ["model"]);
        assert!(h.validate().is_empty());
        let t = h.typing("model").unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(h.chain("mid").unwrap().depth(), 1);
    }

    #[test]
    fn problems_propagate_to_descendants() {
        let broken = TEXT.replace("  type B @ 0:C\n", "");
        let h = Hierarchy::new(parse_hierarchy(&broken).unwrap());
        let problems = h.validate();
        assert_eq!(problems.len(), 2, "{problems:?}");
        assert_eq!(problems[0].graph, "mid");
        assert!(problems[1].message.contains("depends on"));
    }

    #[test]
    fn unknown_types_are_reported() {
        let broken = TEXT.replace("1:A", "1:Z");
        let h = Hierarchy::new(parse_hierarchy(&broken).unwrap());
        let problems = h.validate();
        assert_eq!(problems.len(), 1);
        assert_eq!(problems[0].graph, "model");
        assert!(problems[0].message.contains("does not exist"), "{}", problems[0].message);
    }

    #[test]
    fn a_single_graph_is_a_depth_zero_chain() {
        let h = Hierarchy::new(parse_hierarchy("hierarchy h\ngraph only\n  node x\nend\n").unwrap());
        assert!(h.validate().is_empty());
        assert_eq!(h.chain("only").unwrap().depth(), 0);
        assert!(matches!(h.typing("only"), Err(HierarchyError::Root(_))));
    }
}
