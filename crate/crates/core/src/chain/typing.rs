use std::collections::{BTreeMap, BTreeSet};

use super::{ChainError, InclusionChain, LevelMap, TypeAt, TypingChain, TypingChainMorphism};
use crate::graph::{ElementId, Graph, Kind};
use crate::morphism::GraphMorphism;

/// Per-element type declarations: level ↦ type name, or `None` for an
/// element explicitly left untyped at that level. The highest level carrying
/// a name is the direct type; lower levels override the transitive closure.
pub type TypeAnnotations = BTreeMap<ElementId, BTreeMap<usize, Option<String>>>;

/// A graph typed over a typing chain: an inclusion chain on the graph and a
/// chain morphism into the target with the identity level map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilevelTyping {
    chain: InclusionChain,
    typing: TypingChainMorphism,
}

impl MultilevelTyping {
    pub fn new(chain: InclusionChain, typing: TypingChainMorphism) -> Result<Self, ChainError> {
        if typing.src() != chain.as_chain() || !typing.levels().is_identity() {
            return Err(ChainError::ChainMismatch);
        }
        Ok(MultilevelTyping { chain, typing })
    }

    /// From the levels `S_0 ⊒ S_i` of the subject and the maps `S_i → G_i`.
    pub fn from_levels(
        levels: Vec<Graph>,
        target: &TypingChain,
        maps: Vec<GraphMorphism>,
    ) -> Result<Self, ChainError> {
        let chain = InclusionChain::new(levels)?;
        if chain.depth() != target.depth() {
            return Err(ChainError::ChainMismatch);
        }
        let typing = TypingChainMorphism::new(
            chain.as_chain().clone(),
            target.clone(),
            LevelMap::identity(target.depth()),
            maps,
        )?;
        Ok(MultilevelTyping { chain, typing })
    }

    /// Types `subject` over `target` from its annotations, completing each
    /// element's typing by transitive closure from its direct type.
    pub fn from_direct_types(
        subject: &Graph,
        target: &TypingChain,
        annotations: &TypeAnnotations,
    ) -> Result<Self, ChainError> {
        let n = target.depth();
        for (e, levels) in annotations {
            if !subject.contains(e) {
                return Err(ChainError::UnknownElement {
                    level: n + 1,
                    element: e.clone(),
                });
            }
            if let Some(&level) = levels.keys().find(|&&l| l > n) {
                return Err(ChainError::LevelNotAbove {
                    element: e.clone(),
                    level,
                    subject_level: n + 1,
                });
            }
        }

        let mut node_maps = vec![BTreeMap::new(); n + 1];
        let mut arrow_maps = vec![BTreeMap::new(); n + 1];
        for e in subject.elements() {
            let levels = annotations.get(&e);
            let direct = levels.and_then(|ls| {
                ls.iter()
                    .rev()
                    .find_map(|(l, t)| t.as_ref().map(|t| (*l, t.clone())))
            });
            let Some((m, t)) = direct else {
                return Err(ChainError::UntypedElement(e));
            };
            let type_id = ElementId {
                kind: e.kind,
                name: t.clone(),
            };
            if !target.graph(m).contains(&type_id) {
                return Err(ChainError::DanglingTypeReference {
                    element: e,
                    level: m,
                    type_name: t,
                });
            }
            for k in 0..=m {
                let ty = if k == m {
                    Some(t.clone())
                } else {
                    match levels.and_then(|ls| ls.get(&k)) {
                        Some(declared) => declared.clone(),
                        None => target.tau(m, k).apply(&type_id).map(|x| x.name),
                    }
                };
                let Some(ty) = ty else { continue };
                let probe = ElementId {
                    kind: e.kind,
                    name: ty.clone(),
                };
                if !target.graph(k).contains(&probe) {
                    return Err(ChainError::DanglingTypeReference {
                        element: e,
                        level: k,
                        type_name: ty,
                    });
                }
                match e.kind {
                    Kind::Node => node_maps[k].insert(e.name.clone(), ty),
                    Kind::Arrow => arrow_maps[k].insert(e.name.clone(), ty),
                };
            }
            if !node_maps[0].contains_key(&e.name) && !arrow_maps[0].contains_key(&e.name) {
                return Err(ChainError::UntypedElement(e));
            }
        }

        let mut levels = Vec::with_capacity(n + 1);
        let mut maps = Vec::with_capacity(n + 1);
        for (k, (nodes, arrows)) in node_maps.into_iter().zip(arrow_maps).enumerate() {
            let at = |source| ChainError::AtLevel { level: k, source };
            let level = subject
                .induced(nodes.keys().map(String::as_str), arrows.keys().map(String::as_str))
                .map_err(at)?;
            let map = GraphMorphism::new(level.clone(), target.graph(k).clone(), nodes, arrows)
                .map_err(at)?;
            levels.push(level);
            maps.push(map);
        }
        Self::from_levels(levels, target, maps)
    }

    /// The smallest annotations that reproduce this typing through
    /// [`MultilevelTyping::from_direct_types`].
    pub fn annotations(&self) -> TypeAnnotations {
        let mut out = TypeAnnotations::new();
        let target = self.target();
        for e in self.subject().elements() {
            let Some(direct) = self.direct_type(&e) else {
                continue;
            };
            let entry = out.entry(e.clone()).or_default();
            entry.insert(direct.level, Some(direct.element.name.clone()));
            for k in 0..direct.level {
                let closure = target.tau(direct.level, k).apply(&direct.element);
                let actual = self.type_at(k, &e);
                if actual != closure {
                    entry.insert(k, actual.map(|x| x.name));
                }
            }
        }
        out
    }

    pub fn subject(&self) -> &Graph {
        self.chain.host()
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    pub fn chain(&self) -> &InclusionChain {
        &self.chain
    }

    pub fn morphism(&self) -> &TypingChainMorphism {
        &self.typing
    }

    pub fn target(&self) -> &TypingChain {
        self.typing.dst()
    }

    pub fn level(&self, i: usize) -> &Graph {
        self.chain.level(i)
    }

    /// `σ_i: S_i → G_i`.
    pub fn sigma(&self, i: usize) -> &GraphMorphism {
        self.typing.map(i)
    }

    /// The type of `e` at level `i`, if `e` is typed there.
    pub fn type_at(&self, i: usize, e: &ElementId) -> Option<ElementId> {
        self.sigma(i).apply(e)
    }

    /// The type at the deepest level where `e` is typed.
    pub fn direct_type(&self, e: &ElementId) -> Option<TypeAt> {
        (0..=self.depth()).rev().find_map(|k| {
            self.type_at(k, e).map(|t| TypeAt {
                level: k,
                element: t,
            })
        })
    }

    /// Elements whose typing at some level is missing although the
    /// closure of their direct type would define it.
    pub fn gaps(&self) -> BTreeSet<(usize, ElementId)> {
        let ann = self.annotations();
        ann.into_iter()
            .flat_map(|(e, ls)| {
                ls.into_iter()
                    .filter(|(_, t)| t.is_none())
                    .map(move |(l, _)| (l, e.clone()))
            })
            .collect()
    }
}
