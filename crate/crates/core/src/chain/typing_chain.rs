use std::collections::BTreeMap;
use std::fmt;

use super::typing::{MultilevelTyping, TypeAnnotations};
use super::ChainError;
use crate::graph::{ElementId, Graph};
use crate::morphism::{GraphMorphism, PartialGraphMorphism};

/// A sequence of graphs `[G_n, …, G_0]` with partial typing morphisms
/// `τ(j, i): G_j ⇀ G_i` for every `j > i`. Index 0 is the top level.
///
/// Construction only checks that signatures line up; the chain axioms are
/// checked by [`TypingChain::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypingChain {
    graphs: Vec<Graph>,
    typing: BTreeMap<(usize, usize), PartialGraphMorphism>,
}

/// The type of an element at a given level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeAt {
    pub level: usize,
    pub element: ElementId,
}

pub type DirectType = TypeAt;

impl fmt::Display for TypeAt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.element.name, self.level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Total,
    Transitive,
    Connex,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Total => "total",
            Axiom::Transitive => "transitive",
            Axiom::Connex => "connex",
        })
    }
}

/// One violated axiom with its witnessing levels (`[j, 0]` or `[k, j, i]`)
/// and element of the lowest of those levels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub axiom: Axiom,
    pub levels: Vec<usize>,
    pub element: ElementId,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        write!(f, "{} at ({}) on {}", self.axiom, levels.join(","), self.element)
    }
}

/// Every violated axiom of a chain; empty for valid chains.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl TypingChain {
    /// The depth-0 chain `[g0]`.
    pub fn single(g0: Graph) -> Self {
        TypingChain {
            graphs: vec![g0],
            typing: BTreeMap::new(),
        }
    }

    /// `graphs[i]` is `G_i`; `typing` must hold exactly one morphism
    /// `G_j ⇀ G_i` for each `j > i`.
    pub fn new(
        graphs: Vec<Graph>,
        typing: BTreeMap<(usize, usize), PartialGraphMorphism>,
    ) -> Result<Self, ChainError> {
        if graphs.is_empty() {
            return Err(ChainError::EmptyChain);
        }
        let n = graphs.len() - 1;
        for (&(j, i), m) in &typing {
            if j > n || i >= j {
                return Err(ChainError::MalformedTyping { j, i });
            }
            if m.dom() != &graphs[j] || m.cod() != &graphs[i] {
                return Err(ChainError::MalformedTyping { j, i });
            }
        }
        for j in 1..=n {
            for i in 0..j {
                if !typing.contains_key(&(j, i)) {
                    return Err(ChainError::MalformedTyping { j, i });
                }
            }
        }
        Ok(TypingChain { graphs, typing })
    }

    /// Builds a chain from its graphs and, for each level `k ≥ 1`, the type
    /// annotations of `G_k` over the levels above (`annotations[k - 1]`).
    /// Typings are completed by transitive closure, then validated.
    pub fn from_direct_types(
        graphs: Vec<Graph>,
        annotations: &[TypeAnnotations],
    ) -> Result<Self, ChainError> {
        let mut it = graphs.into_iter();
        let mut chain = TypingChain::single(it.next().ok_or(ChainError::EmptyChain)?);
        for (k, g) in it.enumerate() {
            let empty = TypeAnnotations::new();
            let ann = annotations.get(k).unwrap_or(&empty);
            let typing = MultilevelTyping::from_direct_types(&g, &chain, ann)?;
            chain = chain.extend(&typing)?;
        }
        let report = chain.validate();
        if report.is_clean() {
            Ok(chain)
        } else {
            Err(ChainError::AxiomViolation(report))
        }
    }

    /// Appends the subject of `typing` as a new bottom level.
    pub fn extend(&self, typing: &MultilevelTyping) -> Result<TypingChain, ChainError> {
        if typing.target() != self {
            return Err(ChainError::ChainMismatch);
        }
        let top = self.graphs.len();
        let subject = typing.subject().clone();
        let mut next = self.clone();
        for k in 0..top {
            let m = PartialGraphMorphism::new(subject.clone(), typing.sigma(k).clone())?;
            next.typing.insert((top, k), m);
        }
        next.graphs.push(subject);
        Ok(next)
    }

    /// The chain `[G_d, …, G_0]`.
    pub fn prefix(&self, d: usize) -> TypingChain {
        TypingChain {
            graphs: self.graphs[..=d].to_vec(),
            typing: self
                .typing
                .iter()
                .filter(|((j, _), _)| *j <= d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.graphs.len() - 1
    }

    pub fn graph(&self, i: usize) -> &Graph {
        &self.graphs[i]
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    /// `τ(j, i)`; panics unless `depth ≥ j > i`.
    pub fn tau(&self, j: usize, i: usize) -> &PartialGraphMorphism {
        assert!(j > i, "typing morphisms only go upward");
        &self.typing[&(j, i)]
    }

    /// Replaces `τ(j, i)`, keeping the signature.
    pub fn replace_tau(
        &mut self,
        j: usize,
        i: usize,
        m: PartialGraphMorphism,
    ) -> Result<(), ChainError> {
        match self.typing.get_mut(&(j, i)) {
            Some(slot) if slot.dom() == m.dom() && slot.cod() == m.cod() => {
                *slot = m;
                Ok(())
            }
            _ => Err(ChainError::MalformedTyping { j, i }),
        }
    }

    /// Lists every violation of the Total, Transitive and Connex axioms.
    pub fn validate(&self) -> ValidationReport {
        let n = self.depth();
        let mut violations = Vec::new();
        for j in 1..=n {
            let t = self.tau(j, 0);
            for e in self.graphs[j].elements() {
                if t.apply(&e).is_none() {
                    violations.push(Violation {
                        axiom: Axiom::Total,
                        levels: vec![j, 0],
                        element: e,
                    });
                }
            }
        }
        for k in 2..=n {
            for j in 1..k {
                for i in 0..j {
                    let (kj, ki, ji) = (self.tau(k, j), self.tau(k, i), self.tau(j, i));
                    for e in self.graphs[k].elements() {
                        let via = kj.apply(&e);
                        let direct = ki.apply(&e);
                        let composite = via.as_ref().and_then(|x| ji.apply(x));
                        let axiom = match (&via, &direct, &composite) {
                            (_, _, Some(_)) if composite != direct => Some(Axiom::Transitive),
                            (Some(_), Some(_), None) => Some(Axiom::Connex),
                            _ => None,
                        };
                        if let Some(axiom) = axiom {
                            violations.push(Violation {
                                axiom,
                                levels: vec![k, j, i],
                                element: e,
                            });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_clean()
    }

    fn check_element(&self, i: usize, e: &ElementId) -> Result<(), ChainError> {
        if i > self.depth() {
            return Err(ChainError::LevelOutOfRange {
                level: i,
                depth: self.depth(),
            });
        }
        if !self.graphs[i].contains(e) {
            return Err(ChainError::UnknownElement {
                level: i,
                element: e.clone(),
            });
        }
        Ok(())
    }

    /// The type of `e ∈ G_i` at the greatest level `m < i` where it is
    /// defined. `None` for level 0 and for elements no typing reaches.
    pub fn direct_type(&self, i: usize, e: &ElementId) -> Result<Option<DirectType>, ChainError> {
        self.check_element(i, e)?;
        Ok((0..i).rev().find_map(|k| {
            self.tau(i, k).apply(e).map(|t| TypeAt {
                level: k,
                element: t,
            })
        }))
    }

    /// All defined types of `e ∈ G_i` strictly below its direct type's
    /// level, in descending level order.
    pub fn transitive_types(&self, i: usize, e: &ElementId) -> Result<Vec<TypeAt>, ChainError> {
        let Some(direct) = self.direct_type(i, e)? else {
            return Ok(Vec::new());
        };
        Ok((0..direct.level)
            .rev()
            .filter_map(|k| {
                self.tau(i, k).apply(e).map(|t| TypeAt {
                    level: k,
                    element: t,
                })
            })
            .collect())
    }

    /// The typing `G_j ⇀ G_i` seen as a total morphism on its domain.
    pub fn tau_map(&self, j: usize, i: usize) -> &GraphMorphism {
        self.tau(j, i).map()
    }
}
