//! Finite directed multigraphs with name-based element identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::GraphError;

/// Whether an element is a node or an arrow. Nodes and arrows live in
/// separate namespaces, so the same name may denote one of each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Node,
    Arrow,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Node => f.write_str("node"),
            Kind::Arrow => f.write_str("arrow"),
        }
    }
}

/// A node or arrow name tagged with its kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId {
    pub kind: Kind,
    pub name: String,
}

impl ElementId {
    pub fn node(name: impl Into<String>) -> Self {
        ElementId {
            kind: Kind::Node,
            name: name.into(),
        }
    }

    pub fn arrow(name: impl Into<String>) -> Self {
        ElementId {
            kind: Kind::Arrow,
            name: name.into(),
        }
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.name)
    }
}

/// Source and target of an arrow.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ends {
    pub src: String,
    pub tgt: String,
}

/// A finite directed multigraph `(N, A, src, tgt)`.
///
/// Every arrow's endpoints are members of the node set; the constructors
/// refuse to build anything else.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    nodes: BTreeSet<String>,
    arrows: BTreeMap<String, Ends>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from node names and `(arrow, src, tgt)` triples.
    pub fn from_parts<N, A>(nodes: N, arrows: A) -> Result<Self, GraphError>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let mut g = Graph::new();
        for n in nodes {
            g.add_node(n)?;
        }
        for (a, s, t) in arrows {
            g.add_arrow(a, s, t)?;
        }
        Ok(g)
    }

    /// Shorthand for tests and examples: `Graph::build(&["a", "b"], &[("e", "a", "b")])`.
    pub fn build(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        Self::from_parts(
            nodes.iter().copied(),
            arrows
                .iter()
                .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        )
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> Result<(), GraphError> {
        let name = name.into();
        if name.is_empty() {
            return Err(GraphError::EmptyName);
        }
        if !self.nodes.insert(name.clone()) {
            return Err(GraphError::DuplicateElement(ElementId::node(name)));
        }
        Ok(())
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> Result<(), GraphError> {
        let (name, src, tgt) = (name.into(), src.into(), tgt.into());
        if name.is_empty() {
            return Err(GraphError::EmptyName);
        }
        if self.arrows.contains_key(&name) {
            return Err(GraphError::DuplicateElement(ElementId::arrow(name)));
        }
        for end in [&src, &tgt] {
            if !self.nodes.contains(end) {
                return Err(GraphError::MissingEndpoint {
                    arrow: name,
                    node: end.clone(),
                });
            }
        }
        self.arrows.insert(name, Ends { src, tgt });
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> + '_ {
        self.nodes.iter().map(String::as_str)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&str, &Ends)> + '_ {
        self.arrows.iter().map(|(a, e)| (a.as_str(), e))
    }

    pub fn arrow_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.arrows.keys().map(String::as_str)
    }

    /// All elements, nodes first, each group in name order.
    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.nodes
            .iter()
            .map(|n| ElementId::node(n.clone()))
            .chain(self.arrows.keys().map(|a| ElementId::arrow(a.clone())))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.arrows.is_empty()
    }

    pub fn has_node(&self, name: &str) -> bool {
        self.nodes.contains(name)
    }

    pub fn has_arrow(&self, name: &str) -> bool {
        self.arrows.contains_key(name)
    }

    pub fn contains(&self, e: &ElementId) -> bool {
        match e.kind {
            Kind::Node => self.has_node(&e.name),
            Kind::Arrow => self.has_arrow(&e.name),
        }
    }

    pub fn ends(&self, arrow: &str) -> Option<&Ends> {
        self.arrows.get(arrow)
    }

    pub fn src(&self, arrow: &str) -> Option<&str> {
        self.arrows.get(arrow).map(|e| e.src.as_str())
    }

    pub fn tgt(&self, arrow: &str) -> Option<&str> {
        self.arrows.get(arrow).map(|e| e.tgt.as_str())
    }

    /// `self ⊑ host`: node and arrow sets are contained and endpoints agree.
    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.nodes.is_subset(&host.nodes)
            && self
                .arrows
                .iter()
                .all(|(a, e)| host.arrows.get(a) == Some(e))
    }

    /// Intersection of two subgraphs of a common host.
    ///
    /// Arrows are kept only where both graphs agree on the endpoints, so the
    /// result is always a subgraph of both operands.
    pub fn intersection(&self, other: &Graph) -> Graph {
        let nodes: BTreeSet<String> = self.nodes.intersection(&other.nodes).cloned().collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|(a, e)| other.arrows.get(*a) == Some(*e))
            .map(|(a, e)| (a.clone(), e.clone()))
            .collect();
        Graph { nodes, arrows }
    }

    /// Union of two graphs that agree on shared arrow names.
    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.nodes.extend(other.nodes.iter().cloned());
        for (a, e) in &other.arrows {
            match g.arrows.get(a) {
                Some(existing) if existing != e => {
                    return Err(GraphError::ConflictingArrow(a.clone()));
                }
                Some(_) => {}
                None => {
                    g.arrows.insert(a.clone(), e.clone());
                }
            }
        }
        Ok(g)
    }

    /// The subgraph spanned by the given element names.
    ///
    /// Fails if a selected arrow has an endpoint that is not selected.
    pub fn induced<'a, N, A>(&self, nodes: N, arrows: A) -> Result<Graph, GraphError>
    where
        N: IntoIterator<Item = &'a str>,
        A: IntoIterator<Item = &'a str>,
    {
        let mut g = Graph::new();
        for n in nodes {
            if !self.has_node(n) {
                return Err(GraphError::UnknownElement(ElementId::node(n)));
            }
            g.nodes.insert(n.to_string());
        }
        for a in arrows {
            let e = self
                .arrows
                .get(a)
                .ok_or_else(|| GraphError::UnknownElement(ElementId::arrow(a)))?;
            if !g.nodes.contains(&e.src) || !g.nodes.contains(&e.tgt) {
                return Err(GraphError::NotClosed(ElementId::arrow(a)));
            }
            g.arrows.insert(a.to_string(), e.clone());
        }
        Ok(g)
    }

    /// Removes the given elements plus every arrow left dangling.
    pub fn without(&self, nodes: &BTreeSet<String>, arrows: &BTreeSet<String>) -> Graph {
        let kept_nodes: BTreeSet<String> = self.nodes.difference(nodes).cloned().collect();
        let kept_arrows = self
            .arrows
            .iter()
            .filter(|(a, e)| {
                !arrows.contains(*a) && kept_nodes.contains(&e.src) && kept_nodes.contains(&e.tgt)
            })
            .map(|(a, e)| (a.clone(), e.clone()))
            .collect();
        Graph {
            nodes: kept_nodes,
            arrows: kept_arrows,
        }
    }

    pub(crate) fn node_set(&self) -> &BTreeSet<String> {
        &self.nodes
    }
}

/// `g ⊑ h`.
pub fn subgraph_check(g: &Graph, h: &Graph) -> bool {
    g.is_subgraph_of(h)
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for n in &self.nodes {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{n}")?;
        }
        for (a, e) in &self.arrows {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{a}:{}->{}", e.src, e.tgt)?;
        }
        write!(f, "}}")
    }
}
