//! Total and partial graph homomorphisms.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GraphError;
use crate::graph::{ElementId, Graph, Kind};

/// A total graph homomorphism `dom → cod`.
///
/// Construction checks totality, that images exist in the codomain, and the
/// homomorphism law `f(src a) = src f(a)`, `f(tgt a) = tgt f(a)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphMorphism {
    dom: Graph,
    cod: Graph,
    nodes: BTreeMap<String, String>,
    arrows: BTreeMap<String, String>,
}

impl GraphMorphism {
    pub fn new(
        dom: Graph,
        cod: Graph,
        nodes: BTreeMap<String, String>,
        arrows: BTreeMap<String, String>,
    ) -> Result<Self, GraphError> {
        for n in dom.nodes() {
            let image = nodes
                .get(n)
                .ok_or_else(|| GraphError::NotTotal(ElementId::node(n)))?;
            if !cod.has_node(image) {
                return Err(GraphError::BadImage {
                    element: ElementId::node(n),
                    image: image.clone(),
                });
            }
        }
        if let Some(extra) = nodes.keys().find(|n| !dom.has_node(n)) {
            return Err(GraphError::UnknownElement(ElementId::node(extra.clone())));
        }
        for (a, ends) in dom.arrows() {
            let image = arrows
                .get(a)
                .ok_or_else(|| GraphError::NotTotal(ElementId::arrow(a)))?;
            let image_ends = cod.ends(image).ok_or_else(|| GraphError::BadImage {
                element: ElementId::arrow(a),
                image: image.clone(),
            })?;
            if nodes[&ends.src] != image_ends.src || nodes[&ends.tgt] != image_ends.tgt {
                return Err(GraphError::HomomorphismLaw(a.to_string()));
            }
        }
        if let Some(extra) = arrows.keys().find(|a| !dom.has_arrow(a)) {
            return Err(GraphError::UnknownElement(ElementId::arrow(extra.clone())));
        }
        Ok(GraphMorphism {
            dom,
            cod,
            nodes,
            arrows,
        })
    }

    /// Convenience constructor from `(from, to)` name pairs.
    pub fn from_pairs(
        dom: &Graph,
        cod: &Graph,
        nodes: &[(&str, &str)],
        arrows: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        Self::new(
            dom.clone(),
            cod.clone(),
            nodes
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            arrows
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            dom: g.clone(),
            cod: g.clone(),
            nodes: g.nodes().map(|n| (n.to_string(), n.to_string())).collect(),
            arrows: g
                .arrow_names()
                .map(|a| (a.to_string(), a.to_string()))
                .collect(),
        }
    }

    /// The inclusion `sub ↪ host`.
    pub fn inclusion(sub: &Graph, host: &Graph) -> Result<Self, GraphError> {
        if !sub.is_subgraph_of(host) {
            return Err(GraphError::NotASubgraph);
        }
        let mut m = Self::identity(sub);
        m.cod = host.clone();
        Ok(m)
    }

    pub fn dom(&self) -> &Graph {
        &self.dom
    }

    pub fn cod(&self) -> &Graph {
        &self.cod
    }

    pub fn node(&self, n: &str) -> Option<&str> {
        self.nodes.get(n).map(String::as_str)
    }

    pub fn arrow(&self, a: &str) -> Option<&str> {
        self.arrows.get(a).map(String::as_str)
    }

    pub fn apply(&self, e: &ElementId) -> Option<ElementId> {
        match e.kind {
            Kind::Node => self.node(&e.name).map(ElementId::node),
            Kind::Arrow => self.arrow(&e.name).map(ElementId::arrow),
        }
    }

    pub fn node_map(&self) -> &BTreeMap<String, String> {
        &self.nodes
    }

    pub fn arrow_map(&self) -> &BTreeMap<String, String> {
        &self.arrows
    }

    /// Diagrammatic composition `self ; next`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism, GraphError> {
        if self.cod != next.dom {
            return Err(GraphError::CodomainMismatch);
        }
        Ok(GraphMorphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            nodes: self
                .nodes
                .iter()
                .map(|(k, v)| (k.clone(), next.nodes[v].clone()))
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|(k, v)| (k.clone(), next.arrows[v].clone()))
                .collect(),
        })
    }

    /// True if every element is sent to the element of the same name.
    pub fn is_inclusion(&self) -> bool {
        self.nodes.iter().all(|(k, v)| k == v) && self.arrows.iter().all(|(k, v)| k == v)
    }

    pub fn is_injective(&self) -> bool {
        let n: BTreeSet<_> = self.nodes.values().collect();
        let a: BTreeSet<_> = self.arrows.values().collect();
        n.len() == self.nodes.len() && a.len() == self.arrows.len()
    }

    pub fn is_surjective(&self) -> bool {
        let n: BTreeSet<&str> = self.nodes.values().map(String::as_str).collect();
        let a: BTreeSet<&str> = self.arrows.values().map(String::as_str).collect();
        self.cod.nodes().all(|x| n.contains(x)) && self.cod.arrow_names().all(|x| a.contains(x))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Restriction to a subgraph of the domain.
    pub fn restrict(&self, sub: &Graph) -> Result<GraphMorphism, GraphError> {
        if !sub.is_subgraph_of(&self.dom) {
            return Err(GraphError::NotASubgraph);
        }
        Ok(GraphMorphism {
            dom: sub.clone(),
            cod: self.cod.clone(),
            nodes: sub
                .nodes()
                .map(|n| (n.to_string(), self.nodes[n].clone()))
                .collect(),
            arrows: sub
                .arrow_names()
                .map(|a| (a.to_string(), self.arrows[a].clone()))
                .collect(),
        })
    }

    /// Same element maps, new codomain. Re-validated against `cod`.
    pub fn with_codomain(&self, cod: &Graph) -> Result<GraphMorphism, GraphError> {
        GraphMorphism::new(
            self.dom.clone(),
            cod.clone(),
            self.nodes.clone(),
            self.arrows.clone(),
        )
    }

    /// The image, a subgraph of the codomain.
    pub fn image(&self) -> Graph {
        let nodes: BTreeSet<&str> = self.nodes.values().map(String::as_str).collect();
        let arrows: BTreeSet<&str> = self.arrows.values().map(String::as_str).collect();
        self.cod
            .induced(nodes, arrows)
            .expect("image of a homomorphism is closed")
    }

    /// `self⁻¹(sub)`: the largest subgraph of the domain mapped into `sub`.
    pub fn preimage(&self, sub: &Graph) -> Graph {
        let nodes = self
            .nodes
            .iter()
            .filter(|(_, v)| sub.has_node(v))
            .map(|(k, _)| k.as_str());
        let arrows = self
            .arrows
            .iter()
            .filter(|(_, v)| sub.has_arrow(v))
            .map(|(k, _)| k.as_str());
        self.dom
            .induced(nodes, arrows)
            .expect("preimage of a subgraph is closed")
    }
}

/// A partial graph homomorphism `dom ⇀ cod`: a domain of definition
/// `def ⊑ dom` together with a total homomorphism `def → cod`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialGraphMorphism {
    dom: Graph,
    map: GraphMorphism,
}

impl PartialGraphMorphism {
    /// `map.dom()` is taken as the domain of definition and must be a
    /// subgraph of `dom`.
    pub fn new(dom: Graph, map: GraphMorphism) -> Result<Self, GraphError> {
        if !map.dom().is_subgraph_of(&dom) {
            return Err(GraphError::NotASubgraph);
        }
        Ok(PartialGraphMorphism { dom, map })
    }

    pub fn total(map: GraphMorphism) -> Self {
        PartialGraphMorphism {
            dom: map.dom().clone(),
            map,
        }
    }

    /// The nowhere-defined morphism.
    pub fn empty(dom: &Graph, cod: &Graph) -> Self {
        PartialGraphMorphism {
            dom: dom.clone(),
            map: GraphMorphism::new(Graph::new(), cod.clone(), BTreeMap::new(), BTreeMap::new())
                .expect("empty map is a homomorphism"),
        }
    }

    pub fn dom(&self) -> &Graph {
        &self.dom
    }

    pub fn cod(&self) -> &Graph {
        self.map.cod()
    }

    /// Domain of definition.
    pub fn def(&self) -> &Graph {
        self.map.dom()
    }

    pub fn map(&self) -> &GraphMorphism {
        &self.map
    }

    pub fn is_total(&self) -> bool {
        *self.def() == self.dom
    }

    pub fn node(&self, n: &str) -> Option<&str> {
        self.map.node(n)
    }

    pub fn arrow(&self, a: &str) -> Option<&str> {
        self.map.arrow(a)
    }

    pub fn apply(&self, e: &ElementId) -> Option<ElementId> {
        self.map.apply(e)
    }

    /// `self ; next` with `def(self;next) = self⁻¹(def next)`.
    pub fn then(&self, next: &PartialGraphMorphism) -> Result<Self, GraphError> {
        if self.cod() != next.dom() {
            return Err(GraphError::CodomainMismatch);
        }
        let def = self.map.preimage(next.def());
        let first = self
            .map
            .restrict(&def)?
            .with_codomain(next.def())?;
        let map = first.then(&next.map)?;
        Ok(PartialGraphMorphism {
            dom: self.dom.clone(),
            map,
        })
    }

    /// `self ⪯ other`: defined on less and agreeing where defined.
    pub fn leq(&self, other: &PartialGraphMorphism) -> Result<bool, GraphError> {
        if self.dom != other.dom || self.cod() != other.cod() {
            return Err(GraphError::SignatureMismatch);
        }
        if !self.def().is_subgraph_of(other.def()) {
            return Ok(false);
        }
        Ok(self
            .map
            .node_map()
            .iter()
            .all(|(k, v)| other.node(k) == Some(v.as_str()))
            && self
                .map
                .arrow_map()
                .iter()
                .all(|(k, v)| other.arrow(k) == Some(v.as_str())))
    }

    /// Elements of `def(self)` where the two morphisms disagree or `other`
    /// is undefined.
    pub fn leq_witnesses(&self, other: &PartialGraphMorphism) -> Vec<ElementId> {
        self.def()
            .elements()
            .filter(|e| other.apply(e) != self.apply(e))
            .collect()
    }
}

/// Diagrammatic composition of partial morphisms.
pub fn compose_partial(
    phi: &PartialGraphMorphism,
    psi: &PartialGraphMorphism,
) -> Result<PartialGraphMorphism, GraphError> {
    phi.then(psi)
}

/// The order `phi ⪯ chi`.
pub fn leq_partial(phi: &PartialGraphMorphism, chi: &PartialGraphMorphism) -> Result<bool, GraphError> {
    phi.leq(chi)
}
