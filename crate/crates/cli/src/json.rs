//! JSON mirrors of documents, matches and errors.

use std::collections::BTreeMap;

use mlrewrite_core::{GraphMorphism, MatchCandidate};
use serde::Serialize;

use crate::dsl::{GraphBlock, HierarchyDoc};

#[derive(Serialize)]
pub struct ArrowJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Serialize)]
pub struct TypeJson {
    pub element: String,
    pub kind: String,
    pub level: usize,
    /// `None` marks an explicitly untyped level.
    #[serde(rename = "type")]
    pub ty: Option<String>,
}

#[derive(Serialize)]
pub struct GraphJson {
    pub name: String,
    pub parent: Option<String>,
    pub nodes: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub types: Vec<TypeJson>,
}

#[derive(Serialize)]
pub struct HierarchyJson {
    pub name: String,
    pub graphs: Vec<GraphJson>,
}

pub fn graph(block: &GraphBlock) -> GraphJson {
    GraphJson {
        name: block.name.clone(),
        parent: block.parent.clone(),
        nodes: block.graph.nodes().map(str::to_string).collect(),
        arrows: block
            .graph
            .arrows()
            .map(|(a, e)| ArrowJson {
                name: a.to_string(),
                src: e.src.clone(),
                tgt: e.tgt.clone(),
            })
            .collect(),
        types: block
            .annotations
            .iter()
            .flat_map(|(e, levels)| {
                levels.iter().map(move |(l, t)| TypeJson {
                    element: e.name.clone(),
                    kind: e.kind.to_string(),
                    level: *l,
                    ty: t.clone(),
                })
            })
            .collect(),
    }
}

pub fn hierarchy(doc: &HierarchyDoc) -> HierarchyJson {
    HierarchyJson {
        name: doc.name.clone(),
        graphs: doc.graphs.iter().map(graph).collect(),
    }
}

#[derive(Serialize)]
pub struct MapJson {
    pub nodes: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

pub fn map(m: &GraphMorphism) -> MapJson {
    MapJson {
        nodes: m.node_map().clone(),
        arrows: m.arrow_map().clone(),
    }
}

#[derive(Serialize)]
pub struct MatchJson {
    pub index: usize,
    pub levels: Vec<usize>,
    pub beta: Vec<MapJson>,
    pub mu: MapJson,
}

pub fn candidate(index: usize, c: &MatchCandidate) -> MatchJson {
    MatchJson {
        index,
        levels: c.levels.images().to_vec(),
        beta: c.beta.maps().iter().map(map).collect(),
        mu: map(&c.mu),
    }
}

#[derive(Serialize)]
pub struct ErrorJson<'a> {
    pub kind: &'a str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
}
