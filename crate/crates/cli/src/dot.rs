//! Graphviz rendering of a hierarchy.

use std::fmt::Write;

use mlrewrite_core::{ElementId, Kind, TypeAnnotations};

use crate::hierarchy::{Hierarchy, HierarchyError};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_id(graph: &str, node: &str) -> String {
    quote(&format!("{graph}/{node}"))
}

/// The lowest annotated level and its type, if any.
fn direct(annotations: &TypeAnnotations, e: &ElementId) -> Option<(usize, String)> {
    annotations
        .get(e)?
        .iter()
        .rev()
        .find_map(|(l, t)| t.as_ref().map(|t| (*l, t.clone())))
}

/// One cluster per graph on the path to `only` (or every graph), with
/// dashed edges from nodes to their direct types. Sibling graphs share a
/// level, so clusters follow graphs rather than levels.
pub fn export(h: &Hierarchy, only: Option<&str>) -> Result<String, HierarchyError> {
    let names: Vec<String> = match only {
        Some(g) => h.path(g)?,
        None => h.doc.graphs.iter().map(|b| b.name.clone()).collect(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&h.doc.name));
    let _ = writeln!(out, "  compound=true;");
    let mut typing_edges = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let block = h.block(name)?;
        let path = h.path(name)?;
        let _ = writeln!(out, "  subgraph cluster_{k} {{");
        let _ = writeln!(out, "    label={};", quote(name));
        for x in block.graph.nodes() {
            let label = match direct(&block.annotations, &ElementId::node(x)) {
                Some((_, t)) => format!("{x} : {t}"),
                None => x.to_string(),
            };
            let _ = writeln!(out, "    {} [label={}];", node_id(name, x), quote(&label));
            if let Some((level, t)) = direct(&block.annotations, &ElementId::node(x)) {
                if let Some(owner) = path.get(level).filter(|o| names.contains(o)) {
                    typing_edges.push((node_id(name, x), node_id(owner, &t), t));
                }
            }
        }
        for (a, ends) in block.graph.arrows() {
            let id = ElementId {
                kind: Kind::Arrow,
                name: a.to_string(),
            };
            let label = match direct(&block.annotations, &id) {
                Some((_, t)) => format!("{a} : {t}"),
                None => a.to_string(),
            };
            let _ = writeln!(
                out,
                "    {} -> {} [label={}];",
                node_id(name, &ends.src),
                node_id(name, &ends.tgt),
                quote(&label)
            );
        }
        let _ = writeln!(out, "  }}");
    }
    for (from, to, t) in typing_edges {
        let _ = writeln!(
            out,
            "  {from} -> {to} [style=dashed, arrowhead=empty, color=gray, label={}];",
            quote(&t)
        );
    }
    out.push_str("}\n");
    Ok(out)
}
