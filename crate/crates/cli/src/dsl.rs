//! Line-oriented documents for hierarchies and rules, and their canonical
//! serialization.
//!
//! A hierarchy is a sequence of `graph` blocks; a block names its parent
//! with `graph child : parent`, which places it one level below. A rule has
//! a `meta` section (the metamodel chain, top level first, plus constants)
//! and `from` / `to` sections for its two sides. See `docs/grammar.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use mlrewrite_core::{ElementId, Graph, Kind, TypeAnnotations};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// A named graph with the direct-type annotations of its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphBlock {
    pub name: String,
    pub parent: Option<String>,
    pub graph: Graph,
    pub annotations: TypeAnnotations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyDoc {
    pub name: String,
    /// In document order; parents precede their children.
    pub graphs: Vec<GraphBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDoc {
    pub name: String,
    /// Metamodel levels, top first.
    pub meta: Vec<GraphBlock>,
    pub constants: BTreeSet<(usize, ElementId)>,
    pub from: (Graph, TypeAnnotations),
    pub to: (Graph, TypeAnnotations),
}

/// A type statement waiting for the whole body: line, kind qualifier,
/// element, level and type (`None` for `untyped`).
type Pending = (usize, Option<Kind>, String, usize, Option<String>);

/// Splits a line into words, with `:` and `@` always standing alone.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in line.split_whitespace() {
        let mut cur = String::new();
        for c in word.chars() {
            if c == ':' || c == '@' {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            } else {
                cur.push(c);
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank, non-comment line as `(number, tokens)`.
    fn next(&mut self) -> Option<(usize, Vec<String>)> {
        for (k, line) in self.inner.by_ref() {
            self.last = k + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with("//") {
                continue;
            }
            return Some((k + 1, tokens(trimmed)));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<String>), ParseError> {
        match self.next() {
            Some(x) => Ok(x),
            None => err(self.last + 1, format!("unexpected end of input, expected {what}")),
        }
    }
}

fn is_name(s: &str) -> bool {
    !matches!(s, ":" | "@" | "->")
}

fn name_at(toks: &[String], k: usize, line: usize, what: &str) -> Result<String, ParseError> {
    match toks.get(k) {
        Some(t) if is_name(t) => Ok(t.clone()),
        Some(t) => err(line, format!("expected {what}, found `{t}`")),
        None => err(line, format!("expected {what}")),
    }
}

fn expect_token(toks: &[String], k: usize, want: &str, line: usize) -> Result<(), ParseError> {
    match toks.get(k) {
        Some(t) if t == want => Ok(()),
        Some(t) => err(line, format!("expected `{want}`, found `{t}`")),
        None => err(line, format!("expected `{want}`")),
    }
}

fn no_more(toks: &[String], k: usize, line: usize) -> Result<(), ParseError> {
    match toks.get(k) {
        None => Ok(()),
        Some(t) => err(line, format!("unexpected `{t}`")),
    }
}

/// `L3` or `3`.
fn level_at(toks: &[String], k: usize, line: usize) -> Result<usize, ParseError> {
    let Some(t) = toks.get(k) else {
        return err(line, "expected a level");
    };
    let digits = t.strip_prefix('L').unwrap_or(t);
    digits
        .parse()
        .or_else(|_| err(line, format!("expected a level, found `{t}`")))
}

/// An optional `node` / `arrow` keyword before an element name; returns
/// the kind and the index of the name.
fn kind_prefix(toks: &[String]) -> (Option<Kind>, usize) {
    let kind = match toks.get(1).map(String::as_str) {
        Some("node") => Kind::Node,
        Some("arrow") => Kind::Arrow,
        _ => return (None, 1),
    };
    // `type node @ …` annotates an element called `node`.
    if toks.get(2).is_some_and(|t| t == "@") {
        (None, 1)
    } else {
        (Some(kind), 2)
    }
}

fn resolve(graph: &Graph, kind: Option<Kind>, name: &str, line: usize) -> Result<ElementId, ParseError> {
    if let Some(kind) = kind {
        let id = ElementId {
            kind,
            name: name.to_string(),
        };
        return if graph.contains(&id) {
            Ok(id)
        } else {
            err(line, format!("unknown {kind} `{name}`"))
        };
    }
    match (graph.has_node(name), graph.has_arrow(name)) {
        (true, false) => Ok(ElementId::node(name)),
        (false, true) => Ok(ElementId::arrow(name)),
        (true, true) => err(
            line,
            format!("`{name}` names both a node and an arrow; write `node {name}` or `arrow {name}`"),
        ),
        (false, false) => err(line, format!("unknown element `{name}`")),
    }
}

/// Statements of a graph body up to its `end`.
fn body(lines: &mut Lines) -> Result<(Graph, TypeAnnotations), ParseError> {
    let mut graph = Graph::new();
    let mut pending: Vec<Pending> = Vec::new();
    let mut arrows = Vec::new();
    loop {
        let (line, toks) = lines.expect("`end`")?;
        match toks[0].as_str() {
            "end" => {
                no_more(&toks, 1, line)?;
                break;
            }
            "node" => {
                let x = name_at(&toks, 1, line, "a node name")?;
                no_more(&toks, 2, line)?;
                graph
                    .add_node(x)
                    .or_else(|e| err(line, e.to_string()))?;
            }
            "arrow" => {
                let e = name_at(&toks, 1, line, "an arrow name")?;
                expect_token(&toks, 2, ":", line)?;
                let s = name_at(&toks, 3, line, "a source node")?;
                expect_token(&toks, 4, "->", line)?;
                let t = name_at(&toks, 5, line, "a target node")?;
                no_more(&toks, 6, line)?;
                // Endpoints may be declared later in the block.
                arrows.push((line, e, s, t));
            }
            "type" => {
                let (kind, k) = kind_prefix(&toks);
                let x = name_at(&toks, k, line, "an element name")?;
                expect_token(&toks, k + 1, "@", line)?;
                let level = level_at(&toks, k + 2, line)?;
                expect_token(&toks, k + 3, ":", line)?;
                let t = name_at(&toks, k + 4, line, "a type name")?;
                no_more(&toks, k + 5, line)?;
                pending.push((line, kind, x, level, Some(t)));
            }
            "untyped" => {
                let (kind, k) = kind_prefix(&toks);
                let x = name_at(&toks, k, line, "an element name")?;
                expect_token(&toks, k + 1, "@", line)?;
                let level = level_at(&toks, k + 2, line)?;
                no_more(&toks, k + 3, line)?;
                pending.push((line, kind, x, level, None));
            }
            other => return err(line, format!("unknown statement `{other}`")),
        }
    }
    for (line, e, s, t) in arrows {
        graph
            .add_arrow(e, s, t)
            .or_else(|e| err(line, e.to_string()))?;
    }
    let mut annotations = TypeAnnotations::new();
    for (line, kind, x, level, t) in pending {
        let id = resolve(&graph, kind, &x, line)?;
        let slot = annotations.entry(id).or_default();
        if slot.insert(level, t).is_some() {
            return err(line, format!("`{x}` is annotated twice at level {level}"));
        }
    }
    Ok((graph, annotations))
}

fn graph_header(toks: &[String], line: usize) -> Result<(String, Option<String>), ParseError> {
    let name = name_at(toks, 1, line, "a graph name")?;
    if toks.len() == 2 {
        return Ok((name, None));
    }
    expect_token(toks, 2, ":", line)?;
    let parent = name_at(toks, 3, line, "a parent graph name")?;
    no_more(toks, 4, line)?;
    Ok((name, Some(parent)))
}

pub fn parse_hierarchy(text: &str) -> Result<HierarchyDoc, ParseError> {
    let mut lines = Lines::new(text);
    let (line, toks) = lines.expect("`hierarchy`")?;
    expect_token(&toks, 0, "hierarchy", line)?;
    let name = name_at(&toks, 1, line, "a hierarchy name")?;
    no_more(&toks, 2, line)?;
    let mut graphs: Vec<GraphBlock> = Vec::new();
    while let Some((line, toks)) = lines.next() {
        expect_token(&toks, 0, "graph", line)?;
        let (name, parent) = graph_header(&toks, line)?;
        if graphs.iter().any(|g| g.name == name) {
            return err(line, format!("graph `{name}` is declared twice"));
        }
        if let Some(p) = &parent {
            if !graphs.iter().any(|g| &g.name == p) {
                return err(line, format!("parent `{p}` must be declared before `{name}`"));
            }
        }
        let (graph, annotations) = body(&mut lines)?;
        graphs.push(GraphBlock {
            name,
            parent,
            graph,
            annotations,
        });
    }
    if graphs.is_empty() {
        return err(lines.last.max(1), "a hierarchy needs at least one graph");
    }
    Ok(HierarchyDoc { name, graphs })
}

pub fn parse_rule(text: &str) -> Result<RuleDoc, ParseError> {
    let mut lines = Lines::new(text);
    let (line, toks) = lines.expect("`rule`")?;
    expect_token(&toks, 0, "rule", line)?;
    let name = name_at(&toks, 1, line, "a rule name")?;
    no_more(&toks, 2, line)?;

    let (line, toks) = lines.expect("`meta`")?;
    expect_token(&toks, 0, "meta", line)?;
    no_more(&toks, 1, line)?;
    let mut meta: Vec<GraphBlock> = Vec::new();
    let mut constants = BTreeSet::new();
    loop {
        let (line, toks) = lines.expect("`end`")?;
        match toks[0].as_str() {
            "end" => {
                no_more(&toks, 1, line)?;
                break;
            }
            "graph" => {
                let name = name_at(&toks, 1, line, "a graph name")?;
                no_more(&toks, 2, line)?;
                let (graph, annotations) = body(&mut lines)?;
                meta.push(GraphBlock {
                    name,
                    parent: None,
                    graph,
                    annotations,
                });
            }
            "const" => {
                let (kind, k) = kind_prefix(&toks);
                let x = name_at(&toks, k, line, "an element name")?;
                expect_token(&toks, k + 1, "@", line)?;
                let level = level_at(&toks, k + 2, line)?;
                no_more(&toks, k + 3, line)?;
                let Some(block) = meta.get(level) else {
                    return err(line, format!("no metamodel graph at level {level}"));
                };
                constants.insert((level, resolve(&block.graph, kind, &x, line)?));
            }
            other => return err(line, format!("unknown statement `{other}` in meta")),
        }
    }
    if meta.is_empty() {
        return err(lines.last, "the metamodel needs at least one graph");
    }
    let mut side = |keyword: &str| -> Result<(Graph, TypeAnnotations), ParseError> {
        let (line, toks) = lines.expect(&format!("`{keyword}`"))?;
        expect_token(&toks, 0, keyword, line)?;
        no_more(&toks, 1, line)?;
        body(&mut lines)
    };
    let from = side("from")?;
    let to = side("to")?;
    if let Some((line, toks)) = lines.next() {
        return err(line, format!("unexpected `{}` after the rule", toks[0]));
    }
    Ok(RuleDoc {
        name,
        meta,
        constants,
        from,
        to,
    })
}

/// The name, qualified by its kind only when it would be ambiguous.
fn element_ref(graph: &Graph, kind: Kind, name: &str) -> String {
    if graph.has_node(name) && graph.has_arrow(name) {
        format!("{kind} {name}")
    } else {
        name.to_string()
    }
}

fn write_body(out: &mut String, indent: &str, graph: &Graph, annotations: &TypeAnnotations) {
    for x in graph.nodes() {
        let _ = writeln!(out, "{indent}node {x}");
    }
    for (e, ends) in graph.arrows() {
        let _ = writeln!(out, "{indent}arrow {e}: {} -> {}", ends.src, ends.tgt);
    }
    // Nodes before arrows, then by name and level.
    let ordered: BTreeMap<(Kind, &str), &BTreeMap<usize, Option<String>>> = annotations
        .iter()
        .map(|(e, ls)| ((e.kind, e.name.as_str()), ls))
        .collect();
    for ((kind, name), levels) in ordered {
        let subject = element_ref(graph, kind, name);
        for (level, t) in levels {
            match t {
                Some(t) => {
                    let _ = writeln!(out, "{indent}type {subject} @ {level}:{t}");
                }
                None => {
                    let _ = writeln!(out, "{indent}untyped {subject} @ {level}");
                }
            }
        }
    }
}

pub fn write_hierarchy(doc: &HierarchyDoc) -> String {
    let mut out = format!("hierarchy {}\n", doc.name);
    for g in &doc.graphs {
        out.push('\n');
        match &g.parent {
            Some(p) => {
                let _ = writeln!(out, "graph {} : {p}", g.name);
            }
            None => {
                let _ = writeln!(out, "graph {}", g.name);
            }
        }
        write_body(&mut out, "  ", &g.graph, &g.annotations);
        out.push_str("end\n");
    }
    out
}

pub fn write_rule(doc: &RuleDoc) -> String {
    let mut out = format!("rule {}\n\nmeta\n", doc.name);
    for (k, g) in doc.meta.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "  graph {}", g.name);
        write_body(&mut out, "    ", &g.graph, &g.annotations);
        out.push_str("  end\n");
    }
    if !doc.constants.is_empty() {
        out.push('\n');
    }
    for (level, e) in &doc.constants {
        let subject = element_ref(&doc.meta[*level].graph, e.kind, &e.name);
        let _ = writeln!(out, "  const {subject} @ {level}");
    }
    out.push_str("end\n");
    for (keyword, (graph, annotations)) in [("from", &doc.from), ("to", &doc.to)] {
        let _ = writeln!(out, "\n{keyword}");
        write_body(&mut out, "  ", graph, annotations);
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANTS: &str = "hierarchy plants

graph Ecore
  node EClass
  arrow EReference: EClass -> EClass
end

graph generic_plant : Ecore
  node Machine
  node Part
  arrow creates: Machine -> Part
  type Machine @ 0:EClass
  type Part @ 0:EClass
  type creates @ 0:EReference
end
";

    #[test]
    fn canonical_hierarchy_round_trips() {
        let doc = parse_hierarchy(PLANTS).unwrap();
        assert_eq!(doc.graphs.len(), 2);
        assert_eq!(doc.graphs[1].parent.as_deref(), Some("Ecore"));
        assert_eq!(write_hierarchy(&doc), PLANTS);
    }

    #[test]
    fn loose_syntax_is_accepted() {
        let text = "// plants\nhierarchy h\ngraph a\n  arrow e:x->y\nend\n";
        // `x->y` is one token, so this is malformed.
        assert!(parse_hierarchy(text).is_err());
        let text = "hierarchy h\n\n  graph a\n arrow e : x -> y\n node x\nnode y\n end\ngraph b:a\nnode u\ntype u @L0:x\nend";
        let doc = parse_hierarchy(text).unwrap();
        assert_eq!(doc.graphs[0].graph.arrow_count(), 1);
        let canonical = write_hierarchy(&doc);
        assert_eq!(parse_hierarchy(&canonical).unwrap(), doc);
        assert!(canonical.contains("type u @ 0:x"));
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_hierarchy("hierarchy h\ngraph a\n  node x\n  type y @ 0:T\nend\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_hierarchy("hierarchy h\ngraph a : b\nend\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_hierarchy("hierarchy h\ngraph a\n  node x\n").unwrap_err();
        assert!(e.message.contains("end"), "{e}");
        let e = parse_hierarchy("hierarchy h\ngraph a\n  nod x\nend\n").unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (3, "unknown statement `nod`"));
        let e = parse_hierarchy("hierarchy h\ngraph a\n  node x\n  arrow x: x -> x\n  type x @ 0:T\nend\n")
            .unwrap_err();
        assert!(e.message.contains("both"), "{e}");
    }

    #[test]
    fn shared_names_are_qualified() {
        let text = "hierarchy h\n\ngraph a\n  node x\n  arrow x: x -> x\n  type node x @ 0:T\n  type arrow x @ 0:U\nend\n";
        let doc = parse_hierarchy(text).unwrap();
        assert_eq!(doc.graphs[0].annotations.len(), 2);
        assert_eq!(write_hierarchy(&doc), text);
        // A node literally called `node`.
        let text = "hierarchy h\n\ngraph a\n  node node\n  type node @ 0:T\nend\n";
        let doc = parse_hierarchy(text).unwrap();
        assert_eq!(write_hierarchy(&doc), text);
    }

    #[test]
    fn rule_round_trips() {
        let text = "rule CreatePart

meta
  graph Ecore
    node EClass
    arrow EReference: EClass -> EClass
  end

  graph MM1
    node M1
    node P1
    arrow cr: M1 -> P1
    type M1 @ 0:EClass
    type P1 @ 0:EClass
    type cr @ 0:EReference
  end

  const EClass @ 0
  const EReference @ 0
end

from
  node m1
  type m1 @ 1:M1
end

to
  node m1
  node p1
  arrow c: m1 -> p1
  type m1 @ 1:M1
  type p1 @ 1:P1
  type c @ 1:cr
end
";
        let doc = parse_rule(text).unwrap();
        assert_eq!(doc.meta.len(), 2);
        assert_eq!(doc.constants.len(), 2);
        assert_eq!(write_rule(&doc), text);
    }

    #[test]
    fn untyped_overrides_are_kept() {
        let text = "hierarchy h\n\ngraph a\n  node x\n  untyped x @ 0\n  type x @ 1:T\nend\n";
        let doc = parse_hierarchy(text).unwrap();
        assert_eq!(doc.graphs[0].annotations[&ElementId::node("x")][&0], None);
        assert_eq!(write_hierarchy(&doc), text);
    }
}
