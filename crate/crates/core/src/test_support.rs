//! Small hierarchies and rules shared by unit tests.

use std::collections::BTreeSet;

use crate::chain::{MultilevelTyping, TypeAnnotations, TypingChain};
use crate::graph::{ElementId, Graph};
use crate::rule::{build_rule, Rule};

pub fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
    Graph::build(nodes, arrows).unwrap()
}

/// Annotations from `(element, level, type)` triples.
pub fn ann(entries: &[(ElementId, usize, &str)]) -> TypeAnnotations {
    let mut a = TypeAnnotations::new();
    for (e, l, t) in entries {
        a.entry(e.clone()).or_default().insert(*l, Some(t.to_string()));
    }
    a
}

pub fn n(name: &str) -> ElementId {
    ElementId::node(name)
}

pub fn a(name: &str) -> ElementId {
    ElementId::arrow(name)
}

pub fn ecore() -> Graph {
    g(&["EClass"], &[("EReference", "EClass", "EClass")])
}

/// [Ecore, generic_plant, hammer_plant].
pub fn plant_chain() -> TypingChain {
    let generic = g(&["Machine", "Part"], &[("creates", "Machine", "Part")]);
    let hammer = g(
        &["HeadGen", "Head", "Hammer"],
        &[("genHead", "HeadGen", "Head"), ("has", "Hammer", "Head")],
    );
    TypingChain::from_direct_types(
        vec![ecore(), generic, hammer],
        &[
            ann(&[
                (n("Machine"), 0, "EClass"),
                (n("Part"), 0, "EClass"),
                (a("creates"), 0, "EReference"),
            ]),
            ann(&[
                (n("HeadGen"), 1, "Machine"),
                (n("Head"), 1, "Part"),
                (n("Hammer"), 1, "Part"),
                (a("genHead"), 1, "creates"),
                (a("has"), 0, "EReference"),
            ]),
        ],
    )
    .unwrap()
}

/// `{ghead}` typed by HeadGen.
pub fn hammer_config_0(tg: &TypingChain) -> MultilevelTyping {
    MultilevelTyping::from_direct_types(&g(&["ghead"], &[]), tg, &ann(&[(n("ghead"), 2, "HeadGen")]))
        .unwrap()
}

/// [Ecore, (M1 -cr-> P1)].
pub fn plain_mm() -> TypingChain {
    let mm1 = g(&["M1", "P1"], &[("cr", "M1", "P1")]);
    TypingChain::from_direct_types(
        vec![ecore(), mm1],
        &[ann(&[
            (n("M1"), 0, "EClass"),
            (n("P1"), 0, "EClass"),
            (a("cr"), 0, "EReference"),
        ])],
    )
    .unwrap()
}

fn ecore_constants() -> BTreeSet<(usize, ElementId)> {
    BTreeSet::from([(0, n("EClass")), (0, a("EReference"))])
}

/// The plain rule creating a part for a machine.
pub fn plain_create_part() -> Rule {
    let mm = plain_mm();
    let l = g(&["m1"], &[]);
    let r = g(&["m1", "p1"], &[("c", "m1", "p1")]);
    let lt = MultilevelTyping::from_direct_types(&l, &mm, &ann(&[(n("m1"), 1, "M1")])).unwrap();
    let rt = MultilevelTyping::from_direct_types(
        &r,
        &mm,
        &ann(&[(n("m1"), 1, "M1"), (n("p1"), 1, "P1"), (a("c"), 1, "cr")]),
    )
    .unwrap();
    build_rule("CreatePart", &mm, lt, rt, ecore_constants()).unwrap()
}

/// A rule over the plain metamodel with the given sides, every node typed
/// by M1.
pub fn machine_rule(name: &str, l: Graph, r: Graph) -> Rule {
    let mm = plain_mm();
    let typed = |gr: &Graph| {
        let entries: Vec<(ElementId, usize, &str)> =
            gr.nodes().map(|x| (n(x), 1, "M1")).collect();
        MultilevelTyping::from_direct_types(gr, &mm, &ann(&entries)).unwrap()
    };
    build_rule(name, &mm, typed(&l), typed(&r), ecore_constants()).unwrap()
}
