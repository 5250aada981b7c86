//! The plant hierarchy and the CreatePart rules.

use std::collections::BTreeSet;

use mlrewrite_core::{
    build_rule, ElementId, Graph, MultilevelTyping, Rule, TypeAnnotations, TypingChain,
};

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

pub fn generic_plant() -> Graph {
    g(&["Machine", "Part"], &[("creates", "Machine", "Part")])
}

fn generic_ann() -> TypeAnnotations {
    ann(&[
        (n("Machine"), 0, "EClass"),
        (n("Part"), 0, "EClass"),
        (a("creates"), 0, "EReference"),
    ])
}

/// `[Ecore, generic_plant, hammer_plant]`.
pub fn hammer_chain() -> TypingChain {
    let hammer = g(
        &["HeadGen", "Head", "Hammer"],
        &[("genHead", "HeadGen", "Head"), ("has", "Hammer", "Head")],
    );
    TypingChain::from_direct_types(
        vec![ecore(), generic_plant(), hammer],
        &[
            generic_ann(),
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

/// `[Ecore, generic_plant, stool_plant]`.
pub fn stool_chain() -> TypingChain {
    let stool = g(&["LegGen", "Leg"], &[("createsLeg", "LegGen", "Leg")]);
    TypingChain::from_direct_types(
        vec![ecore(), generic_plant(), stool],
        &[
            generic_ann(),
            ann(&[
                (n("LegGen"), 1, "Machine"),
                (n("Leg"), 1, "Part"),
                (a("createsLeg"), 1, "creates"),
            ]),
        ],
    )
    .unwrap()
}

/// `{ghead}` typed by HeadGen.
pub fn hammer_config_0() -> MultilevelTyping {
    MultilevelTyping::from_direct_types(
        &g(&["ghead"], &[]),
        &hammer_chain(),
        &ann(&[(n("ghead"), 2, "HeadGen")]),
    )
    .unwrap()
}

fn ecore_constants() -> BTreeSet<(usize, ElementId)> {
    BTreeSet::from([(0, n("EClass")), (0, a("EReference"))])
}

fn create_part(name: &str, mm: TypingChain, level: usize, constants: BTreeSet<(usize, ElementId)>) -> Rule {
    let l = g(&["m1"], &[]);
    let r = g(&["m1", "p1"], &[("c", "m1", "p1")]);
    let lt = MultilevelTyping::from_direct_types(&l, &mm, &ann(&[(n("m1"), level, "M1")])).unwrap();
    let rt = MultilevelTyping::from_direct_types(
        &r,
        &mm,
        &ann(&[(n("m1"), level, "M1"), (n("p1"), level, "P1"), (a("c"), level, "cr")]),
    )
    .unwrap();
    build_rule(name, &mm, lt, rt, constants).unwrap()
}

/// CreatePart over `[Ecore, (M1 -cr-> P1)]`.
pub fn plain_create_part() -> Rule {
    let mm = TypingChain::from_direct_types(
        vec![ecore(), g(&["M1", "P1"], &[("cr", "M1", "P1")])],
        &[ann(&[
            (n("M1"), 0, "EClass"),
            (n("P1"), 0, "EClass"),
            (a("cr"), 0, "EReference"),
        ])],
    )
    .unwrap();
    create_part("CreatePart", mm, 1, ecore_constants())
}

/// CreatePart over `[Ecore, generic_plant, (M1 -cr-> P1)]` with Machine,
/// creates and Part as constants.
pub fn full_create_part() -> Rule {
    let mm = TypingChain::from_direct_types(
        vec![
            ecore(),
            generic_plant(),
            g(&["M1", "P1"], &[("cr", "M1", "P1")]),
        ],
        &[
            generic_ann(),
            ann(&[
                (n("M1"), 1, "Machine"),
                (n("P1"), 1, "Part"),
                (a("cr"), 1, "creates"),
            ]),
        ],
    )
    .unwrap();
    let mut constants = ecore_constants();
    constants.extend([(1, n("Machine")), (1, n("Part")), (1, a("creates"))]);
    create_part("CreatePart", mm, 2, constants)
}

/// `L = {x, y}`, `R = {x}`: deletes `y`, so any match identifying the two
/// has no pullback complement.
pub fn delete_one_of_two() -> Rule {
    let mm = TypingChain::from_direct_types(
        vec![ecore(), g(&["M1"], &[])],
        &[ann(&[(n("M1"), 0, "EClass")])],
    )
    .unwrap();
    let l = g(&["x", "y"], &[]);
    let r = g(&["x"], &[]);
    let lt = MultilevelTyping::from_direct_types(&l, &mm, &ann(&[(n("x"), 1, "M1"), (n("y"), 1, "M1")])).unwrap();
    let rt = MultilevelTyping::from_direct_types(&r, &mm, &ann(&[(n("x"), 1, "M1")])).unwrap();
    build_rule("DeleteOne", &mm, lt, rt, ecore_constants()).unwrap()
}
