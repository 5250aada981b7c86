//! Multilevel typed cospan rules `L ↪ I ↩ R` with `I = L ∪ R`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::chain::{reduct, ChainError, LevelMap, MultilevelTyping, TypingChain, TypingChainMorphism};
use crate::error::GraphError;
use crate::graph::{ElementId, Graph, Kind};
use crate::morphism::GraphMorphism;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("left-hand side has depth {lhs}, right-hand side has depth {rhs}, metamodel has depth {mm}")]
    DepthMismatch { lhs: usize, rhs: usize, mm: usize },
    #[error("left- and right-hand side are typed over different metamodels")]
    MetamodelMismatch,
    #[error("{element} is shared by both sides but typed at level {level} on one side only")]
    CoherenceViolation { level: usize, element: ElementId },
    #[error("{element} is typed by {lhs_type} on the left and {rhs_type} on the right at level {level}")]
    TypingDisagreement {
        level: usize,
        element: ElementId,
        lhs_type: String,
        rhs_type: String,
    },
    #[error("both sides declare arrow {0} with different endpoints")]
    UnionConflict(String),
    #[error("constant {element} does not exist at metamodel level {level}")]
    UnknownConstant { level: usize, element: ElementId },
}

/// A coherent rule over a metamodel chain. Elements shared by name between
/// the two sides are the same element of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    name: String,
    mm: TypingChain,
    lhs: MultilevelTyping,
    rhs: MultilevelTyping,
    union: MultilevelTyping,
    lambda: TypingChainMorphism,
    rho: TypingChainMorphism,
    constants: BTreeSet<(usize, ElementId)>,
}

fn levelwise_inclusion(
    sub: &MultilevelTyping,
    sup: &MultilevelTyping,
) -> Result<TypingChainMorphism, RuleError> {
    let incl = GraphMorphism::inclusion(sub.subject(), sup.subject())?;
    let n = sup.depth();
    let (chain, morphism) = reduct(sup.chain(), &incl, &LevelMap::identity(n))?;
    if &chain != sub.chain() {
        let level = (0..=n)
            .find(|&i| chain.level(i) != sub.level(i))
            .unwrap_or(0);
        let element = sub
            .level(level)
            .elements()
            .chain(chain.level(level).elements())
            .find(|e| sub.level(level).contains(e) != chain.level(level).contains(e))
            .expect("levels differ");
        return Err(RuleError::CoherenceViolation { level, element });
    }
    Ok(morphism)
}

/// Builds the union typing of `I` and the reduct morphisms `λ` and `ρ`.
pub fn build_rule(
    name: impl Into<String>,
    mm: &TypingChain,
    lhs: MultilevelTyping,
    rhs: MultilevelTyping,
    constants: BTreeSet<(usize, ElementId)>,
) -> Result<Rule, RuleError> {
    let n = mm.depth();
    if lhs.depth() != n || rhs.depth() != n {
        return Err(RuleError::DepthMismatch {
            lhs: lhs.depth(),
            rhs: rhs.depth(),
            mm: n,
        });
    }
    if lhs.target() != mm || rhs.target() != mm {
        return Err(RuleError::MetamodelMismatch);
    }
    for (level, element) in &constants {
        if *level > n || !mm.graph(*level).contains(element) {
            return Err(RuleError::UnknownConstant {
                level: *level,
                element: element.clone(),
            });
        }
    }

    let (l, r) = (lhs.subject(), rhs.subject());
    let union = l.union(r).map_err(|e| match e {
        GraphError::ConflictingArrow(a) => RuleError::UnionConflict(a),
        other => RuleError::Graph(other),
    })?;

    let shared = l.intersection(r);
    for i in 0..=n {
        for e in shared.elements() {
            if lhs.level(i).contains(&e) != rhs.level(i).contains(&e) {
                return Err(RuleError::CoherenceViolation { level: i, element: e });
            }
        }
    }
    for i in 0..=n {
        for e in lhs.level(i).intersection(rhs.level(i)).elements() {
            let (a, b) = (lhs.type_at(i, &e).unwrap(), rhs.type_at(i, &e).unwrap());
            if a != b {
                return Err(RuleError::TypingDisagreement {
                    level: i,
                    element: e,
                    lhs_type: a.name,
                    rhs_type: b.name,
                });
            }
        }
    }

    let mut levels = Vec::with_capacity(n + 1);
    let mut maps = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let level = if i == 0 {
            union.clone()
        } else {
            lhs.level(i).union(rhs.level(i))?
        };
        let mut nodes = BTreeMap::new();
        let mut arrows = BTreeMap::new();
        for side in [&lhs, &rhs] {
            let s = side.sigma(i);
            nodes.extend(s.node_map().iter().map(|(k, v)| (k.clone(), v.clone())));
            arrows.extend(s.arrow_map().iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        maps.push(GraphMorphism::new(level.clone(), mm.graph(i).clone(), nodes, arrows)?);
        levels.push(level);
    }
    let union = MultilevelTyping::from_levels(levels, mm, maps)?;
    let lambda = levelwise_inclusion(&lhs, &union)?;
    let rho = levelwise_inclusion(&rhs, &union)?;
    Ok(Rule {
        name: name.into(),
        mm: mm.clone(),
        lhs,
        rhs,
        union,
        lambda,
        rho,
        constants,
    })
}

impl Rule {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.mm.depth()
    }

    pub fn metamodel(&self) -> &TypingChain {
        &self.mm
    }

    pub fn lhs(&self) -> &MultilevelTyping {
        &self.lhs
    }

    pub fn rhs(&self) -> &MultilevelTyping {
        &self.rhs
    }

    /// The typing of `I = L ∪ R`.
    pub fn union(&self) -> &MultilevelTyping {
        &self.union
    }

    /// `(λ, id): L-chain → I-chain`.
    pub fn lambda(&self) -> &TypingChainMorphism {
        &self.lambda
    }

    /// `(ρ, id): R-chain → I-chain`.
    pub fn rho(&self) -> &TypingChainMorphism {
        &self.rho
    }

    /// Metamodel elements that only match identically named targets.
    pub fn constants(&self) -> &BTreeSet<(usize, ElementId)> {
        &self.constants
    }

    /// `I ∖ R`, the elements the rule deletes.
    pub fn deletes(&self) -> BTreeSet<ElementId> {
        difference(self.union.subject(), self.rhs.subject())
    }

    /// `I ∖ L`, the elements the rule creates.
    pub fn creates(&self) -> BTreeSet<ElementId> {
        difference(self.union.subject(), self.lhs.subject())
    }

    /// Rebuilds the rule from its own sides.
    pub fn rebuild(&self) -> Result<Rule, RuleError> {
        build_rule(
            self.name.clone(),
            &self.mm,
            self.lhs.clone(),
            self.rhs.clone(),
            self.constants.clone(),
        )
    }
}

fn difference(a: &Graph, b: &Graph) -> BTreeSet<ElementId> {
    a.elements().filter(|e| !b.contains(e)).collect()
}

/// `I ∖ R` of a rule.
pub fn rule_deletes(rule: &Rule) -> BTreeSet<ElementId> {
    rule.deletes()
}

/// Convenience for constants given as `(level, kind, name)`.
pub fn constant_set<'a>(items: impl IntoIterator<Item = (usize, Kind, &'a str)>) -> BTreeSet<(usize, ElementId)> {
    items
        .into_iter()
        .map(|(l, kind, name)| {
            (
                l,
                ElementId {
                    kind,
                    name: name.to_string(),
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::TypeAnnotations;

    fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
        Graph::build(nodes, arrows).unwrap()
    }

    fn ann(entries: &[(ElementId, usize, &str)]) -> TypeAnnotations {
        let mut a = TypeAnnotations::new();
        for (e, l, t) in entries {
            a.entry(e.clone()).or_default().insert(*l, Some(t.to_string()));
        }
        a
    }

    /// [MM_1 = (M1 -cr-> P1), Ecore].
    fn plain_mm() -> TypingChain {
        let ecore = g(&["EClass"], &[("EReference", "EClass", "EClass")]);
        let mm1 = g(&["M1", "P1"], &[("cr", "M1", "P1")]);
        TypingChain::from_direct_types(
            vec![ecore, mm1],
            &[ann(&[
                (ElementId::node("M1"), 0, "EClass"),
                (ElementId::node("P1"), 0, "EClass"),
                (ElementId::arrow("cr"), 0, "EReference"),
            ])],
        )
        .unwrap()
    }

    fn create_part(mm: &TypingChain) -> (MultilevelTyping, MultilevelTyping) {
        let l = g(&["m1"], &[]);
        let r = g(&["m1", "p1"], &[("c", "m1", "p1")]);
        let lt = MultilevelTyping::from_direct_types(&l, mm, &ann(&[(ElementId::node("m1"), 1, "M1")]))
            .unwrap();
        let rt = MultilevelTyping::from_direct_types(
            &r,
            mm,
            &ann(&[
                (ElementId::node("m1"), 1, "M1"),
                (ElementId::node("p1"), 1, "P1"),
                (ElementId::arrow("c"), 1, "cr"),
            ]),
        )
        .unwrap();
        (lt, rt)
    }

    #[test]
    fn create_part_union_is_rhs() {
        let mm = plain_mm();
        let (lt, rt) = create_part(&mm);
        let rule = build_rule("CreatePart", &mm, lt.clone(), rt.clone(), BTreeSet::new()).unwrap();
        assert_eq!(rule.union().subject(), rt.subject());
        assert_eq!(rule.union().morphism().maps(), rt.morphism().maps());
        assert_eq!(rule.lhs().level(1), lt.subject());
        assert!(rule.deletes().is_empty());
        assert_eq!(rule.creates().len(), 2);
        assert!(rule.lambda().is_closed() && rule.rho().is_closed());
        assert_eq!(rule.rebuild().unwrap(), rule);
    }

    #[test]
    fn no_op_rule() {
        let mm = plain_mm();
        let (lt, _) = create_part(&mm);
        let rule = build_rule("noop", &mm, lt.clone(), lt.clone(), BTreeSet::new()).unwrap();
        assert_eq!(rule.union(), &lt);
        assert!(rule.deletes().is_empty() && rule.creates().is_empty());
    }

    #[test]
    fn conflicting_types_on_shared_node() {
        let mm = plain_mm();
        let (lt, _) = create_part(&mm);
        let r = g(&["m1"], &[]);
        let rt = MultilevelTyping::from_direct_types(&r, &mm, &ann(&[(ElementId::node("m1"), 1, "P1")]))
            .unwrap();
        assert_eq!(
            build_rule("bad", &mm, lt, rt, BTreeSet::new()),
            Err(RuleError::TypingDisagreement {
                level: 1,
                element: ElementId::node("m1"),
                lhs_type: "M1".into(),
                rhs_type: "P1".into(),
            })
        );
    }

    #[test]
    fn shared_node_typed_on_one_side_only() {
        let mm = plain_mm();
        let (lt, _) = create_part(&mm);
        let r = g(&["m1"], &[]);
        let rt = MultilevelTyping::from_direct_types(&r, &mm, &ann(&[(ElementId::node("m1"), 0, "EClass")]))
            .unwrap();
        assert_eq!(
            build_rule("bad", &mm, lt, rt, BTreeSet::new()),
            Err(RuleError::CoherenceViolation {
                level: 1,
                element: ElementId::node("m1"),
            })
        );
    }

    #[test]
    fn deletion_set() {
        let mm = plain_mm();
        let l = g(&["x", "y"], &[]);
        let r = g(&["x"], &[]);
        let typed = |gr: &Graph| {
            let mut a = TypeAnnotations::new();
            for e in gr.elements() {
                a.entry(e).or_default().insert(1, Some("M1".into()));
            }
            MultilevelTyping::from_direct_types(gr, &mm, &a).unwrap()
        };
        let rule = build_rule("del", &mm, typed(&l), typed(&r), BTreeSet::new()).unwrap();
        assert_eq!(rule_deletes(&rule), BTreeSet::from([ElementId::node("y")]));
    }

    #[test]
    fn unknown_constant() {
        let mm = plain_mm();
        let (lt, rt) = create_part(&mm);
        let c = constant_set([(1, Kind::Node, "Machine")]);
        assert!(matches!(
            build_rule("c", &mm, lt, rt, c),
            Err(RuleError::UnknownConstant { level: 1, .. })
        ));
    }
}
