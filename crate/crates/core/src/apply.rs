//! Rule application: a pushout along `L ↪ I` followed by a final pullback
//! complement along `R ↪ I`, lifted to inclusion chains.
//!
//! The pushout is computed once at the base level; every other level of the
//! result is assembled directly as `ς(S_f(i)) ∪ δ(I_i)`, while levels outside
//! the image of `f` are copied from the host.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::chain::{ChainError, LevelMap, MultilevelTyping, TypingChainMorphism};
use crate::error::GraphError;
use crate::graph::{ElementId, Graph, Kind};
use crate::limits::{final_pullback_complement, pushout_inclusion};
use crate::matching::{check_match, MatchCandidate, MatchDiagnostic};
use crate::morphism::GraphMorphism;
use crate::rule::Rule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("match is not valid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    MatchInvalid(Vec<MatchDiagnostic>),
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Chain(#[from] ChainError),
}

impl ApplyError {
    /// Whether the failure is a missing final pullback complement.
    pub fn is_identification_conflict(&self) -> bool {
        matches!(self, ApplyError::Graph(GraphError::IdentificationConflict { .. }))
    }
}

/// Result of the pushout step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutStep {
    /// The typed chain on `D`.
    pub d: MultilevelTyping,
    /// `(ς, id): S-chain → D-chain`.
    pub sigma_incl: TypingChainMorphism,
    /// `(δ, f): I-chain → D-chain`.
    pub delta: TypingChainMorphism,
    /// New elements whose names had to be changed.
    pub renamed: BTreeMap<ElementId, String>,
    pub trace: Vec<String>,
}

/// Result of the pullback complement step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpbcStep {
    /// The typed chain on `T`.
    pub t: MultilevelTyping,
    /// `(θ, id): T-chain → D-chain`.
    pub theta: TypingChainMorphism,
    /// `(ν, f): R-chain → T-chain`.
    pub nu: TypingChainMorphism,
    pub trace: Vec<String>,
}

/// Everything produced by one rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplicationResult {
    pub d: MultilevelTyping,
    pub t: MultilevelTyping,
    pub sigma_incl: TypingChainMorphism,
    pub delta: TypingChainMorphism,
    pub theta: TypingChainMorphism,
    pub nu: TypingChainMorphism,
    pub renamed: BTreeMap<ElementId, String>,
    pub trace: Vec<String>,
}

fn names(g: &Graph) -> String {
    let mut parts: Vec<String> = g.nodes().map(str::to_string).collect();
    parts.extend(g.arrow_names().map(str::to_string));
    if parts.is_empty() {
        "nothing".into()
    } else {
        parts.join(", ")
    }
}

fn list(items: &BTreeSet<ElementId>) -> String {
    if items.is_empty() {
        "nothing".into()
    } else {
        items.iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join(", ")
    }
}

/// Restricts `m` to `sub` and corestricts it to `cod`.
fn restrict(m: &GraphMorphism, sub: &Graph, cod: &Graph) -> Result<GraphMorphism, GraphError> {
    m.restrict(sub)?.with_codomain(cod)
}

pub fn pushout_step(
    rule: &Rule,
    mat: &MatchCandidate,
    host: &MultilevelTyping,
) -> Result<PushoutStep, ApplyError> {
    let mut diagnostics = check_match(rule, host, &mat.mu, &mat.beta);
    if &mat.levels != mat.beta.levels() {
        diagnostics.push(MatchDiagnostic::SignatureMismatch(
            "level map of the match differs from that of β".into(),
        ));
    }
    if !diagnostics.is_empty() {
        return Err(ApplyError::MatchInvalid(diagnostics));
    }
    let union = rule.union();
    let lhs = rule.lhs();
    let f: &LevelMap = &mat.levels;
    let m = host.depth();
    let mut trace = Vec::new();

    let lambda0 = GraphMorphism::inclusion(lhs.subject(), union.subject())?;
    let po = pushout_inclusion(&lambda0, &mat.mu)?;
    let delta0 = po.map;
    let d0 = po.apex;
    trace.push(format!("pushout at level 0 adds {}", list(&rule.creates())));
    for (e, new) in &po.renamed {
        trace.push(format!("renamed new {} {} to {}", e.kind, e.name, new));
    }

    // New elements of D and their origin in I.
    let origin: BTreeMap<ElementId, ElementId> = rule
        .creates()
        .into_iter()
        .map(|e| (delta0.apply(&e).expect("total map"), e))
        .collect();

    let mut levels = Vec::with_capacity(m + 1);
    let mut maps = Vec::with_capacity(m + 1);
    let preimage: BTreeMap<usize, usize> = (0..=f.n()).map(|i| (f.get(i), i)).collect();
    let mut gaps = Vec::new();
    for a in 0..=m {
        let s_a = host.level(a);
        let level = match preimage.get(&a) {
            Some(_) if a == 0 => d0.clone(),
            Some(&i) => {
                let added = delta0.restrict(union.level(i))?.image();
                trace.push(format!(
                    "level {a}: host level joined with the image of rule level {i} ({})",
                    names(&added)
                ));
                s_a.union(&added)?
            }
            None => {
                gaps.push(a.to_string());
                s_a.clone()
            }
        };
        let mut node_types = BTreeMap::new();
        let mut arrow_types = BTreeMap::new();
        for x in level.elements() {
            let ty = if s_a.contains(&x) {
                host.type_at(a, &x)
            } else {
                let i = preimage[&a];
                let y = &origin[&x];
                union
                    .type_at(i, y)
                    .and_then(|t| mat.beta.map(i).apply(&t))
            }
            .expect("every element of a level is typed there");
            match x.kind {
                Kind::Node => node_types.insert(x.name, ty.name),
                Kind::Arrow => arrow_types.insert(x.name, ty.name),
            };
        }
        maps.push(
            GraphMorphism::new(level.clone(), host.target().graph(a).clone(), node_types, arrow_types)
                .map_err(|source| ChainError::AtLevel { level: a, source })?,
        );
        levels.push(level);
    }
    if gaps.is_empty() {
        trace.push("gap filling: f hits every level, nothing to copy".into());
    } else {
        trace.push(format!("gap filling: levels {} copied from the host", gaps.join(", ")));
    }
    let d = MultilevelTyping::from_levels(levels, host.target(), maps)?;

    let sigma_maps = (0..=m)
        .map(|a| GraphMorphism::inclusion(host.level(a), d.level(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma_incl = TypingChainMorphism::new(
        host.chain().as_chain().clone(),
        d.chain().as_chain().clone(),
        LevelMap::identity(m),
        sigma_maps,
    )?;
    let delta_maps = (0..=rule.depth())
        .map(|i| restrict(&delta0, union.level(i), d.level(f.get(i))))
        .collect::<Result<Vec<_>, _>>()?;
    let delta = TypingChainMorphism::new(
        union.chain().as_chain().clone(),
        d.chain().as_chain().clone(),
        f.clone(),
        delta_maps,
    )?;
    Ok(PushoutStep {
        d,
        sigma_incl,
        delta,
        renamed: po.renamed,
        trace,
    })
}

pub fn fpbc_step(rule: &Rule, po: &PushoutStep) -> Result<FpbcStep, ApplyError> {
    let d = &po.d;
    let rhs = rule.rhs();
    let f = po.delta.levels();
    let m = d.depth();
    let rho0 = GraphMorphism::inclusion(rhs.subject(), rule.union().subject())?;
    let delta0 = po.delta.map(0);
    let pc = final_pullback_complement(&rho0, delta0)?;
    let t0 = pc.apex;

    let mut trace = Vec::new();
    let deleted: BTreeSet<ElementId> = rule
        .deletes()
        .iter()
        .map(|e| delta0.apply(e).expect("total map"))
        .collect();
    let dangling: BTreeSet<ElementId> = d
        .subject()
        .elements()
        .filter(|e| !t0.contains(e) && !deleted.contains(e))
        .collect();
    trace.push(format!("pullback complement deletes {}", list(&deleted)));
    if !dangling.is_empty() {
        trace.push(format!("dangling arrows removed: {}", list(&dangling)));
    }

    let levels: Vec<Graph> = (0..=m).map(|a| t0.intersection(d.level(a))).collect();
    let maps = levels
        .iter()
        .enumerate()
        .map(|(a, g)| restrict(d.sigma(a), g, d.target().graph(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let t = MultilevelTyping::from_levels(levels, d.target(), maps)?;

    let theta_maps = (0..=m)
        .map(|a| GraphMorphism::inclusion(t.level(a), d.level(a)))
        .collect::<Result<Vec<_>, _>>()?;
    let theta = TypingChainMorphism::new(
        t.chain().as_chain().clone(),
        d.chain().as_chain().clone(),
        LevelMap::identity(m),
        theta_maps,
    )?;
    let nu_maps = (0..=rule.depth())
        .map(|i| restrict(&pc.comatch, rhs.level(i), t.level(f.get(i))))
        .collect::<Result<Vec<_>, _>>()?;
    let nu = TypingChainMorphism::new(
        rhs.chain().as_chain().clone(),
        t.chain().as_chain().clone(),
        f.clone(),
        nu_maps,
    )?;
    Ok(FpbcStep { t, theta, nu, trace })
}

/// Applies `rule` at `mat` in `host`.
pub fn apply_rule(
    rule: &Rule,
    mat: &MatchCandidate,
    host: &MultilevelTyping,
) -> Result<ApplicationResult, ApplyError> {
    let po = pushout_step(rule, mat, host)?;
    let pc = fpbc_step(rule, &po)?;
    let mut trace = po.trace;
    trace.extend(pc.trace);
    Ok(ApplicationResult {
        d: po.d,
        t: pc.t,
        sigma_incl: po.sigma_incl,
        delta: po.delta,
        theta: pc.theta,
        nu: pc.nu,
        renamed: po.renamed,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{find_matches, MatchOptions};
    use crate::test_support::*;

    fn only_match(rule: &Rule, host: &MultilevelTyping, f: &[usize]) -> MatchCandidate {
        let options = MatchOptions {
            level_map: Some(LevelMap::new(f.to_vec(), host.depth()).unwrap()),
            ..MatchOptions::default()
        };
        let mut found = find_matches(rule, host, &options).unwrap();
        assert_eq!(found.len(), 1, "expected a single match");
        found.pop().unwrap()
    }

    #[test]
    fn create_part_on_single_machine() {
        let tg = plant_chain();
        let host = hammer_config_0(&tg);
        let rule = plain_create_part();
        let mat = only_match(&rule, &host, &[0, 1]);
        assert_eq!(mat.mu.node("m1"), Some("ghead"));
        let res = apply_rule(&rule, &mat, &host).unwrap();
        let expected = g(&["ghead", "p1"], &[("c", "ghead", "p1")]);
        assert_eq!(res.d.subject(), &expected);
        assert_eq!(res.d.level(1), &expected);
        assert_eq!(res.d.level(2), host.level(2));
        let p1 = res.d.direct_type(&n("p1")).unwrap();
        assert_eq!((p1.level, p1.element.name.as_str()), (1, "Part"));
        let c = res.d.direct_type(&a("c")).unwrap();
        assert_eq!((c.level, c.element.name.as_str()), (1, "creates"));
        assert_eq!(res.t, res.d);
        assert!(res.theta.maps().iter().all(|m| m.is_isomorphism()));
        assert!(res.renamed.is_empty());
    }

    #[test]
    fn no_op_rule_keeps_host() {
        let tg = plant_chain();
        let host = hammer_config_0(&tg);
        let rule = machine_rule("noop", g(&["m1"], &[]), g(&["m1"], &[]));
        let mat = only_match(&rule, &host, &[0, 1]);
        let res = apply_rule(&rule, &mat, &host).unwrap();
        assert_eq!(&res.d, &host);
        assert_eq!(&res.t, &host);
        assert!(res.sigma_incl.maps().iter().all(|m| m.is_isomorphism()));
    }

    #[test]
    fn deleting_a_machine_removes_dangling_arrows() {
        let tg = plant_chain();
        let s = g(&["ghead", "h1"], &[("g1", "ghead", "h1")]);
        let host = MultilevelTyping::from_direct_types(
            &s,
            &tg,
            &ann(&[(n("ghead"), 2, "HeadGen"), (n("h1"), 2, "Head"), (a("g1"), 2, "genHead")]),
        )
        .unwrap();
        let rule = machine_rule("delete", g(&["m1"], &[]), Graph::new());
        let mat = only_match(&rule, &host, &[0, 1]);
        let res = apply_rule(&rule, &mat, &host).unwrap();
        assert_eq!(res.t.subject(), &g(&["h1"], &[]));
        for lvl in 0..=2 {
            assert!(!res.t.level(lvl).has_arrow("g1"));
        }
        assert!(res.trace.iter().any(|l| l.contains("dangling arrows removed: g1")));
    }

    #[test]
    fn deleting_an_identified_element_has_no_complement() {
        let tg = plant_chain();
        let host = hammer_config_0(&tg);
        let rule = machine_rule("merge", g(&["x", "y"], &[]), g(&["x"], &[]));
        let mat = only_match(&rule, &host, &[0, 1]);
        assert_eq!(mat.mu.node("x"), mat.mu.node("y"));
        let err = apply_rule(&rule, &mat, &host).unwrap_err();
        assert!(err.is_identification_conflict());
    }

    #[test]
    fn clashing_new_names_are_freshened() {
        let tg = plant_chain();
        let s = g(&["ghead", "p1"], &[]);
        let host = MultilevelTyping::from_direct_types(
            &s,
            &tg,
            &ann(&[(n("ghead"), 2, "HeadGen"), (n("p1"), 2, "Head")]),
        )
        .unwrap();
        let rule = plain_create_part();
        let options = MatchOptions {
            level_map: Some(LevelMap::new(vec![0, 1], 2).unwrap()),
            ..MatchOptions::default()
        };
        let mat = find_matches(&rule, &host, &options)
            .unwrap()
            .into_iter()
            .find(|m| m.mu.node("m1") == Some("ghead"))
            .unwrap();
        let res = apply_rule(&rule, &mat, &host).unwrap();
        assert_eq!(res.renamed.get(&n("p1")).map(String::as_str), Some("p1#2"));
        assert!(res.d.subject().has_node("p1#2"));
        assert_eq!(res.d.subject().ends("c").unwrap().tgt, "p1#2");
    }

    #[test]
    fn invalid_match_is_rejected() {
        let tg = plant_chain();
        let host = hammer_config_0(&tg);
        let rule = plain_create_part();
        let mut mat = only_match(&rule, &host, &[0, 1]);
        let deep = LevelMap::new(vec![0, 2], 2).unwrap();
        let betas = crate::matching::enumerate_chain_morphisms(
            rule.metamodel(),
            host.target(),
            &deep,
            &Default::default(),
        );
        // Level maps of the match and of β must agree.
        mat.beta = betas[0].clone();
        assert!(matches!(
            apply_rule(&rule, &mat, &host),
            Err(ApplyError::MatchInvalid(_))
        ));
        // β sending M1 to Hammer disagrees with the type of ghead.
        mat.levels = deep;
        mat.beta = betas
            .into_iter()
            .find(|b| b.map(1).node("M1") == Some("Hammer"))
            .unwrap();
        match apply_rule(&rule, &mat, &host) {
            Err(ApplyError::MatchInvalid(d)) => assert!(d
                .iter()
                .any(|x| matches!(x, MatchDiagnostic::TypeCompatibility { level: 1, .. }))),
            other => panic!("unexpected {other:?}"),
        }
    }
}
