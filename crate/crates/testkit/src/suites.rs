//! Randomised checks shared by the integration and acceptance tests. Each
//! returns the list of failures it found.

use std::collections::BTreeSet;

use mlrewrite_core::chain::{closed_with_pullback_intersections, left_squares_are_pullbacks};
use mlrewrite_core::limits::{final_pullback_complement, pullback, pushout_inclusion};
use mlrewrite_core::{
    apply_rule, compose_partial, pushout_step, ApplyError, ElementId, GraphError, GraphMorphism, TypingChain,
};
use rand::Rng;

use crate::gen::{
    random_application, random_chain, random_graph, random_graph_over, random_reduct_instance,
    random_subgraph, rng, AppShape, Application,
};
use crate::colimit::matches_quotient;
use crate::invariants::{application_invariants, is_reduct_by_hand, levelwise_pushouts};
use crate::oracle::{check_fpbc, check_pullback_result, check_pushout, some_complement_exists};

/// Pullbacks, pushouts along inclusions and final pullback complements on
/// `count` random instances with at most five nodes and six arrows per
/// graph. Instances with no complement must report an identification
/// conflict, and the oracle must agree that none exists.
pub fn universal_properties(seed: u64, count: usize) -> Vec<String> {
    let mut failures = pullback_instances(seed, count);
    failures.extend(pushout_instances(seed.wrapping_add(1), count));
    failures.extend(complement_instances(seed.wrapping_add(2), count));
    failures
}

pub fn pullback_instances(seed: u64, count: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let c = random_graph(&mut r, "c", 1, 3, 4);
        let (_, f) = random_graph_over(&mut r, &c, "a", 5, 6);
        let (_, h) = random_graph_over(&mut r, &c, "b", 5, 6);
        match pullback(&f, &h) {
            Ok(pb) => {
                if let Err(e) = check_pullback_result(&pb, &f, &h) {
                    failures.push(format!("pullback #{k}: {e}"));
                }
            }
            Err(e) => failures.push(format!("pullback #{k}: {e}")),
        }
    }
    failures
}

pub fn pushout_instances(seed: u64, count: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let a = random_graph(&mut r, "a", 1, 5, 6);
        let sub = random_subgraph(&mut r, &a, 0.6);
        let l = GraphMorphism::inclusion(&sub, &a).unwrap();
        let kk = random_graph(&mut r, "k", 1, 5, 6);
        let Some(m) = crate::brute::random_hom(&mut r, &sub, &kk) else {
            continue;
        };
        match pushout_inclusion(&l, &m) {
            Ok(po) => {
                let verdict = check_pushout(&po.apex, &po.map, &po.incl, &l, &m)
                    .and_then(|_| matches_quotient(&po.apex, &po.map, &po.incl, &l, &m));
                if let Err(e) = verdict {
                    failures.push(format!("pushout #{k}: {e}"));
                }
            }
            Err(e) => failures.push(format!("pushout #{k}: {e}")),
        }
    }
    failures
}

pub fn complement_instances(seed: u64, count: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let d = random_graph(&mut r, "d", 1, 5, 6);
        let (i, delta) = random_graph_over(&mut r, &d, "i", 5, 6);
        let rr = random_subgraph(&mut r, &i, 0.7);
        let rho = GraphMorphism::inclusion(&rr, &i).unwrap();
        match final_pullback_complement(&rho, &delta) {
            Ok(pc) => {
                if let Err(e) = check_fpbc(&rho, &delta, &pc.apex, &pc.incl, &pc.comatch) {
                    failures.push(format!("complement #{k}: {e}"));
                }
            }
            Err(GraphError::IdentificationConflict { .. }) => {
                if some_complement_exists(&rho, &delta) {
                    failures.push(format!("complement #{k}: reported a conflict but one exists"));
                }
            }
            Err(e) => failures.push(format!("complement #{k}: {e}")),
        }
    }
    failures
}

/// Both characterisations of reducts agree with each other and with the
/// preimage description on `count` random instances. Returns the failures
/// and the number of instances that were reducts.
pub fn reduct_equivalence(seed: u64, count: usize) -> (Vec<String>, usize) {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    let mut reducts = 0;
    for k in 0..count {
        let inst = random_reduct_instance(&mut r);
        let one = left_squares_are_pullbacks(&inst.src, &inst.dst, &inst.levels, &inst.family);
        let two = closed_with_pullback_intersections(&inst.src, &inst.dst, &inst.levels, &inst.family);
        let by_hand = is_reduct_by_hand(&inst);
        if one {
            reducts += 1;
        }
        if one != by_hand {
            failures.push(format!("instance #{k}: pullback squares {one}, preimages {by_hand}"));
        }
        if one && !two {
            failures.push(format!("instance #{k}: reduct that is not closed with pullback intersections"));
        }
        if two && !one {
            failures.push(format!("instance #{k}: closed with pullback intersections but not a reduct"));
        }
    }
    (failures, reducts)
}

/// Generated applications split by outcome.
pub struct Applications {
    pub ok: Vec<(Application, mlrewrite_core::ApplicationResult)>,
    pub conflicts: Vec<(Application, ApplyError)>,
    pub failures: Vec<String>,
}

/// Applies `count` random rules, sorting results into successes and
/// identification conflicts; any other error is a failure.
pub fn applications(seed: u64, count: usize) -> Applications {
    let mut r = rng(seed);
    let mut out = Applications {
        ok: Vec::new(),
        conflicts: Vec::new(),
        failures: Vec::new(),
    };
    for k in 0..count {
        let app = random_application(&mut r, AppShape::default());
        match apply_rule(&app.rule, &app.mat, &app.host) {
            Ok(res) => out.ok.push((app, res)),
            Err(e) if e.is_identification_conflict() => out.conflicts.push((app, e)),
            Err(e) => out.failures.push(format!("application #{k}: {e}")),
        }
    }
    out
}

/// The four result equations and chain validity on every successful
/// application.
pub fn result_invariants(apps: &Applications) -> Vec<String> {
    let mut failures = apps.failures.clone();
    for (k, (app, res)) in apps.ok.iter().enumerate() {
        if let Err(e) = application_invariants(app, res) {
            failures.push(format!("application #{k}: {e}"));
        }
    }
    failures
}

/// Directly built levels of `D` against explicit level-wise pushouts, for
/// every generated application including those that end in a conflict.
/// Returns the failures and the number of applications checked.
pub fn remark_levelwise(apps: &Applications) -> (Vec<String>, usize) {
    let mut failures = apps.failures.clone();
    let all = apps.ok.iter().map(|(app, _)| app).chain(apps.conflicts.iter().map(|(app, _)| app));
    let mut checked = 0;
    for (k, app) in all.enumerate() {
        checked += 1;
        let verdict = pushout_step(&app.rule, &app.mat, &app.host)
            .map_err(|e| e.to_string())
            .and_then(|po| levelwise_pushouts(app, &po));
        if let Err(e) = verdict {
            failures.push(format!("application #{k}: {e}"));
        }
    }
    (failures, checked)
}

/// Identification conflicts are real: a deleted and a preserved element
/// share their image, and no complement exists at the base level.
pub fn conflicts_are_genuine(apps: &Applications) -> Vec<String> {
    let mut failures = Vec::new();
    for (k, (app, _)) in apps.conflicts.iter().enumerate() {
        let union = app.rule.union().subject();
        let rho = GraphMorphism::inclusion(app.rule.rhs().subject(), union).unwrap();
        let l = app.rule.lhs().subject();
        let deleted = app.rule.deletes();
        let clash = l.elements().any(|x| {
            !deleted.contains(&x)
                && deleted
                    .iter()
                    .any(|y| app.mat.mu.apply(y) == app.mat.mu.apply(&x))
        });
        if !clash {
            failures.push(format!("conflict #{k}: no deleted element shares an image"));
        }
        // Deleted elements are those of L outside R, so the base level of
        // the complement problem is R ↪ I over D = S + (I ∖ L).
        let l_incl = GraphMorphism::inclusion(l, union).unwrap();
        let Ok(po) = pushout_inclusion(&l_incl, &app.mat.mu) else {
            failures.push(format!("conflict #{k}: pushout failed"));
            continue;
        };
        if union.node_count() + union.arrow_count() + po.apex.node_count() + po.apex.arrow_count() <= 24
            && some_complement_exists(&rho, &po.map)
        {
            failures.push(format!("conflict #{k}: a complement exists"));
        }
    }
    failures
}

/// `dom τ(k,j) ∩ dom τ(k,i) = dom(τ(k,j);τ(j,i))` for all `k > j > i`.
pub fn derived_chain_law(chain: &TypingChain) -> Vec<String> {
    let mut failures = Vec::new();
    let n = chain.depth();
    for k in 0..=n {
        for j in 0..k {
            for i in 0..j {
                let (kj, ki, ji) = (chain.tau(k, j), chain.tau(k, i), chain.tau(j, i));
                let lhs = kj.def().intersection(ki.def());
                let composite = compose_partial(kj, ji).unwrap();
                // The composite's domain, computed by hand.
                let by_hand: BTreeSet<ElementId> = kj
                    .def()
                    .elements()
                    .filter(|e| kj.apply(e).is_some_and(|t| ji.def().contains(&t)))
                    .collect();
                let got: BTreeSet<ElementId> = composite.def().elements().collect();
                let want: BTreeSet<ElementId> = lhs.elements().collect();
                if got != by_hand || want != got {
                    failures.push(format!("levels {k} > {j} > {i}: {lhs} vs {}", composite.def()));
                }
            }
        }
    }
    failures
}

/// [`derived_chain_law`] on `count` random valid chains of depth up to four.
pub fn derived_chain_law_random(seed: u64, count: usize) -> Vec<String> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let depth = r.gen_range(2..=4);
        let chain = random_chain(&mut r, depth, 4, 4);
        if !chain.is_valid() {
            failures.push(format!("chain #{k} is not valid"));
            continue;
        }
        failures.extend(derived_chain_law(&chain).into_iter().map(|e| format!("chain #{k}: {e}")));
    }
    failures
}
