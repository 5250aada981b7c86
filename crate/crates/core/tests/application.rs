use std::time::Instant;

use mlrewrite_core::{
    apply_rule, build_rule, enumerate_chain_morphisms, find_matches, ApplyError, ElementId,
    LevelMap, MatchOptions, MultilevelTyping, Pins,
};
use mlrewrite_testkit::brute::isomorphic;
use mlrewrite_testkit::fixtures::*;
use mlrewrite_testkit::gen::{random_application, rng, AppShape};
use mlrewrite_testkit::suites::{
    applications, conflicts_are_genuine, remark_levelwise, result_invariants,
};

fn example_four() -> (MultilevelTyping, mlrewrite_core::ApplicationResult) {
    let host = hammer_config_0();
    let rule = plain_create_part();
    let options = MatchOptions {
        level_map: Some(LevelMap::new(vec![0, 1], 2).unwrap()),
        ..MatchOptions::default()
    };
    let matches = find_matches(&rule, &host, &options).unwrap();
    assert_eq!(matches.len(), 1);
    let res = apply_rule(&rule, &matches[0], &host).unwrap();
    (host, res)
}

#[test]
fn create_part_on_hammer_config() {
    let start = Instant::now();
    let (host, res) = example_four();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    let d = &res.d;
    assert_eq!(d.subject(), &g(&["ghead", "p1"], &[("c", "ghead", "p1")]));
    assert_eq!(d.level(1), d.subject());
    assert_eq!(d.level(2), host.level(2));
    let dt = |e: ElementId| {
        let t = d.direct_type(&e).unwrap();
        (t.level, t.element.name)
    };
    assert_eq!(dt(n("p1")), (1, "Part".to_string()));
    assert_eq!(dt(a("c")), (1, "creates".to_string()));
    assert_eq!(dt(n("ghead")), (2, "HeadGen".to_string()));
    assert_eq!(res.t, res.d);
    assert!(res.theta.maps().iter().all(|m| m.is_inclusion() && m.dom() == m.cod()));
}

#[test]
fn both_level_maps_give_matches_for_the_plain_rule() {
    let rule = plain_create_part();
    let host = hammer_config_0();
    let matches = find_matches(&rule, &host, &MatchOptions::default()).unwrap();
    let levels: Vec<Vec<usize>> = matches.iter().map(|m| m.levels.images().to_vec()).collect();
    assert_eq!(levels, vec![vec![0, 1], vec![0, 2]]);
    // Matching into generic_plant: M1 becomes Machine.
    let m1 = matches[0].beta.map(1).node("M1");
    assert_eq!(m1, Some("Machine"));
    assert_eq!(matches[1].beta.map(1).node("M1"), Some("HeadGen"));
}

#[test]
fn full_rule_match_space() {
    let rule = full_create_part();
    let pins: Pins = rule
        .constants()
        .iter()
        .map(|(l, e)| ((*l, e.clone()), e.name.clone()))
        .collect();
    let f = LevelMap::identity(2);
    let mut beta1 = Vec::new();
    let mut beta2 = Vec::new();
    for tg in [hammer_chain(), stool_chain()] {
        for beta in enumerate_chain_morphisms(rule.metamodel(), &tg, &f, &pins) {
            beta1.push(beta.map(1).clone());
            beta2.push(beta.map(2).cod().clone());
        }
    }
    beta1.dedup();
    assert_eq!(beta1.len(), 1);
    assert_eq!(beta1[0].cod(), &generic_plant());
    assert!(beta1[0].is_isomorphism());
    assert_eq!(beta2, vec![hammer_chain().graph(2).clone(), stool_chain().graph(2).clone()]);
}

#[test]
fn full_rule_applies_to_the_hammer_configuration() {
    let rule = full_create_part();
    let host = hammer_config_0();
    let matches = find_matches(&rule, &host, &MatchOptions::default()).unwrap();
    assert_eq!(matches.len(), 1);
    let res = apply_rule(&rule, &matches[0], &host).unwrap();
    let dt = |e: ElementId| {
        let t = res.t.direct_type(&e).unwrap();
        (t.level, t.element.name)
    };
    // With the constants pinned the new part is typed by hammer_plant.
    assert_eq!(dt(n("p1")), (2, "Head".to_string()));
    assert_eq!(dt(a("c")), (2, "genHead".to_string()));
    assert_eq!(res.t.type_at(1, &n("p1")), Some(n("Part")));
}

#[test]
fn create_then_delete_returns_to_the_start() {
    let (host, res) = example_four();
    let create = plain_create_part();
    let mm = create.metamodel().clone();
    let l = g(&["m1", "p1"], &[("c", "m1", "p1")]);
    let r = g(&["m1"], &[]);
    let lt = MultilevelTyping::from_direct_types(
        &l,
        &mm,
        &ann(&[(n("m1"), 1, "M1"), (n("p1"), 1, "P1"), (a("c"), 1, "cr")]),
    )
    .unwrap();
    let rt = MultilevelTyping::from_direct_types(&r, &mm, &ann(&[(n("m1"), 1, "M1")])).unwrap();
    let delete = build_rule("DeletePart", &mm, lt, rt, create.constants().clone()).unwrap();
    let options = MatchOptions {
        level_map: Some(LevelMap::new(vec![0, 1], 2).unwrap()),
        ..MatchOptions::default()
    };
    let matches = find_matches(&delete, &res.t, &options).unwrap();
    assert_eq!(matches.len(), 1);
    let back = apply_rule(&delete, &matches[0], &res.t).unwrap();
    assert!(isomorphic(back.t.subject(), host.subject()));
    assert_eq!(back.t.annotations(), host.annotations());
}

#[test]
fn conflicting_match_reports_the_clash() {
    let rule = delete_one_of_two();
    let mm = rule.metamodel().clone();
    let host = MultilevelTyping::from_direct_types(&g(&["u"], &[]), &mm, &ann(&[(n("u"), 1, "M1")])).unwrap();
    let matches = find_matches(&rule, &host, &MatchOptions::default()).unwrap();
    assert_eq!(matches.len(), 1);
    let err = apply_rule(&rule, &matches[0], &host).unwrap_err();
    assert!(err.is_identification_conflict(), "{err}");
    assert!(matches!(err, ApplyError::Graph(_)));
}

#[test]
fn generated_applications_satisfy_the_result_equations() {
    let apps = applications(301, 100);
    let failures = result_invariants(&apps);
    assert!(failures.is_empty(), "{failures:#?}");
    let (failures, checked) = remark_levelwise(&apps);
    assert!(failures.is_empty(), "{failures:#?}");
    assert_eq!(checked, 100);
    let failures = conflicts_are_genuine(&apps);
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn generated_applications_cover_the_interesting_cases() {
    let apps = applications(302, 200);
    let ok = &apps.ok;
    assert!(apps.conflicts.len() >= 5);
    assert!(ok.iter().any(|(_, r)| !r.renamed.is_empty()), "no renaming");
    assert!(ok.iter().any(|(a, _)| !a.rule.deletes().is_empty()), "no deletion");
    assert!(ok.iter().any(|(a, _)| !a.mat.mu.is_injective()), "no identification");
    assert!(ok.iter().any(|(a, _)| !a.mat.levels.is_surjective()), "no gap levels");
    assert!(
        ok.iter().any(|(_, r)| r.t.subject().arrow_count() < r.d.subject().arrow_count()),
        "no arrow removed"
    );
}

#[test]
fn generated_matches_are_found_by_the_search() {
    let mut r = rng(303);
    for k in 0..40 {
        let app = random_application(&mut r, AppShape::default());
        let options = MatchOptions {
            level_map: Some(app.mat.levels.clone()),
            ..MatchOptions::default()
        };
        let found = find_matches(&app.rule, &app.host, &options).unwrap();
        assert!(
            found.iter().any(|m| m.mu == app.mat.mu && m.beta == app.mat.beta),
            "instance {k}"
        );
        // Every reported match passes the check.
        for m in &found {
            assert!(mlrewrite_core::check_match(&app.rule, &app.host, &m.mu, &m.beta).is_empty());
        }
    }
}
