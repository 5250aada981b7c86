use mlrewrite_testkit::suites::{derived_chain_law_random, reduct_equivalence};

#[test]
fn both_reduct_characterisations_agree() {
    let (failures, reducts) = reduct_equivalence(201, 100);
    assert!(failures.is_empty(), "{failures:#?}");
    // Both outcomes must actually occur.
    assert!(reducts > 10 && reducts < 100, "{reducts} reducts");
}

#[test]
fn derived_law_on_random_chains() {
    let failures = derived_chain_law_random(202, 100);
    assert!(failures.is_empty(), "{failures:#?}");
}
