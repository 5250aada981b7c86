use std::path::PathBuf;
use std::process::Command;

use mlrewrite_cli::dsl::{parse_hierarchy, write_hierarchy, GraphBlock, HierarchyDoc};
use mlrewrite_cli::hierarchy::Hierarchy;
use mlrewrite_core::{ElementId, MultilevelTyping, TypeAnnotations, TypingChain};
use mlrewrite_testkit::fixtures::{hammer_config_0, hammer_chain};
use mlrewrite_testkit::gen::{random_chain, random_typing, rng};
use rand::Rng;

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(file)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mlrewrite(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mlrewrite"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn plants() -> String {
    data("plants.mlh")
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(mlrewrite(&["--help"]).code, 0);
    assert_eq!(mlrewrite(&["--version"]).code, 0);
    assert_eq!(mlrewrite(&["frobnicate"]).code, 4);
    assert_eq!(mlrewrite(&["match", "--rule", "x.mlr"]).code, 4);
}

#[test]
fn sample_documents_validate() {
    for rule in ["create_part.mlr", "create_part_full.mlr", "delete_one.mlr"] {
        let run = mlrewrite(&["validate", "--hierarchy", &plants(), "--rule", &data(rule)]);
        assert_eq!(run.code, 0, "{rule}: {}{}", run.stdout, run.stderr);
    }
}

#[test]
fn the_sample_hierarchy_matches_the_fixtures() {
    let doc = parse_hierarchy(&std::fs::read_to_string(plants()).unwrap()).unwrap();
    let h = Hierarchy::new(doc);
    let chain = h.chain("hammer_plant").unwrap();
    assert_eq!(chain, hammer_chain());
    // `has` is typed at the top level only.
    assert_eq!(chain.tau(2, 1).apply(&ElementId::arrow("has")), None);
    assert!(chain.tau(2, 0).apply(&ElementId::arrow("has")).is_some());
    assert_eq!(h.typing("hammer_config_0").unwrap(), hammer_config_0());
}

#[test]
fn invalid_documents_exit_one_or_four() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(plants()).unwrap();
    let broken = dir.path().join("broken.mlh");
    std::fs::write(&broken, text.replace("type Head @ 1:Part", "type Head @ 1:Wheel")).unwrap();
    let run = mlrewrite(&["validate", "--hierarchy", broken.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("hammer_plant"), "{}", run.stdout);
    assert!(run.stdout.contains("hammer_config_0: graph `hammer_config_0` depends on"));

    let garbled = dir.path().join("garbled.mlh");
    std::fs::write(&garbled, "hierarchy h\ngraph g\n  nod x\nend\n").unwrap();
    let run = mlrewrite(&["--json", "validate", "--hierarchy", garbled.to_str().unwrap()]);
    assert_eq!(run.code, 4);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 3);

    let run = mlrewrite(&["validate", "--hierarchy", "/nonexistent/file.mlh"]);
    assert_eq!(run.code, 4);
}

#[test]
fn plain_rule_matches_at_both_levels() {
    let rule = data("create_part.mlr");
    let base = ["match", "--rule", &rule, "--hierarchy", &plants(), "--host", "hammer_config_0"];
    let run = mlrewrite(&base);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("match 0: f = [0, 1]"));
    assert!(run.stdout.contains("match 1: f = [0, 2]"));
    assert!(run.stdout.contains("beta 1: M1 -> HeadGen, P1 -> Head, cr -> genHead"));

    let mut pinned = base.to_vec();
    pinned.extend(["--fix-beta", "1:M1=Machine", "--json"]);
    let run = mlrewrite(&pinned);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    let matches = v["matches"].as_array().unwrap();
    assert_eq!(matches.len(), 1);
    assert_eq!(matches[0]["levels"], serde_json::json!([0, 1]));
    assert_eq!(matches[0]["mu"]["nodes"]["m1"], "ghead");

    let mut bad_pin = base.to_vec();
    bad_pin.extend(["--fix-beta", "1:Nope=Machine"]);
    assert_eq!(mlrewrite(&bad_pin).code, 4);
}

#[test]
fn missing_matches_exit_two() {
    let rule = data("create_part.mlr");
    let base = ["match", "--rule", &rule, "--hierarchy", &plants(), "--host", "hammer_config_0"];
    let mut none = base.to_vec();
    none.extend(["--fix-beta", "1:M1=Head"]);
    assert_eq!(mlrewrite(&none).code, 2);
    let mut apply = base.to_vec();
    apply[0] = "apply";
    apply.extend(["--match-index", "7"]);
    let run = mlrewrite(&apply);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("out of range"));
}

#[test]
fn host_must_be_a_leaf() {
    let rule = data("create_part.mlr");
    let run = mlrewrite(&["match", "--rule", &rule, "--hierarchy", &plants(), "--host", "hammer_plant"]);
    assert_eq!(run.code, 4);
    let run = mlrewrite(&["match", "--rule", &rule, "--hierarchy", &plants()]);
    assert_eq!(run.code, 4);
    assert!(run.stderr.contains("hammer_config_0, stool_config_0"));
}

#[test]
fn beta_candidates_for_the_full_rule() {
    let rule = data("create_part_full.mlr");
    let run = mlrewrite(&["match", "--betas", "--rule", &rule, "--hierarchy", &plants()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("beta 0: into hammer_plant, f = [0, 1, 2]"));
    assert!(run.stdout.contains("beta 1: into stool_plant, f = [0, 1, 2]"));
    assert!(run.stdout.contains("  beta 2: M1 -> LegGen, P1 -> Leg, cr -> createsLeg"));
    let run = mlrewrite(&[
        "match", "--betas", "--rule", &rule, "--hierarchy", &plants(), "--target-graph", "stool_plant",
    ]);
    assert_eq!(run.stdout.lines().filter(|l| l.starts_with("beta ")).count(), 1);
}

#[test]
fn applying_create_part_writes_a_valid_hierarchy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.mlh");
    let rule = data("create_part.mlr");
    let run = mlrewrite(&[
        "apply", "--rule", &rule, "--hierarchy", &plants(), "--host", "hammer_config_0",
        "--level-map", "0,1", "--trace", "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stderr.contains("pushout"));
    let text = std::fs::read_to_string(&out).unwrap();
    for line in ["  node p1", "  arrow c: ghead -> p1", "  type p1 @ 1:Part", "  type c @ 1:creates"] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    let run = mlrewrite(&["validate", "--hierarchy", out.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stdout);

    // A second application creates another part under a fresh name.
    let again = mlrewrite(&[
        "apply", "--rule", &rule, "--hierarchy", out.to_str().unwrap(), "--host", "hammer_config_0",
        "--level-map", "0,1", "--json",
    ]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    let v: serde_json::Value = serde_json::from_str(&again.stdout).unwrap();
    let renamed = v["renamed"].as_array().unwrap();
    assert!(renamed.iter().any(|r| r["element"] == "p1" && r["name"] == "p1#2"), "{renamed:?}");
}

#[test]
fn the_full_rule_types_the_new_part_by_the_plant() {
    let rule = data("create_part_full.mlr");
    let run = mlrewrite(&["apply", "--rule", &rule, "--hierarchy", &plants(), "--host", "hammer_config_0"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("  type p1 @ 2:Head"));
    assert!(run.stdout.contains("  type c @ 2:genHead"));
}

#[test]
fn identification_conflicts_exit_three() {
    let rule = data("delete_one.mlr");
    let run = mlrewrite(&["--json", "apply", "--rule", &rule, "--hierarchy", &plants(), "--host", "stool_config_0"]);
    assert_eq!(run.code, 3);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "identification-conflict");
}

#[test]
fn dot_export_has_one_cluster_per_graph() {
    let run = mlrewrite(&["export-dot", "--hierarchy", &plants()]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.matches("subgraph cluster_").count(), 6);
    assert!(run.stdout.contains("\"hammer_config_0/ghead\" -> \"hammer_plant/HeadGen\""));
    let run = mlrewrite(&["export-dot", "--hierarchy", &plants(), "--graph", "stool_plant"]);
    assert_eq!(run.stdout.matches("subgraph cluster_").count(), 3);
}

#[test]
fn fmt_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["plants.mlh", "create_part.mlr", "create_part_full.mlr", "delete_one.mlr"] {
        let once = mlrewrite(&["fmt", &data(file)]);
        assert_eq!(once.code, 0);
        let path = dir.path().join(file);
        std::fs::write(&path, &once.stdout).unwrap();
        let twice = mlrewrite(&["fmt", path.to_str().unwrap()]);
        assert_eq!(once.stdout, twice.stdout, "{file}");
        assert_eq!(mlrewrite(&["--json", "fmt", &data(file)]).code, 0);
    }
}

/// Direct types of every element of the bottom graph of `chain`.
fn direct_annotations(chain: &TypingChain) -> TypeAnnotations {
    let k = chain.depth();
    let mut out = TypeAnnotations::new();
    for e in chain.graph(k).elements() {
        if let Some(t) = chain.direct_type(k, &e).unwrap() {
            out.entry(e).or_default().insert(t.level, Some(t.element.name));
        }
    }
    out
}

#[test]
fn generated_hierarchies_round_trip() {
    let mut r = rng(91);
    for _ in 0..40 {
        let depth = r.gen_range(1..=3);
        let chain = random_chain(&mut r, depth, 4, 4);
        let model: MultilevelTyping = random_typing(&mut r, &chain, "m", 4, 5);
        let mut graphs = Vec::new();
        for k in 0..=depth {
            graphs.push(GraphBlock {
                name: format!("g{k}"),
                parent: k.checked_sub(1).map(|p| format!("g{p}")),
                graph: chain.graph(k).clone(),
                annotations: if k == 0 {
                    TypeAnnotations::new()
                } else {
                    direct_annotations(&chain.prefix(k))
                },
            });
        }
        graphs.push(GraphBlock {
            name: "model".into(),
            parent: Some(format!("g{depth}")),
            graph: model.subject().clone(),
            annotations: model.annotations(),
        });
        let doc = HierarchyDoc {
            name: "random".into(),
            graphs,
        };
        let text = write_hierarchy(&doc);
        let back = parse_hierarchy(&text).unwrap();
        assert_eq!(back, doc, "{text}");
        let h = Hierarchy::new(back);
        assert_eq!(h.chain(&format!("g{depth}")).unwrap(), chain, "{text}");
        assert_eq!(h.typing("model").unwrap(), model, "{text}");
    }
}
