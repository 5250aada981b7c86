//! Command-line interface: argument definitions and command execution.
//!
//! Exit codes: 0 success, 1 invalid hierarchy or rule, 2 no match,
//! 3 no final pullback complement, 4 parse, input or usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mlrewrite_core::{
    apply_rule, build_rule, enumerate_chain_morphisms, enumerate_level_maps, find_matches,
    ElementId, Graph, GraphMorphism, LevelMap, MatchCandidate, MatchOptions, MultilevelTyping, Pins,
    Rule, TypeAnnotations, TypingChain, TypingChainMorphism,
};
use serde_json::json;
use thiserror::Error;

use crate::dsl::{self, GraphBlock, ParseError, RuleDoc};
use crate::hierarchy::Hierarchy;
use crate::{dot, json as mirror};

#[derive(Parser, Debug)]
#[command(name = "mlrewrite", version, about = "Multilevel typed graph rewriting")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a hierarchy and, optionally, a rule.
    Validate {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        rule: Option<PathBuf>,
    },
    /// List the matches of a rule in a model.
    Match {
        #[command(flatten)]
        target: MatchArgs,
        /// List metamodel morphisms into the hierarchy instead of matches.
        #[arg(long)]
        betas: bool,
        /// With `--betas`, only consider chains ending at this graph.
        #[arg(long)]
        target_graph: Option<String>,
    },
    /// Apply a rule and print the rewritten hierarchy.
    Apply {
        #[command(flatten)]
        target: MatchArgs,
        /// Which match to use, in listing order.
        #[arg(long, default_value_t = 0)]
        match_index: usize,
        /// Print the construction steps to standard error.
        #[arg(long)]
        trace: bool,
        /// Write the result here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Render a hierarchy as Graphviz.
    ExportDot {
        #[arg(long)]
        hierarchy: PathBuf,
        /// Only the chain ending at this graph.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Print a hierarchy or rule document in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct MatchArgs {
    #[arg(long)]
    pub rule: PathBuf,
    #[arg(long)]
    pub hierarchy: PathBuf,
    /// The model to rewrite; defaults to the only leaf.
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub limit: Option<usize>,
    /// Level images, e.g. `0,1`.
    #[arg(long, value_delimiter = ',')]
    pub level_map: Option<Vec<usize>>,
    /// Fix a metamodel image, as `LEVEL:ELEMENT=TARGET`.
    #[arg(long = "fix-beta")]
    pub fix_beta: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    NoMatch(String),
    #[error("{0}")]
    Conflict(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::NoMatch(_) => 2,
            CliError::Conflict(_) => 3,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
            CliError::Invalid(_) => "invalid",
            CliError::NoMatch(_) => "no-match",
            CliError::Conflict(_) => "identification-conflict",
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let line = match self {
            CliError::Parse { source, .. } => Some(source.line),
            _ => None,
        };
        json!({ "error": mirror::ErrorJson { kind: self.kind(), message: self.to_string(), line } })
    }
}

/// What a command printed and how it ended.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: &Cli) -> Outcome {
    let mut out = Outcome::default();
    if let Err(e) = dispatch(cli, &mut out) {
        out.code = e.exit_code();
        if cli.json {
            out.stdout = format!("{}\n", e.to_json());
        } else {
            let _ = writeln!(out.stderr, "error: {e}");
        }
    }
    out
}

fn dispatch(cli: &Cli, out: &mut Outcome) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { hierarchy, rule } => validate(cli.json, hierarchy, rule.as_deref(), out),
        Command::Match {
            target,
            betas,
            target_graph,
        } => {
            if *betas {
                list_betas(cli.json, target, target_graph.as_deref(), out)
            } else {
                list_matches(cli.json, target, out)
            }
        }
        Command::Apply {
            target,
            match_index,
            trace,
            output,
        } => apply(cli.json, target, *match_index, *trace, output.as_deref(), out),
        Command::ExportDot { hierarchy, graph } => {
            let h = load_hierarchy(hierarchy)?;
            out.stdout = dot::export(&h, graph.as_deref()).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(())
        }
        Command::Fmt { file } => format_file(cli.json, file, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_error(path: &Path) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::Parse {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_hierarchy(path: &Path) -> Result<Hierarchy, CliError> {
    let doc = dsl::parse_hierarchy(&read(path)?).map_err(parse_error(path))?;
    Ok(Hierarchy::new(doc))
}

pub fn load_rule(path: &Path) -> Result<(RuleDoc, Rule), CliError> {
    let doc = dsl::parse_rule(&read(path)?).map_err(parse_error(path))?;
    let rule = rule_from_doc(&doc).map_err(|e| CliError::Invalid(format!("rule {}: {e}", doc.name)))?;
    Ok((doc, rule))
}

/// Builds the metamodel chain and both sides of a rule document.
pub fn rule_from_doc(doc: &RuleDoc) -> Result<Rule, String> {
    let graphs = doc.meta.iter().map(|b| b.graph.clone()).collect();
    let annotations: Vec<_> = doc.meta.iter().skip(1).map(|b| b.annotations.clone()).collect();
    if let Some(first) = doc.meta.first().filter(|b| !b.annotations.is_empty()) {
        return Err(format!("top metamodel graph {} cannot have types", first.name));
    }
    let mm = TypingChain::from_direct_types(graphs, &annotations).map_err(|e| format!("metamodel: {e}"))?;
    let lhs = MultilevelTyping::from_direct_types(&doc.from.0, &mm, &doc.from.1)
        .map_err(|e| format!("left-hand side: {e}"))?;
    let rhs = MultilevelTyping::from_direct_types(&doc.to.0, &mm, &doc.to.1)
        .map_err(|e| format!("right-hand side: {e}"))?;
    build_rule(&doc.name, &mm, lhs, rhs, doc.constants.clone()).map_err(|e| e.to_string())
}

fn validate(json: bool, path: &Path, rule: Option<&Path>, out: &mut Outcome) -> Result<(), CliError> {
    let h = load_hierarchy(path)?;
    let mut problems: Vec<(String, String)> = h
        .validate()
        .into_iter()
        .map(|p| (p.graph, p.message))
        .collect();
    if let Some(rule) = rule {
        match load_rule(rule) {
            Ok(_) => {}
            Err(CliError::Invalid(message)) => problems.push(("rule".into(), message)),
            Err(e) => return Err(e),
        }
    }
    if json {
        let list: Vec<_> = problems
            .iter()
            .map(|(g, m)| json!({ "graph": g, "message": m }))
            .collect();
        out.stdout = format!("{}\n", json!({ "valid": problems.is_empty(), "problems": list }));
    } else if problems.is_empty() {
        let _ = writeln!(out.stdout, "{}: {} graphs, valid", h.doc.name, h.doc.graphs.len());
    } else {
        for (g, m) in &problems {
            let _ = writeln!(out.stdout, "{g}: {m}");
        }
    }
    out.code = if problems.is_empty() { 0 } else { 1 };
    Ok(())
}

/// The host model and its name.
fn host(h: &Hierarchy, name: Option<&str>) -> Result<(String, MultilevelTyping), CliError> {
    let name = match name {
        Some(n) => {
            h.block(n).map_err(|e| CliError::Usage(e.to_string()))?;
            if !h.is_leaf(n) {
                return Err(CliError::Usage(format!("host `{n}` has children; only leaves can be rewritten")));
            }
            n.to_string()
        }
        None => match h.leaves()[..] {
            [only] => only.to_string(),
            ref many => {
                return Err(CliError::Usage(format!(
                    "choose a host with --host among: {}",
                    many.join(", ")
                )))
            }
        },
    };
    let typing = h.typing(&name).map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok((name, typing))
}

/// Parses `LEVEL:ELEMENT=TARGET`, resolving the element in the metamodel.
fn parse_pin(arg: &str, mm: &TypingChain) -> Result<((usize, ElementId), String), CliError> {
    let bad = || CliError::Usage(format!("--fix-beta expects LEVEL:ELEMENT=TARGET, got `{arg}`"));
    let (level, rest) = arg.split_once(':').ok_or_else(bad)?;
    let (element, target) = rest.split_once('=').ok_or_else(bad)?;
    let level: usize = level.trim().trim_start_matches('L').parse().map_err(|_| bad())?;
    let (element, target) = (element.trim(), target.trim());
    if level > mm.depth() || element.is_empty() || target.is_empty() {
        return Err(bad());
    }
    let g = mm.graph(level);
    let id = match (g.has_node(element), g.has_arrow(element)) {
        (true, false) => ElementId::node(element),
        (false, true) => ElementId::arrow(element),
        (true, true) => {
            return Err(CliError::Usage(format!(
                "`{element}` is both a node and an arrow at metamodel level {level}"
            )))
        }
        (false, false) => {
            return Err(CliError::Usage(format!(
                "metamodel level {level} has no element `{element}`"
            )))
        }
    };
    Ok(((level, id), target.to_string()))
}

fn pins(args: &MatchArgs, rule: &Rule) -> Result<Pins, CliError> {
    args.fix_beta.iter().map(|s| parse_pin(s, rule.metamodel())).collect()
}

struct Search {
    h: Hierarchy,
    rule: Rule,
    host_name: String,
    host: MultilevelTyping,
    matches: Vec<MatchCandidate>,
}

fn search(args: &MatchArgs) -> Result<Search, CliError> {
    let h = load_hierarchy(&args.hierarchy)?;
    let (_, rule) = load_rule(&args.rule)?;
    let (host_name, host) = host(&h, args.host.as_deref())?;
    let level_map = match &args.level_map {
        Some(images) => Some(
            LevelMap::new(images.clone(), host.depth()).map_err(|e| CliError::Usage(format!("--level-map: {e}")))?,
        ),
        None => None,
    };
    if let Some(f) = &level_map {
        if f.n() != rule.depth() {
            return Err(CliError::Usage(format!(
                "--level-map has {} entries but the rule has {} levels",
                f.n() + 1,
                rule.depth() + 1
            )));
        }
    }
    let options = MatchOptions {
        limit: args.limit,
        level_map,
        pins: pins(args, &rule)?,
    };
    let matches = find_matches(&rule, &host, &options).map_err(|e| CliError::NoMatch(e.to_string()))?;
    Ok(Search {
        h,
        rule,
        host_name,
        host,
        matches,
    })
}

fn pairs(m: &GraphMorphism) -> String {
    let parts: Vec<String> = m
        .node_map()
        .iter()
        .chain(m.arrow_map())
        .map(|(x, y)| format!("{x} -> {y}"))
        .collect();
    if parts.is_empty() {
        "(empty)".into()
    } else {
        parts.join(", ")
    }
}

fn levels(f: &LevelMap) -> String {
    format!("{:?}", f.images())
}

fn describe_beta(out: &mut String, beta: &TypingChainMorphism) {
    for (i, m) in beta.maps().iter().enumerate() {
        let _ = writeln!(out, "  beta {i}: {}", pairs(m));
    }
}

fn list_matches(json: bool, args: &MatchArgs, out: &mut Outcome) -> Result<(), CliError> {
    let s = search(args)?;
    if s.matches.is_empty() {
        return Err(CliError::NoMatch(format!(
            "rule {} has no match in {}",
            s.rule.name(),
            s.host_name
        )));
    }
    if json {
        let list: Vec<_> = s.matches.iter().enumerate().map(|(k, c)| mirror::candidate(k, c)).collect();
        out.stdout = format!("{}\n", json!({ "host": s.host_name, "matches": list }));
        return Ok(());
    }
    for (k, c) in s.matches.iter().enumerate() {
        let _ = writeln!(out.stdout, "match {k}: f = {}", levels(&c.levels));
        describe_beta(&mut out.stdout, &c.beta);
        let _ = writeln!(out.stdout, "  mu: {}", pairs(&c.mu));
    }
    Ok(())
}

/// Chain morphisms from the rule's metamodel into every chain ending at an
/// inner graph, or at `target`.
fn list_betas(json: bool, args: &MatchArgs, target: Option<&str>, out: &mut Outcome) -> Result<(), CliError> {
    let h = load_hierarchy(&args.hierarchy)?;
    let (_, rule) = load_rule(&args.rule)?;
    let mut all_pins = pins(args, &rule)?;
    for (level, e) in rule.constants() {
        all_pins.insert((*level, e.clone()), e.name.clone());
    }
    let ends: Vec<String> = match target {
        Some(t) => {
            h.block(t).map_err(|e| CliError::Usage(e.to_string()))?;
            vec![t.to_string()]
        }
        None => h
            .doc
            .graphs
            .iter()
            .map(|b| b.name.clone())
            .filter(|n| !h.is_leaf(n))
            .collect(),
    };
    let mut found: Vec<(String, TypingChainMorphism)> = Vec::new();
    for end in ends {
        let Ok(chain) = h.chain(&end) else { continue };
        let Ok(maps) = enumerate_level_maps(rule.depth(), chain.depth()) else {
            continue;
        };
        let maps: Vec<LevelMap> = match &args.level_map {
            Some(images) => maps.into_iter().filter(|f| f.images() == &images[..]).collect(),
            None => maps,
        };
        for f in maps {
            for beta in enumerate_chain_morphisms(rule.metamodel(), &chain, &f, &all_pins) {
                found.push((end.clone(), beta));
            }
        }
    }
    if found.is_empty() {
        return Err(CliError::NoMatch(format!(
            "the metamodel of rule {} does not map into the hierarchy",
            rule.name()
        )));
    }
    if json {
        let list: Vec<_> = found
            .iter()
            .enumerate()
            .map(|(k, (end, beta))| {
                json!({
                    "index": k,
                    "target": end,
                    "levels": beta.levels().images(),
                    "beta": beta.maps().iter().map(mirror::map).collect::<Vec<_>>(),
                })
            })
            .collect();
        out.stdout = format!("{}\n", json!({ "betas": list }));
        return Ok(());
    }
    for (k, (end, beta)) in found.iter().enumerate() {
        let _ = writeln!(out.stdout, "beta {k}: into {end}, f = {}", levels(beta.levels()));
        describe_beta(&mut out.stdout, beta);
    }
    Ok(())
}

fn apply(
    json: bool,
    args: &MatchArgs,
    index: usize,
    trace: bool,
    output: Option<&Path>,
    out: &mut Outcome,
) -> Result<(), CliError> {
    let Search {
        mut h,
        rule,
        host_name,
        host,
        matches,
    } = search(args)?;
    let Some(mat) = matches.get(index) else {
        return Err(CliError::NoMatch(if matches.is_empty() {
            format!("rule {} has no match in {host_name}", rule.name())
        } else {
            format!("match index {index} is out of range; there are {} matches", matches.len())
        }));
    };
    let result = apply_rule(&rule, mat, &host).map_err(|e| {
        if e.is_identification_conflict() {
            CliError::Conflict(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    })?;
    if trace {
        for line in &result.trace {
            let _ = writeln!(out.stderr, "{line}");
        }
    }
    h.replace(&host_name, &result.t).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = if json {
        let renamed: Vec<_> = result
            .renamed
            .iter()
            .map(|(e, to)| json!({ "element": e.name, "kind": e.kind.to_string(), "name": to }))
            .collect();
        format!(
            "{}\n",
            json!({ "host": host_name, "renamed": renamed, "hierarchy": mirror::hierarchy(&h.doc) })
        )
    } else {
        dsl::write_hierarchy(&h.doc)
    };
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => out.stdout = text,
    }
    Ok(())
}

fn format_file(json: bool, path: &Path, out: &mut Outcome) -> Result<(), CliError> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with("//"))
        .unwrap_or("");
    if first.starts_with("rule") {
        let doc = dsl::parse_rule(&text).map_err(parse_error(path))?;
        if json {
            let meta: Vec<_> = doc.meta.iter().map(mirror::graph).collect();
            let constants: Vec<_> = doc
                .constants
                .iter()
                .map(|(l, e)| json!({ "level": l, "element": e.name, "kind": e.kind.to_string() }))
                .collect();
            let side = |name: &str, (graph, annotations): &(Graph, TypeAnnotations)| {
                mirror::graph(&GraphBlock {
                    name: name.to_string(),
                    parent: None,
                    graph: graph.clone(),
                    annotations: annotations.clone(),
                })
            };
            out.stdout = format!(
                "{}\n",
                json!({
                    "rule": doc.name,
                    "meta": meta,
                    "constants": constants,
                    "from": side("from", &doc.from),
                    "to": side("to", &doc.to),
                })
            );
        } else {
            out.stdout = dsl::write_rule(&doc);
        }
    } else {
        let doc = dsl::parse_hierarchy(&text).map_err(parse_error(path))?;
        out.stdout = if json {
            format!("{}\n", serde_json::to_string(&mirror::hierarchy(&doc)).expect("serializable"))
        } else {
            dsl::write_hierarchy(&doc)
        };
    }
    Ok(())
}
