//! Seeded generators for graphs, valid typing chains, typed hosts and rule
//! applications.

use std::collections::{BTreeMap, BTreeSet};

use mlrewrite_core::chain::reduct;
use mlrewrite_core::{
    build_rule, ElementId, Graph, GraphMorphism, InclusionChain, Kind, LevelMap, MatchCandidate,
    MultilevelTyping, Rule, TypeAnnotations, TypingChain, TypingChainMorphism,
};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The deterministic generator used across the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random graph with up to `max_nodes` nodes (at least `min_nodes`) and
/// up to `max_arrows` arrows, names prefixed by `prefix`.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    prefix: &str,
    min_nodes: usize,
    max_nodes: usize,
    max_arrows: usize,
) -> Graph {
    let n = rng.gen_range(min_nodes..=max_nodes);
    let mut g = Graph::new();
    for k in 0..n {
        g.add_node(format!("{prefix}{k}")).unwrap();
    }
    if n > 0 {
        let m = rng.gen_range(0..=max_arrows);
        for k in 0..m {
            let s = format!("{prefix}{}", rng.gen_range(0..n));
            let t = format!("{prefix}{}", rng.gen_range(0..n));
            g.add_arrow(format!("{prefix}e{k}"), s, t).unwrap();
        }
    }
    g
}

/// A random graph together with a homomorphism into `b`, built by choosing
/// a preimage for each new element.
pub fn random_graph_over<R: Rng>(
    rng: &mut R,
    b: &Graph,
    prefix: &str,
    max_nodes: usize,
    max_arrows: usize,
) -> (Graph, GraphMorphism) {
    let mut g = Graph::new();
    let mut nodes = BTreeMap::new();
    let mut arrows = BTreeMap::new();
    if b.node_count() > 0 {
        let n = rng.gen_range(0..=max_nodes);
        for k in 0..n {
            let name = format!("{prefix}{k}");
            g.add_node(name.clone()).unwrap();
            nodes.insert(name, b.nodes().choose(rng).unwrap().to_string());
        }
    }
    let m = rng.gen_range(0..=max_arrows);
    for k in 0..m {
        let Some((bt, ends)) = b.arrows().choose(rng) else {
            break;
        };
        let over = |target: &str| -> Vec<String> {
            nodes
                .iter()
                .filter(|(_, v)| v.as_str() == target)
                .map(|(k, _)| k.clone())
                .collect()
        };
        let (ss, ts) = (over(&ends.src), over(&ends.tgt));
        let (Some(s), Some(t)) = (ss.choose(rng), ts.choose(rng)) else {
            continue;
        };
        let name = format!("{prefix}e{k}");
        g.add_arrow(name.clone(), s.clone(), t.clone()).unwrap();
        arrows.insert(name, bt.to_string());
    }
    let hom = GraphMorphism::new(g.clone(), b.clone(), nodes, arrows).unwrap();
    (g, hom)
}

/// A random subgraph of `g`: each node kept with probability `p`, then each
/// arrow between kept nodes with probability `p`.
pub fn random_subgraph<R: Rng>(rng: &mut R, g: &Graph, p: f64) -> Graph {
    let nodes: BTreeSet<&str> = g.nodes().filter(|_| rng.gen_bool(p)).collect();
    let arrows: Vec<&str> = g
        .arrows()
        .filter(|(_, e)| nodes.contains(e.src.as_str()) && nodes.contains(e.tgt.as_str()))
        .map(|(a, _)| a)
        .filter(|_| rng.gen_bool(p))
        .collect();
    g.induced(nodes, arrows).unwrap()
}

/// Type of an element at `level` given its direct type `(at, ty)` in
/// `chain`, following the closure rule.
fn closure_type(
    chain: &TypingChain,
    kind: Kind,
    at: usize,
    ty: &str,
    level: usize,
) -> Option<String> {
    use std::cmp::Ordering::*;
    match level.cmp(&at) {
        Equal => Some(ty.to_string()),
        Greater => None,
        Less => chain
            .tau(at, level)
            .apply(&ElementId {
                kind,
                name: ty.to_string(),
            })
            .map(|x| x.name),
    }
}

/// Random direct-type annotations for a graph over `chain`, restricted to
/// element names in `fixed_free` (others are left to the caller). Nodes pick
/// a level and a type; arrows pick a type whose endpoints fit the types of
/// their own endpoints at that level, or are dropped.
fn annotate<R: Rng>(
    rng: &mut R,
    chain: &TypingChain,
    g: &mut Graph,
    known: &dyn Fn(&str, usize) -> Option<String>,
    free_nodes: &[String],
    free_arrows: &[(String, String, String)],
    ann: &mut TypeAnnotations,
) {
    let top = chain.depth();
    let mut direct: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for x in free_nodes {
        let level = rng.gen_range(0..=top);
        let choices: Vec<&str> = chain.graph(level).nodes().collect();
        let (level, ty) = match choices.choose(rng) {
            Some(t) => (level, t.to_string()),
            None => (0, chain.graph(0).nodes().choose(rng).expect("top level has a node").to_string()),
        };
        g.add_node(x.clone()).unwrap();
        ann.entry(ElementId::node(x.as_str()))
            .or_default()
            .insert(level, Some(ty.clone()));
        direct.insert(x.clone(), (level, ty));
    }
    let node_type = |x: &str, level: usize| match direct.get(x) {
        Some((at, ty)) => closure_type(chain, Kind::Node, *at, ty, level),
        None => known(x, level),
    };
    for (name, s, t) in free_arrows {
        let mut options = Vec::new();
        for level in 0..=top {
            let (Some(st), Some(tt)) = (node_type(s, level), node_type(t, level)) else {
                continue;
            };
            for (a, e) in chain.graph(level).arrows() {
                if e.src == st && e.tgt == tt {
                    options.push((level, a.to_string()));
                }
            }
        }
        if let Some((level, ty)) = options.choose(rng) {
            g.add_arrow(name.clone(), s.clone(), t.clone()).unwrap();
            ann.entry(ElementId::arrow(name.as_str()))
                .or_default()
                .insert(*level, Some(ty.clone()));
        }
    }
}

fn random_arrows<R: Rng>(
    rng: &mut R,
    prefix: &str,
    nodes: &[String],
    count: usize,
) -> Vec<(String, String, String)> {
    if nodes.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|k| {
            (
                format!("{prefix}{k}"),
                nodes.choose(rng).unwrap().clone(),
                nodes.choose(rng).unwrap().clone(),
            )
        })
        .collect()
}

/// A random graph typed over `chain` by closure from random direct types.
pub fn random_typing<R: Rng>(
    rng: &mut R,
    chain: &TypingChain,
    prefix: &str,
    max_nodes: usize,
    max_arrows: usize,
) -> MultilevelTyping {
    let nodes: Vec<String> = (0..rng.gen_range(1..=max_nodes))
        .map(|k| format!("{prefix}{k}"))
        .collect();
    let count = rng.gen_range(0..=max_arrows);
    let arrows = random_arrows(rng, &format!("{prefix}e"), &nodes, count);
    let mut g = Graph::new();
    let mut ann = TypeAnnotations::new();
    annotate(rng, chain, &mut g, &|_, _| None, &nodes, &arrows, &mut ann);
    MultilevelTyping::from_direct_types(&g, chain, &ann).expect("closure typings are valid")
}

/// A random valid typing chain of the given depth. The top level always
/// carries a node with a loop so that arrows below can be typed.
pub fn random_chain<R: Rng>(
    rng: &mut R,
    depth: usize,
    max_nodes: usize,
    max_arrows: usize,
) -> TypingChain {
    let mut top = random_graph(rng, "t", 1, 2, 2);
    top.add_arrow("tloop", "t0", "t0").unwrap();
    let mut chain = TypingChain::single(top);
    for k in 1..=depth {
        let typing = random_typing(rng, &chain, &format!("g{k}_"), max_nodes, max_arrows);
        chain = chain.extend(&typing).unwrap();
    }
    debug_assert!(chain.is_valid());
    chain
}

/// The chain `TG↓f`: levels `f(0), …, f(n)` of `tg` with their typings.
pub fn restrict_chain(tg: &TypingChain, f: &LevelMap) -> TypingChain {
    let graphs = (0..=f.n()).map(|i| tg.graph(f.get(i)).clone()).collect();
    let mut typing = BTreeMap::new();
    for j in 1..=f.n() {
        for i in 0..j {
            typing.insert((j, i), tg.tau(f.get(j), f.get(i)).clone());
        }
    }
    TypingChain::new(graphs, typing).unwrap()
}

/// A random level map `[n] → [m]`.
pub fn random_level_map<R: Rng>(rng: &mut R, n: usize, m: usize) -> LevelMap {
    let mut images: Vec<usize> = (1..=m).choose_multiple(rng, n);
    images.sort_unstable();
    images.insert(0, 0);
    LevelMap::new(images, m).unwrap()
}

/// A generated rule application: rule, host and a valid match.
#[derive(Clone, Debug)]
pub struct Application {
    pub rule: Rule,
    pub host: MultilevelTyping,
    pub mat: MatchCandidate,
}

/// Parameters of [`random_application`].
#[derive(Clone, Copy, Debug)]
pub struct AppShape {
    pub max_depth: usize,
    pub max_host_nodes: usize,
    pub max_host_arrows: usize,
    pub max_lhs_nodes: usize,
    pub max_lhs_arrows: usize,
}

impl Default for AppShape {
    fn default() -> Self {
        AppShape {
            max_depth: 3,
            max_host_nodes: 5,
            max_host_arrows: 6,
            max_lhs_nodes: 3,
            max_lhs_arrows: 3,
        }
    }
}

/// A random rule application. The metamodel is `TG↓f` with `β` the
/// identity, the left-hand side is a random graph over the host with the
/// reduct typing, and the right-hand side keeps a random part of it and adds
/// new elements, sometimes under names that clash with the host.
pub fn random_application<R: Rng>(rng: &mut R, shape: AppShape) -> Application {
    let m = rng.gen_range(1..=shape.max_depth);
    let tg = random_chain(rng, m, 3, 3);
    let host = random_typing(rng, &tg, "s", shape.max_host_nodes, shape.max_host_arrows);
    let n = rng.gen_range(0..=m);
    let f = random_level_map(rng, n, m);
    let mm = restrict_chain(&tg, &f);

    let (l, mu) = random_graph_over(rng, host.subject(), "l", shape.max_lhs_nodes, shape.max_lhs_arrows);
    let (l_chain, mu_chain) = reduct(host.chain(), &mu, &f).unwrap();
    let l_maps = (0..=n)
        .map(|i| {
            let lm = mu_chain.map(i).then(host.sigma(f.get(i))).unwrap();
            lm.with_codomain(mm.graph(i)).unwrap()
        })
        .collect();
    let lhs = MultilevelTyping::from_levels(l_chain.levels().to_vec(), &mm, l_maps).unwrap();
    debug_assert_eq!(lhs.subject(), &l);

    // R: a part K of L plus new elements.
    let k = random_subgraph(rng, &l, 0.7);
    let l_ann = lhs.annotations();
    let mut r_ann: TypeAnnotations = l_ann
        .into_iter()
        .filter(|(e, _)| k.contains(e))
        .collect();
    let host_names: Vec<&str> = host.subject().nodes().collect();
    let mut new_nodes = Vec::new();
    for j in 0..rng.gen_range(0..=2) {
        let clash = host_names
            .iter()
            .find(|x| !l.has_node(x) && !new_nodes.contains(&x.to_string()) && rng.gen_bool(0.5));
        new_nodes.push(match clash {
            Some(x) => x.to_string(),
            None => format!("r{j}"),
        });
    }
    let mut r_nodes: Vec<String> = k.nodes().map(str::to_string).collect();
    r_nodes.extend(new_nodes.iter().cloned());
    let count = rng.gen_range(0..=2);
    let new_arrows = random_arrows(rng, "re", &r_nodes, count);
    let mut r = k.clone();
    let known = |x: &str, level: usize| lhs.type_at(level, &ElementId::node(x)).map(|t| t.name);
    annotate(rng, &mm, &mut r, &known, &new_nodes, &new_arrows, &mut r_ann);
    let rhs = MultilevelTyping::from_direct_types(&r, &mm, &r_ann).expect("typed right-hand side");

    let rule = build_rule("generated", &mm, lhs, rhs, BTreeSet::new()).expect("coherent rule");
    let maps = (0..=n)
        .map(|i| GraphMorphism::identity(mm.graph(i)))
        .collect();
    let beta = TypingChainMorphism::new(mm.clone(), tg.clone(), f.clone(), maps).unwrap();
    let mat = MatchCandidate {
        levels: f,
        beta,
        mu,
        mu_chain,
    };
    Application { rule, host, mat }
}

/// A random `(target chain, φ_0, f)` triple together with a source
/// inclusion chain whose levels lie inside `φ_0⁻¹(H_f(j))`: either exactly
/// the preimages or random parts of them.
pub struct ReductInstance {
    pub src: InclusionChain,
    pub dst: InclusionChain,
    pub levels: LevelMap,
    pub phi0: GraphMorphism,
    pub family: Vec<GraphMorphism>,
}

pub fn random_reduct_instance<R: Rng>(rng: &mut R) -> ReductInstance {
    let m = 2;
    let h0 = random_graph(rng, "h", 1, 4, 5);
    let mut levels = vec![h0.clone()];
    for _ in 1..=m {
        levels.push(random_subgraph(rng, &h0, 0.7));
    }
    let dst = InclusionChain::new(levels).unwrap();
    let n = rng.gen_range(0..=m);
    let f = random_level_map(rng, n, m);
    let (g0, phi0) = random_graph_over(rng, &h0, "g", 4, 5);
    let exact = rng.gen_bool(0.5);
    let mut src_levels = vec![g0.clone()];
    for j in 1..=n {
        let pre = phi0.preimage(dst.level(f.get(j)));
        src_levels.push(if exact || rng.gen_bool(0.5) {
            pre
        } else {
            random_subgraph(rng, &pre, 0.6)
        });
    }
    let src = InclusionChain::new(src_levels).unwrap();
    let family = (0..=n)
        .map(|j| {
            phi0.restrict(src.level(j))
                .unwrap()
                .with_codomain(dst.level(f.get(j)))
                .unwrap()
        })
        .collect();
    ReductInstance {
        src,
        dst,
        levels: f,
        phi0,
        family,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_chains_are_valid() {
        let mut r = rng(7);
        for _ in 0..50 {
            let depth = r.gen_range(0..4);
            let c = random_chain(&mut r, depth, 3, 3);
            assert!(c.validate().is_clean(), "{}", c.validate());
        }
    }

    #[test]
    fn graphs_over_are_homomorphic() {
        let mut r = rng(3);
        for _ in 0..50 {
            let b = random_graph(&mut r, "b", 1, 3, 4);
            let (a, h) = random_graph_over(&mut r, &b, "a", 4, 4);
            assert_eq!(h.dom(), &a);
        }
    }

    #[test]
    fn applications_build() {
        let mut r = rng(11);
        for _ in 0..30 {
            let app = random_application(&mut r, AppShape::default());
            assert!(mlrewrite_core::check_match(&app.rule, &app.host, &app.mat.mu, &app.mat.beta).is_empty());
        }
    }

    #[test]
    fn level_maps_obey_the_gap_law() {
        let mut r = rng(5);
        for _ in 0..50 {
            let m = r.gen_range(0..5);
            let n = r.gen_range(0..=m);
            let f = random_level_map(&mut r, n, m);
            assert_eq!(f.get(0), 0);
            assert!(f.images().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
