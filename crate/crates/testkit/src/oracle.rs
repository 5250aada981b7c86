//! Universal-property checks by exhaustive enumeration over small test
//! graphs.

use std::collections::{BTreeMap, BTreeSet};

use mlrewrite_core::limits::Pullback;
use mlrewrite_core::{ElementId, Graph, GraphMorphism};

use crate::brute::{all_homs, constrained_homs};

fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
    Graph::build(nodes, arrows).unwrap()
}

/// Test objects for cones: every graph up to two nodes with at most one
/// arrow per ordered pair, plus a few three- and four-node shapes.
pub fn cone_catalogue() -> Vec<Graph> {
    vec![
        Graph::new(),
        g(&["a"], &[]),
        g(&["a"], &[("l", "a", "a")]),
        g(&["a", "b"], &[]),
        g(&["a", "b"], &[("e", "a", "b")]),
        g(&["a", "b"], &[("e", "a", "b"), ("f", "b", "a")]),
        g(&["a", "b"], &[("e", "a", "b"), ("l", "a", "a")]),
        g(&["a", "b"], &[("e", "a", "b"), ("f", "a", "b")]),
        g(&["a", "b", "c"], &[("e", "a", "b"), ("f", "b", "c")]),
        g(&["a", "b", "c"], &[("e", "a", "b"), ("f", "c", "b")]),
        g(&["a", "b", "c", "d"], &[("e", "a", "b"), ("f", "c", "d")]),
    ]
}

/// Test objects for cocones. Two points separate nodes, and parallel
/// arrows or loops separate arrows.
pub fn cocone_catalogue() -> Vec<Graph> {
    vec![
        g(&["x"], &[]),
        g(&["x"], &[("l", "x", "x")]),
        g(&["x"], &[("l", "x", "x"), ("m", "x", "x")]),
        g(&["x", "y"], &[]),
        g(&["x", "y"], &[("e", "x", "y")]),
        g(
            &["x", "y"],
            &[("e", "x", "y"), ("f", "x", "y"), ("l", "x", "x"), ("m", "y", "y"), ("b", "y", "x")],
        ),
        g(&["x", "y", "z"], &[("e", "x", "y"), ("f", "y", "z"), ("l", "z", "z")]),
    ]
}

/// Outcome of a universal-property check; `Err` names the first failure.
pub type Verdict = Result<(), String>;

fn agree(a: &GraphMorphism, b: &GraphMorphism) -> bool {
    a.node_map() == b.node_map() && a.arrow_map() == b.arrow_map()
}

/// Number of `u: x → p` with `u;p1 = c1` and `u;p2 = c2`.
fn count_mediating_into(
    x: &Graph,
    p: &Graph,
    p1: &GraphMorphism,
    p2: &GraphMorphism,
    c1: &GraphMorphism,
    c2: &GraphMorphism,
) -> usize {
    let allowed = |e: &ElementId, image: &str| {
        let img = ElementId {
            kind: e.kind,
            name: image.to_string(),
        };
        p1.apply(&img) == c1.apply(e) && p2.apply(&img) == c2.apply(e)
    };
    constrained_homs(x, p, &allowed).len()
}

/// Checks that `(apex, p1: apex → A, p2: apex → B)` is a pullback of
/// `f: A → C` and `g: B → C`: the square commutes and every cone from a
/// catalogue graph factors uniquely.
pub fn check_pullback(
    apex: &Graph,
    p1: &GraphMorphism,
    p2: &GraphMorphism,
    f: &GraphMorphism,
    h: &GraphMorphism,
) -> Verdict {
    if p1.dom() != apex || p2.dom() != apex || p1.cod() != f.dom() || p2.cod() != h.dom() {
        return Err("projections have the wrong signature".into());
    }
    if !agree(&p1.then(f).unwrap(), &p2.then(h).unwrap()) {
        return Err("square does not commute".into());
    }
    for x in cone_catalogue() {
        for c1 in all_homs(&x, f.dom()) {
            let c1f = c1.then(f).unwrap();
            let allowed = |e: &ElementId, image: &str| {
                let img = ElementId {
                    kind: e.kind,
                    name: image.to_string(),
                };
                h.apply(&img) == c1f.apply(e)
            };
            for c2 in constrained_homs(&x, h.dom(), &allowed) {
                let n = count_mediating_into(&x, apex, p1, p2, &c1, &c2);
                if n != 1 {
                    return Err(format!(
                        "cone from {x} via {:?} / {:?} has {n} mediating morphisms",
                        c1.node_map(),
                        c2.node_map()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// [`check_pullback`] for a computed [`Pullback`].
pub fn check_pullback_result(pb: &Pullback, f: &GraphMorphism, h: &GraphMorphism) -> Verdict {
    check_pullback(&pb.apex, &pb.first, &pb.second, f, h)
}

/// Number of `u: p → q` with `i1;u = q1` and `i2;u = q2`. When the
/// injections cover `p` the candidate is forced, so only its consistency and
/// the homomorphism law need checking; otherwise all maps are enumerated.
fn count_mediating_out_of(
    p: &Graph,
    q: &Graph,
    i1: &GraphMorphism,
    i2: &GraphMorphism,
    q1: &GraphMorphism,
    q2: &GraphMorphism,
) -> usize {
    let mut forced: BTreeMap<ElementId, BTreeSet<ElementId>> = BTreeMap::new();
    for (i, qq) in [(i1, q1), (i2, q2)] {
        for d in i.dom().elements() {
            forced
                .entry(i.apply(&d).expect("total map"))
                .or_default()
                .insert(qq.apply(&d).expect("total map"));
        }
    }
    if p.elements().any(|e| !forced.contains_key(&e)) {
        let allowed = |e: &ElementId, image: &str| {
            let img = ElementId {
                kind: e.kind,
                name: image.to_string(),
            };
            forced.get(e).is_none_or(|s| s.len() == 1 && s.contains(&img))
        };
        return constrained_homs(p, q, &allowed).len();
    }
    if forced.values().any(|s| s.len() > 1) {
        return 0;
    }
    let image = |e: ElementId| forced[&e].first().expect("non-empty").name.clone();
    let law = p.arrows().all(|(a, ends)| {
        let t = q.ends(&image(ElementId::arrow(a))).expect("arrow of q");
        t.src == image(ElementId::node(ends.src.as_str()))
            && t.tgt == image(ElementId::node(ends.tgt.as_str()))
    });
    usize::from(law)
}

/// Checks that `(apex, i1: H → apex, i2: K → apex)` is a pushout of
/// `l: G → H` and `m: G → K` against every cocone into the catalogue.
pub fn check_pushout(
    apex: &Graph,
    i1: &GraphMorphism,
    i2: &GraphMorphism,
    l: &GraphMorphism,
    m: &GraphMorphism,
) -> Verdict {
    if i1.cod() != apex || i2.cod() != apex || i1.dom() != l.cod() || i2.dom() != m.cod() {
        return Err("injections have the wrong signature".into());
    }
    if !agree(&l.then(i1).unwrap(), &m.then(i2).unwrap()) {
        return Err("square does not commute".into());
    }
    for q in cocone_catalogue() {
        for q2 in all_homs(m.cod(), &q) {
            let mq = m.then(&q2).unwrap();
            // q1 must agree with m;q2 on the image of l.
            let allowed = |e: &ElementId, image: &str| {
                let img = ElementId {
                    kind: e.kind,
                    name: image.to_string(),
                };
                l.dom()
                    .elements()
                    .filter(|d| l.apply(d).as_ref() == Some(e))
                    .all(|d| mq.apply(&d).as_ref() == Some(&img))
            };
            for q1 in constrained_homs(l.cod(), &q, &allowed) {
                let n = count_mediating_out_of(apex, &q, i1, i2, &q1, &q2);
                if n != 1 {
                    return Err(format!(
                        "cocone into {q} has {n} mediating morphisms"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// All subgraphs of `g`, as long as `g` has at most `limit` elements.
pub fn all_subgraphs(g: &Graph, limit: usize) -> Option<Vec<Graph>> {
    let nodes: Vec<String> = g.nodes().map(str::to_string).collect();
    let arrows: Vec<String> = g.arrow_names().map(str::to_string).collect();
    if nodes.len() + arrows.len() > limit {
        return None;
    }
    let mut out = Vec::new();
    for nm in 0u32..(1 << nodes.len()) {
        let kept: BTreeSet<&str> = nodes
            .iter()
            .enumerate()
            .filter(|(k, _)| nm & (1 << k) != 0)
            .map(|(_, n)| n.as_str())
            .collect();
        let usable: Vec<&String> = arrows
            .iter()
            .filter(|a| {
                let e = g.ends(a).unwrap();
                kept.contains(e.src.as_str()) && kept.contains(e.tgt.as_str())
            })
            .collect();
        for am in 0u32..(1 << usable.len()) {
            let chosen = usable
                .iter()
                .enumerate()
                .filter(|(k, _)| am & (1 << k) != 0)
                .map(|(_, a)| a.as_str());
            out.push(g.induced(kept.iter().copied(), chosen).unwrap());
        }
    }
    Some(out)
}

/// Candidate pullback complements `θ′: T′ → D` used to probe finality:
/// subgraph inclusions (all of them when `D` is small, otherwise `D`, `T`
/// and one-element deviations from `T`), plus every morphism from a small
/// catalogue graph into `D`.
pub fn complement_candidates(d: &Graph, t: &Graph) -> Vec<GraphMorphism> {
    let mut subs = all_subgraphs(d, 12).unwrap_or_else(|| {
        let mut v = vec![d.clone(), t.clone()];
        for e in d.elements() {
            let (mut ns, mut as_) = (BTreeSet::new(), BTreeSet::new());
            match e.kind {
                mlrewrite_core::Kind::Node => ns.insert(e.name.clone()),
                mlrewrite_core::Kind::Arrow => as_.insert(e.name.clone()),
            };
            v.push(d.without(&ns, &as_));
            if !t.contains(&e) {
                let mut nodes: BTreeSet<&str> = t.nodes().collect();
                let mut arrows: BTreeSet<&str> = t.arrow_names().collect();
                match e.kind {
                    mlrewrite_core::Kind::Node => {
                        nodes.insert(&e.name);
                    }
                    mlrewrite_core::Kind::Arrow => {
                        let ends = d.ends(&e.name).unwrap();
                        nodes.insert(&ends.src);
                        nodes.insert(&ends.tgt);
                        arrows.insert(&e.name);
                    }
                }
                v.push(d.induced(nodes, arrows).unwrap());
            }
        }
        v
    });
    subs.sort();
    subs.dedup();
    let mut out: Vec<GraphMorphism> = subs
        .iter()
        .map(|s| GraphMorphism::inclusion(s, d).unwrap())
        .collect();
    for x in cone_catalogue().into_iter().take(8) {
        out.extend(all_homs(&x, d));
    }
    out
}

/// The pullback of `theta2: T′ → D` and `delta: I → D` by brute force, as
/// the set of pairs; returns the I-components.
fn pullback_i_components(theta2: &GraphMorphism, delta: &GraphMorphism) -> BTreeSet<ElementId> {
    let mut out = BTreeSet::new();
    for t in theta2.dom().elements() {
        let img = theta2.apply(&t);
        for i in delta.dom().elements() {
            if i.kind == t.kind && delta.apply(&i) == img {
                out.insert(i);
            }
        }
    }
    out
}

/// Pullback property and finality of `(T, θ, ν)` as a complement of
/// `rho: R ↪ I` and `delta: I → D`.
pub fn check_fpbc(
    rho: &GraphMorphism,
    delta: &GraphMorphism,
    t: &Graph,
    theta: &GraphMorphism,
    nu: &GraphMorphism,
) -> Verdict {
    check_pullback(rho.dom(), nu, rho, theta, delta).map_err(|e| format!("not a pullback: {e}"))?;
    if !theta.is_inclusion() || theta.dom() != t {
        return Err("θ must include T into D".into());
    }
    let r = rho.dom();
    for cand in complement_candidates(delta.cod(), t) {
        let comps = pullback_i_components(&cand, delta);
        if comps.iter().all(|e| r.contains(e)) {
            // Then θ′ must factor through T.
            let img = cand.image();
            if !img.is_subgraph_of(t) {
                return Err(format!(
                    "complement candidate with image {img} does not factor through {t}"
                ));
            }
        }
    }
    Ok(())
}

/// Whether some candidate `θ′: T′ → D` has a pullback with `delta` whose
/// projection onto `I` is exactly `R` (with `R` pulled back once).
pub fn some_complement_exists(rho: &GraphMorphism, delta: &GraphMorphism) -> bool {
    let d = delta.cod();
    let r = rho.dom();
    let subs = all_subgraphs(d, 14).expect("small instance");
    subs.iter().any(|s| {
        let theta2 = GraphMorphism::inclusion(s, d).unwrap();
        // With an inclusion θ′ the pullback is δ⁻¹(T′).
        let back = delta.preimage(s);
        let _ = &theta2;
        &back == r
    })
}
