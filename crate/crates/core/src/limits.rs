//! Pullbacks, pushouts along inclusions and final pullback complements in
//! the category of graphs.
//!
//! The final pullback complement follows the usual sesqui-pushout deletion
//! for a mono `R ↪ I`: remove the image of `I ∖ R`, then every arrow left
//! dangling. It is rejected when a deleted element shares its image with a
//! preserved one. Both the pullback property and finality are checked
//! independently by the enumeration oracles in the test suite.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GraphError;
use crate::graph::{ElementId, Graph, Kind};
use crate::morphism::GraphMorphism;

/// Apex of a pullback with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: Graph,
    /// Projection onto the domain of the first leg.
    pub first: GraphMorphism,
    /// Projection onto the domain of the second leg.
    pub second: GraphMorphism,
}

/// Name of the pair `(x,y)`; commas, parentheses and backslashes inside
/// components are escaped so distinct pairs never share a name.
pub fn pair_name(x: &str, y: &str) -> String {
    fn esc(s: &str, out: &mut String) {
        for c in s.chars() {
            if matches!(c, ',' | '(' | ')' | '\\') {
                out.push('\\');
            }
            out.push(c);
        }
    }
    let mut out = String::with_capacity(x.len() + y.len() + 3);
    out.push('(');
    esc(x, &mut out);
    out.push(',');
    esc(y, &mut out);
    out.push(')');
    out
}

/// Componentwise pullback of `f: A → C` and `g: B → C`.
pub fn pullback(f: &GraphMorphism, g: &GraphMorphism) -> Result<Pullback, GraphError> {
    if f.cod() != g.cod() {
        return Err(GraphError::CodomainMismatch);
    }
    let (a, b) = (f.dom(), g.dom());
    let mut apex = Graph::new();
    let mut first_nodes = BTreeMap::new();
    let mut second_nodes = BTreeMap::new();
    for x in a.nodes() {
        for y in b.nodes() {
            if f.node(x) == g.node(y) {
                let p = pair_name(x, y);
                apex.add_node(p.clone())?;
                first_nodes.insert(p.clone(), x.to_string());
                second_nodes.insert(p, y.to_string());
            }
        }
    }
    let mut first_arrows = BTreeMap::new();
    let mut second_arrows = BTreeMap::new();
    for (x, ex) in a.arrows() {
        for (y, ey) in b.arrows() {
            if f.arrow(x) == g.arrow(y) {
                let p = pair_name(x, y);
                apex.add_arrow(
                    p.clone(),
                    pair_name(&ex.src, &ey.src),
                    pair_name(&ex.tgt, &ey.tgt),
                )?;
                first_arrows.insert(p.clone(), x.to_string());
                second_arrows.insert(p, y.to_string());
            }
        }
    }
    let first = GraphMorphism::new(apex.clone(), a.clone(), first_nodes, first_arrows)?;
    let second = GraphMorphism::new(apex.clone(), b.clone(), second_nodes, second_arrows)?;
    Ok(Pullback {
        apex,
        first,
        second,
    })
}

/// Checks that the square
///
/// ```text
///   A --top--> B
///   |          |
/// left       right
///   v          v
///   C -bottom-> D
/// ```
///
/// commutes and that `A` is in bijection with `{(b, c) | right(b) = bottom(c)}`
/// through `(top, left)`.
pub fn is_pullback_square(
    top: &GraphMorphism,
    left: &GraphMorphism,
    right: &GraphMorphism,
    bottom: &GraphMorphism,
) -> bool {
    if top.dom() != left.dom()
        || top.cod() != right.dom()
        || left.cod() != bottom.dom()
        || right.cod() != bottom.cod()
    {
        return false;
    }
    let a = top.dom();
    let mut node_pairs = BTreeSet::new();
    for x in a.nodes() {
        let (b, c) = (top.node(x).unwrap(), left.node(x).unwrap());
        if right.node(b) != bottom.node(c) || !node_pairs.insert((b, c)) {
            return false;
        }
    }
    let mut arrow_pairs = BTreeSet::new();
    for x in a.arrow_names() {
        let (b, c) = (top.arrow(x).unwrap(), left.arrow(x).unwrap());
        if right.arrow(b) != bottom.arrow(c) || !arrow_pairs.insert((b, c)) {
            return false;
        }
    }
    let all_nodes = right.dom().nodes().all(|b| {
        bottom
            .dom()
            .nodes()
            .filter(|c| right.node(b) == bottom.node(c))
            .all(|c| node_pairs.contains(&(b, c)))
    });
    let all_arrows = right.dom().arrow_names().all(|b| {
        bottom
            .dom()
            .arrow_names()
            .filter(|c| right.arrow(b) == bottom.arrow(c))
            .all(|c| arrow_pairs.contains(&(b, c)))
    });
    all_nodes && all_arrows
}

/// Pushout of an inclusion `G ↪ H` along `mu: G → K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    /// `P = K + H ∖ G`.
    pub apex: Graph,
    /// The inclusion `K ↪ P`.
    pub incl: GraphMorphism,
    /// `mu + id` on `H ∖ G` (after renaming), `H → P`.
    pub map: GraphMorphism,
    /// Elements of `H ∖ G` whose names clashed with `K`, with their new names.
    pub renamed: BTreeMap<ElementId, String>,
}

/// Picks `name#k` with the smallest `k ≥ 2` not in `taken`.
pub fn fresh_name(name: &str, taken: &BTreeSet<String>) -> String {
    (2usize..)
        .map(|k| format!("{name}#{k}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded search")
}

fn freshen(
    added: &BTreeSet<String>,
    existing: &BTreeSet<String>,
    kind: Kind,
    renamed: &mut BTreeMap<ElementId, String>,
) -> BTreeMap<String, String> {
    let mut taken: BTreeSet<String> = existing.union(added).cloned().collect();
    added
        .iter()
        .map(|x| {
            let target = if existing.contains(x) {
                let f = fresh_name(x, &taken);
                taken.insert(f.clone());
                renamed.insert(
                    ElementId {
                        kind,
                        name: x.clone(),
                    },
                    f.clone(),
                );
                f
            } else {
                x.clone()
            };
            (x.clone(), target)
        })
        .collect()
}

/// Pushout of `lambda: G ↪ H` (an inclusion) and `mu: G → K`.
///
/// Names of `H ∖ G` that clash with names in `K` are freshened to `name#k`.
pub fn pushout_inclusion(lambda: &GraphMorphism, mu: &GraphMorphism) -> Result<Pushout, GraphError> {
    if !lambda.is_inclusion() {
        return Err(GraphError::NotInclusion);
    }
    if lambda.dom() != mu.dom() {
        return Err(GraphError::SignatureMismatch);
    }
    let (g, h, k) = (lambda.dom(), lambda.cod(), mu.cod());

    let added_nodes: BTreeSet<String> = h
        .nodes()
        .filter(|n| !g.has_node(n))
        .map(str::to_string)
        .collect();
    let added_arrows: BTreeSet<String> = h
        .arrow_names()
        .filter(|a| !g.has_arrow(a))
        .map(str::to_string)
        .collect();
    let k_arrows: BTreeSet<String> = k.arrow_names().map(str::to_string).collect();

    let mut renamed = BTreeMap::new();
    let node_names = freshen(&added_nodes, k.node_set(), Kind::Node, &mut renamed);
    let arrow_names = freshen(&added_arrows, &k_arrows, Kind::Arrow, &mut renamed);

    let node_image = |n: &str| -> String {
        match mu.node(n) {
            Some(img) => img.to_string(),
            None => node_names[n].clone(),
        }
    };

    let mut apex = k.clone();
    for n in &added_nodes {
        apex.add_node(node_names[n].clone())?;
    }
    for a in &added_arrows {
        let ends = h.ends(a).expect("arrow of H");
        apex.add_arrow(
            arrow_names[a].clone(),
            node_image(&ends.src),
            node_image(&ends.tgt),
        )?;
    }

    let incl = GraphMorphism::inclusion(k, &apex)?;
    let map = GraphMorphism::new(
        h.clone(),
        apex.clone(),
        h.nodes().map(|n| (n.to_string(), node_image(n))).collect(),
        h.arrow_names()
            .map(|a| {
                let img = mu
                    .arrow(a)
                    .map(str::to_string)
                    .unwrap_or_else(|| arrow_names[a].clone());
                (a.to_string(), img)
            })
            .collect(),
    )?;
    Ok(Pushout {
        apex,
        incl,
        map,
        renamed,
    })
}

/// Final pullback complement of `rho: R ↪ I` (an inclusion) and `delta: I → D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackComplement {
    pub apex: Graph,
    /// The inclusion `T ↪ D`.
    pub incl: GraphMorphism,
    /// The co-match `R → T`; always total.
    pub comatch: GraphMorphism,
}

pub fn final_pullback_complement(
    rho: &GraphMorphism,
    delta: &GraphMorphism,
) -> Result<PullbackComplement, GraphError> {
    if !rho.is_inclusion() {
        return Err(GraphError::NotInclusion);
    }
    if rho.cod() != delta.dom() {
        return Err(GraphError::CodomainMismatch);
    }
    let (r, i, d) = (rho.dom(), rho.cod(), delta.cod());

    let mut deleted_nodes = BTreeMap::new();
    for x in i.nodes().filter(|x| !r.has_node(x)) {
        deleted_nodes
            .entry(delta.node(x).unwrap().to_string())
            .or_insert_with(|| x.to_string());
    }
    let mut deleted_arrows = BTreeMap::new();
    for x in i.arrow_names().filter(|x| !r.has_arrow(x)) {
        deleted_arrows
            .entry(delta.arrow(x).unwrap().to_string())
            .or_insert_with(|| x.to_string());
    }

    for y in r.nodes() {
        let img = delta.node(y).unwrap();
        if let Some(x) = deleted_nodes.get(img) {
            return Err(GraphError::IdentificationConflict {
                deleted: ElementId::node(x.clone()),
                preserved: ElementId::node(y),
                image: img.to_string(),
            });
        }
    }
    for y in r.arrow_names() {
        let img = delta.arrow(y).unwrap();
        if let Some(x) = deleted_arrows.get(img) {
            return Err(GraphError::IdentificationConflict {
                deleted: ElementId::arrow(x.clone()),
                preserved: ElementId::arrow(y),
                image: img.to_string(),
            });
        }
    }

    let removed_nodes: BTreeSet<String> = deleted_nodes.into_keys().collect();
    let removed_arrows: BTreeSet<String> = deleted_arrows.into_keys().collect();
    let apex = d.without(&removed_nodes, &removed_arrows);

    let incl = GraphMorphism::inclusion(&apex, d)?;
    let comatch = rho.then(delta)?.with_codomain(&apex).map_err(|e| {
        GraphError::PullbackViolation(format!("co-match does not land in the complement: {e}"))
    })?;

    // δ⁻¹(T) must be exactly R.
    let back = delta.preimage(&apex);
    if &back != r {
        return Err(GraphError::PullbackViolation(format!(
            "preimage of the complement is {back}, expected {r}"
        )));
    }
    Ok(PullbackComplement {
        apex,
        incl,
        comatch,
    })
}
