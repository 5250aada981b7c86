use super::{ChainError, InclusionChain, LevelMap, TypingChainMorphism};
use crate::graph::Graph;
use crate::limits::is_pullback_square;
use crate::morphism::GraphMorphism;

/// Pulls `target` back along `phi0: G_0 → H_0` and `levels`: level `j` of
/// the result is `phi0⁻¹(H_f(j))` and each map is a restriction of `phi0`.
pub fn reduct(
    target: &InclusionChain,
    phi0: &GraphMorphism,
    levels: &LevelMap,
) -> Result<(InclusionChain, TypingChainMorphism), ChainError> {
    if phi0.cod() != target.host() || levels.m() != target.depth() {
        return Err(ChainError::ChainMismatch);
    }
    let graphs: Vec<Graph> = (0..=levels.n())
        .map(|j| phi0.preimage(target.level(levels.get(j))))
        .collect();
    let maps = graphs
        .iter()
        .enumerate()
        .map(|(j, g)| {
            phi0.restrict(g)
                .and_then(|m| m.with_codomain(target.level(levels.get(j))))
                .map_err(|source| ChainError::AtLevel { level: j, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let chain = InclusionChain::new(graphs)?;
    let morphism = TypingChainMorphism::new(
        chain.as_chain().clone(),
        target.as_chain().clone(),
        levels.clone(),
        maps,
    )?;
    Ok((chain, morphism))
}

fn signature_ok(
    src: &InclusionChain,
    dst: &InclusionChain,
    levels: &LevelMap,
    family: &[GraphMorphism],
) -> bool {
    levels.n() == src.depth()
        && levels.m() == dst.depth()
        && family.len() == src.depth() + 1
        && family.iter().enumerate().all(|(i, m)| {
            m.dom() == src.level(i) && m.cod() == dst.level(levels.get(i))
        })
}

/// First characterisation of reducts: every square
/// `G_j ↪ G_0, φ_j, φ_0, H_f(j) ↪ H_0` (for `j > 0`) is a pullback.
pub fn left_squares_are_pullbacks(
    src: &InclusionChain,
    dst: &InclusionChain,
    levels: &LevelMap,
    family: &[GraphMorphism],
) -> bool {
    if !signature_ok(src, dst, levels, family) {
        return false;
    }
    (1..=src.depth()).all(|j| {
        let top = GraphMorphism::inclusion(src.level(j), src.host()).expect("inclusion chain");
        let bottom =
            GraphMorphism::inclusion(dst.level(levels.get(j)), dst.host()).expect("inclusion chain");
        is_pullback_square(&top, &family[j], &family[0], &bottom)
    })
}

/// Second characterisation of reducts: the family is a closed chain
/// morphism and, for all `j > i`, both squares from `G_j ∩ G_i` to
/// `H_f(j) ∩ H_f(i)` are pullbacks.
pub fn closed_with_pullback_intersections(
    src: &InclusionChain,
    dst: &InclusionChain,
    levels: &LevelMap,
    family: &[GraphMorphism],
) -> bool {
    if !signature_ok(src, dst, levels, family) {
        return false;
    }
    let Ok(m) = TypingChainMorphism::new(
        src.as_chain().clone(),
        dst.as_chain().clone(),
        levels.clone(),
        family.to_vec(),
    ) else {
        return false;
    };
    if !m.is_closed() {
        return false;
    }
    for j in 1..=src.depth() {
        for i in 0..j {
            let (gj, gi) = (src.level(j), src.level(i));
            let (hj, hi) = (dst.level(levels.get(j)), dst.level(levels.get(i)));
            let k = gj.intersection(gi);
            let k2 = hj.intersection(hi);
            let Ok(mid) = family[j].restrict(&k).and_then(|x| x.with_codomain(&k2)) else {
                return false;
            };
            let incl = |a: &Graph, b: &Graph| GraphMorphism::inclusion(a, b).expect("subgraph");
            let upper = is_pullback_square(&incl(&k, gi), &mid, &family[i], &incl(&k2, hi));
            let lower = is_pullback_square(&incl(&k, gj), &mid, &family[j], &incl(&k2, hj));
            if !(upper && lower) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
        Graph::build(nodes, arrows).unwrap()
    }

    #[test]
    fn identity_reduct_is_the_target() {
        let host = g(&["a", "b"], &[("e", "a", "b")]);
        let target = InclusionChain::new(vec![host.clone(), g(&["a"], &[])]).unwrap();
        let (src, m) = reduct(&target, &GraphMorphism::identity(&host), &LevelMap::identity(1)).unwrap();
        assert_eq!(src, target);
        assert!(m.is_closed());
    }

    #[test]
    fn single_node_match_survives_every_level() {
        let s = g(&["ghead"], &[]);
        let target = InclusionChain::constant(&s, 2);
        let l = g(&["m1"], &[]);
        let mu = GraphMorphism::from_pairs(&l, &s, &[("m1", "ghead")], &[]).unwrap();
        let f = LevelMap::new(vec![0, 1], 2).unwrap();
        let (src, m) = reduct(&target, &mu, &f).unwrap();
        assert_eq!(src.level(1), &l);
        assert!(left_squares_are_pullbacks(&src, &target, &f, m.maps()));
        assert!(closed_with_pullback_intersections(&src, &target, &f, m.maps()));
    }

    #[test]
    fn too_small_level_fails_both_conditions() {
        let host = g(&["u"], &[]);
        let target = InclusionChain::constant(&host, 1);
        let gc = InclusionChain::new(vec![g(&["x"], &[]), Graph::new()]).unwrap();
        let phi0 = GraphMorphism::from_pairs(gc.host(), &host, &[("x", "u")], &[]).unwrap();
        let phi1 = GraphMorphism::from_pairs(gc.level(1), &host, &[], &[]).unwrap();
        let f = LevelMap::identity(1);
        let family = [phi0, phi1];
        assert!(!left_squares_are_pullbacks(&gc, &target, &f, &family));
        assert!(!closed_with_pullback_intersections(&gc, &target, &f, &family));
    }
}
