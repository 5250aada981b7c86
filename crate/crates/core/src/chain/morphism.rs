use std::fmt;

use super::{ChainError, LevelMap, TypingChain};
use crate::graph::ElementId;
use crate::morphism::GraphMorphism;

/// A level map `f` with total maps `φ_i: G_i → H_f(i)` such that
/// `τG(j,i);φ_i ⪯ φ_j;τH(f(j),f(i))` for all `j > i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypingChainMorphism {
    src: TypingChain,
    dst: TypingChain,
    levels: LevelMap,
    maps: Vec<GraphMorphism>,
}

/// An element `e ∈ G_j` where `τG(j,i);φ_i` is defined but disagrees with
/// (or is undefined on) `φ_j;τH(f(j),f(i))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompatibilityViolation {
    pub j: usize,
    pub i: usize,
    pub element: ElementId,
}

impl fmt::Display for CompatibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "typing of {} from level {} to level {} is not preserved",
            self.element, self.j, self.i
        )
    }
}

/// Compares `τG(j,i);φ_i` with `φ_j;τH(f(j),f(i))` at every element; yields
/// `(j, i, e, lhs, rhs)`.
fn sides<'a>(
    src: &'a TypingChain,
    dst: &'a TypingChain,
    levels: &'a LevelMap,
    maps: &'a [GraphMorphism],
) -> impl Iterator<Item = (usize, usize, ElementId, Option<ElementId>, Option<ElementId>)> + 'a {
    (1..=src.depth()).flat_map(move |j| {
        (0..j).flat_map(move |i| {
            let (fj, fi) = (levels.get(j), levels.get(i));
            src.graph(j).elements().map(move |e| {
                let lhs = src
                    .tau(j, i)
                    .apply(&e)
                    .map(|x| maps[i].apply(&x).expect("total map"));
                let image = maps[j].apply(&e).expect("total map");
                let rhs = dst.tau(fj, fi).apply(&image);
                (j, i, e, lhs, rhs)
            })
        })
    })
}

impl TypingChainMorphism {
    pub fn new(
        src: TypingChain,
        dst: TypingChain,
        levels: LevelMap,
        maps: Vec<GraphMorphism>,
    ) -> Result<Self, ChainError> {
        if levels.n() != src.depth() || levels.m() != dst.depth() || maps.len() != src.depth() + 1
        {
            return Err(ChainError::ChainMismatch);
        }
        for (i, m) in maps.iter().enumerate() {
            if m.dom() != src.graph(i) || m.cod() != dst.graph(levels.get(i)) {
                return Err(ChainError::MapSignature { level: i });
            }
        }
        let morphism = TypingChainMorphism {
            src,
            dst,
            levels,
            maps,
        };
        if let Some(v) = morphism.compatibility_violations().into_iter().next() {
            return Err(ChainError::Incompatible(v));
        }
        Ok(morphism)
    }

    pub fn identity(chain: &TypingChain) -> Self {
        TypingChainMorphism {
            src: chain.clone(),
            dst: chain.clone(),
            levels: LevelMap::identity(chain.depth()),
            maps: chain.graphs().iter().map(GraphMorphism::identity).collect(),
        }
    }

    pub fn src(&self) -> &TypingChain {
        &self.src
    }

    pub fn dst(&self) -> &TypingChain {
        &self.dst
    }

    pub fn levels(&self) -> &LevelMap {
        &self.levels
    }

    pub fn map(&self, i: usize) -> &GraphMorphism {
        &self.maps[i]
    }

    pub fn maps(&self) -> &[GraphMorphism] {
        &self.maps
    }

    /// Every element where the compatibility law fails.
    pub fn compatibility_violations(&self) -> Vec<CompatibilityViolation> {
        sides(&self.src, &self.dst, &self.levels, &self.maps)
            .filter(|(_, _, _, lhs, rhs)| lhs.is_some() && lhs != rhs)
            .map(|(j, i, element, _, _)| CompatibilityViolation { j, i, element })
            .collect()
    }

    /// Whether the compatibility law holds with equality everywhere.
    pub fn is_closed(&self) -> bool {
        sides(&self.src, &self.dst, &self.levels, &self.maps).all(|(_, _, _, lhs, rhs)| lhs == rhs)
    }

    /// `(φ, f);(ψ, g) = (φ_i;ψ_f(i), f;g)`.
    pub fn compose(&self, next: &TypingChainMorphism) -> Result<TypingChainMorphism, ChainError> {
        if self.dst != next.src {
            return Err(ChainError::ChainMismatch);
        }
        let levels = self.levels.then(&next.levels)?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| m.then(next.map(self.levels.get(i))))
            .collect::<Result<Vec<_>, _>>()?;
        TypingChainMorphism::new(self.src.clone(), next.dst.clone(), levels, maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::InclusionChain;
    use crate::graph::Graph;

    fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
        Graph::build(nodes, arrows).unwrap()
    }

    #[test]
    fn identity_is_closed_and_neutral() {
        let host = g(&["a", "b"], &[("e", "a", "b")]);
        let c = InclusionChain::new(vec![host.clone(), g(&["a"], &[])]).unwrap();
        let id = TypingChainMorphism::identity(c.as_chain());
        assert!(id.is_closed());
        assert!(id.compatibility_violations().is_empty());
        assert_eq!(id.compose(&id).unwrap(), id);
    }

    #[test]
    fn untyped_onto_typed_is_not_closed() {
        // G: G_2 = {x}, G_1 = {}, G_0 = {x}; H constant {u}. x stays untyped
        // at level 1 although its image is typed there.
        let x = g(&["x"], &[]);
        let gc = InclusionChain::new(vec![x.clone(), Graph::new(), x]).unwrap();
        let hc = InclusionChain::constant(&g(&["u"], &[]), 2);
        let to_u = |i: usize| {
            let pairs: &[(&str, &str)] = if i == 1 { &[] } else { &[("x", "u")] };
            GraphMorphism::from_pairs(gc.level(i), hc.level(i), pairs, &[]).unwrap()
        };
        let m = TypingChainMorphism::new(
            gc.as_chain().clone(),
            hc.as_chain().clone(),
            LevelMap::identity(2),
            (0..=2).map(to_u).collect(),
        )
        .unwrap();
        assert!(!m.is_closed());
    }

    #[test]
    fn disagreeing_types_are_rejected() {
        use crate::morphism::PartialGraphMorphism;
        use std::collections::BTreeMap;

        let chain = |top: &[&str], bottom: &str, image: &str| {
            let g0 = g(top, &[]);
            let g1 = g(&[bottom], &[]);
            let t = GraphMorphism::from_pairs(&g1, &g0, &[(bottom, image)], &[]).unwrap();
            let typing = BTreeMap::from([((1, 0), PartialGraphMorphism::total(t))]);
            TypingChain::new(vec![g0, g1], typing).unwrap()
        };
        let src = chain(&["a", "b"], "x", "a");
        let dst = chain(&["c", "d"], "u", "c");
        let phi = |to: &str| {
            GraphMorphism::from_pairs(src.graph(0), dst.graph(0), &[("a", to), ("b", "d")], &[])
                .unwrap()
        };
        let phi1 = GraphMorphism::from_pairs(src.graph(1), dst.graph(1), &[("x", "u")], &[]).unwrap();
        let bad = TypingChainMorphism::new(
            src.clone(),
            dst.clone(),
            LevelMap::identity(1),
            vec![phi("d"), phi1.clone()],
        );
        assert_eq!(
            bad,
            Err(ChainError::Incompatible(CompatibilityViolation {
                j: 1,
                i: 0,
                element: ElementId::node("x"),
            }))
        );
        let good = phi("c");
        let good = TypingChainMorphism::new(src.clone(), dst.clone(), LevelMap::identity(1), vec![good, phi1]);
        assert!(good.unwrap().is_closed());
    }
}
