//! Naive enumeration of graph homomorphisms, independent of the matcher.

use std::collections::BTreeMap;

use mlrewrite_core::{ElementId, Graph, GraphMorphism};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every homomorphism `a → b`: all node maps, then all compatible arrow
/// choices.
pub fn all_homs(a: &Graph, b: &Graph) -> Vec<GraphMorphism> {
    constrained_homs(a, b, &|_, _| true)
}

/// Every homomorphism `a → b` whose element images satisfy `allowed`.
pub fn constrained_homs(
    a: &Graph,
    b: &Graph,
    allowed: &dyn Fn(&ElementId, &str) -> bool,
) -> Vec<GraphMorphism> {
    let an: Vec<&str> = a.nodes().collect();
    let bn: Vec<&str> = b.nodes().collect();
    let node_choices: Vec<Vec<&str>> = an
        .iter()
        .map(|x| {
            bn.iter()
                .copied()
                .filter(|y| allowed(&ElementId::node(*x), y))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; an.len()];
    if node_choices.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let nodes: BTreeMap<String, String> = an
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(k, (x, &i))| (x.to_string(), node_choices[k][i].to_string()))
            .collect();
        // Arrow candidates given the node map.
        let arrow_choices: Vec<(&str, Vec<&str>)> = a
            .arrows()
            .map(|(e, ends)| {
                let (s, t) = (&nodes[&ends.src], &nodes[&ends.tgt]);
                let cands = b
                    .arrows()
                    .filter(|(f, fe)| {
                        &fe.src == s && &fe.tgt == t && allowed(&ElementId::arrow(e), f)
                    })
                    .map(|(f, _)| f)
                    .collect();
                (e, cands)
            })
            .collect();
        if arrow_choices.iter().all(|(_, c)| !c.is_empty()) {
            let mut aidx = vec![0usize; arrow_choices.len()];
            loop {
                let arrows = arrow_choices
                    .iter()
                    .zip(&aidx)
                    .map(|((e, c), &i)| (e.to_string(), c[i].to_string()))
                    .collect();
                out.push(
                    GraphMorphism::new(a.clone(), b.clone(), nodes.clone(), arrows)
                        .expect("endpoints agree by construction"),
                );
                if !bump(&mut aidx, |k| arrow_choices[k].1.len()) {
                    break;
                }
            }
        }
        if !bump(&mut idx, |k| node_choices[k].len()) {
            break;
        }
    }
    out
}

/// Odometer increment; false once every combination has been visited.
fn bump(idx: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < radix(k) {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Whether two graphs are isomorphic.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.node_count() == b.node_count()
        && a.arrow_count() == b.arrow_count()
        && all_homs(a, b).iter().any(GraphMorphism::is_isomorphism)
}

/// A uniformly shuffled depth-first search for one homomorphism `a → b`.
pub fn random_hom<R: Rng>(rng: &mut R, a: &Graph, b: &Graph) -> Option<GraphMorphism> {
    let an: Vec<String> = a.nodes().map(str::to_string).collect();
    let mut nodes = BTreeMap::new();
    fn go<R: Rng>(
        rng: &mut R,
        k: usize,
        an: &[String],
        a: &Graph,
        b: &Graph,
        nodes: &mut BTreeMap<String, String>,
    ) -> bool {
        if k == an.len() {
            return true;
        }
        let mut cands: Vec<&str> = b.nodes().collect();
        cands.shuffle(rng);
        for c in cands {
            nodes.insert(an[k].clone(), c.to_string());
            // Every arrow whose endpoints are both assigned needs a target.
            let ok = a.arrows().all(|(_, e)| match (nodes.get(&e.src), nodes.get(&e.tgt)) {
                (Some(s), Some(t)) => b.arrows().any(|(_, f)| &f.src == s && &f.tgt == t),
                _ => true,
            });
            if ok && go(rng, k + 1, an, a, b, nodes) {
                return true;
            }
            nodes.remove(&an[k]);
        }
        false
    }
    if !go(rng, 0, &an, a, b, &mut nodes) {
        return None;
    }
    let arrows = a
        .arrows()
        .map(|(e, ends)| {
            let cands: Vec<&str> = b
                .arrows()
                .filter(|(_, f)| f.src == nodes[&ends.src] && f.tgt == nodes[&ends.tgt])
                .map(|(f, _)| f)
                .collect();
            (e.to_string(), cands.choose(rng).unwrap().to_string())
        })
        .collect();
    Some(GraphMorphism::new(a.clone(), b.clone(), nodes, arrows).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
        Graph::build(nodes, arrows).unwrap()
    }

    #[test]
    fn counts() {
        let p = g(&["a", "b"], &[("e", "a", "b")]);
        let t = g(&["x", "y"], &[("f", "x", "y"), ("h", "x", "y"), ("l", "x", "x")]);
        // e ↦ f, h (a→x, b→y) or l (a, b ↦ x).
        assert_eq!(all_homs(&p, &t).len(), 3);
        assert_eq!(all_homs(&Graph::new(), &t).len(), 1);
        assert!(all_homs(&p, &Graph::new()).is_empty());
    }

    #[test]
    fn iso() {
        let a = g(&["a", "b"], &[("e", "a", "b")]);
        let b = g(&["x", "y"], &[("f", "y", "x")]);
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &g(&["x", "y"], &[("f", "x", "x")])));
    }
}
