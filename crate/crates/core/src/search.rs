//! Backtracking enumeration of graph homomorphisms.
//!
//! Arrows are assigned first, in an order that prefers arrows whose endpoints
//! are already bound; the nodes left over are assigned afterwards. A
//! per-element filter prunes candidates before the search starts. The
//! enumeration order is deterministic.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::graph::{ElementId, Graph};
use crate::morphism::GraphMorphism;

/// Decides whether a pattern element may be sent to the named target element.
pub type ElementFilter<'a> = dyn Fn(&ElementId, &str) -> bool + Sync + 'a;

/// Accepts every candidate.
pub fn any_element(_: &ElementId, _: &str) -> bool {
    true
}

struct Problem {
    node_cands: Vec<Vec<usize>>,
    arrow_cands: Vec<Vec<usize>>,
    pattern_arrows: Vec<(usize, usize)>,
    target_arrows: Vec<(usize, usize)>,
    arrow_order: Vec<usize>,
}

struct State {
    nodes: Vec<Option<usize>>,
    arrows: Vec<Option<usize>>,
}

/// Receives each homomorphism as its node and arrow maps.
pub type Visitor<'a> = dyn FnMut(&BTreeMap<String, String>, &BTreeMap<String, String>) -> ControlFlow<()> + 'a;

/// Calls `visit` with every homomorphism `pattern → target` admitted by
/// `filter`, given as node and arrow assignments, until it breaks.
pub fn for_each_homomorphism(
    pattern: &Graph,
    target: &Graph,
    filter: &ElementFilter<'_>,
    visit: &mut Visitor<'_>,
) {
    let pn: Vec<&str> = pattern.nodes().collect();
    let tn: Vec<&str> = target.nodes().collect();
    let pidx: BTreeMap<&str, usize> = pn.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let tidx: BTreeMap<&str, usize> = tn.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let pa: Vec<(&str, usize, usize)> = pattern
        .arrows()
        .map(|(a, e)| (a, pidx[e.src.as_str()], pidx[e.tgt.as_str()]))
        .collect();
    let ta: Vec<(&str, usize, usize)> = target
        .arrows()
        .map(|(a, e)| (a, tidx[e.src.as_str()], tidx[e.tgt.as_str()]))
        .collect();

    // Degree and loop information for pruning.
    let mut t_out = vec![false; tn.len()];
    let mut t_in = vec![false; tn.len()];
    let mut t_loop = vec![false; tn.len()];
    for &(_, s, t) in &ta {
        t_out[s] = true;
        t_in[t] = true;
        if s == t {
            t_loop[s] = true;
        }
    }
    let mut p_out = vec![false; pn.len()];
    let mut p_in = vec![false; pn.len()];
    let mut p_loop = vec![false; pn.len()];
    for &(_, s, t) in &pa {
        p_out[s] = true;
        p_in[t] = true;
        if s == t {
            p_loop[s] = true;
        }
    }

    let mut node_ok = vec![vec![false; tn.len()]; pn.len()];
    let mut node_cands = vec![Vec::new(); pn.len()];
    for (p, name) in pn.iter().enumerate() {
        let id = ElementId::node(*name);
        for (t, tname) in tn.iter().enumerate() {
            let ok = (!p_out[p] || t_out[t])
                && (!p_in[p] || t_in[t])
                && (!p_loop[p] || t_loop[t])
                && filter(&id, tname);
            if ok {
                node_ok[p][t] = true;
                node_cands[p].push(t);
            }
        }
        if node_cands[p].is_empty() {
            return;
        }
    }
    let mut arrow_cands = vec![Vec::new(); pa.len()];
    for (i, &(name, s, t)) in pa.iter().enumerate() {
        let id = ElementId::arrow(name);
        for (j, &(tname, ts, tt)) in ta.iter().enumerate() {
            let loop_ok = s != t || ts == tt;
            if node_ok[s][ts] && node_ok[t][tt] && loop_ok && filter(&id, tname) {
                arrow_cands[i].push(j);
            }
        }
        if arrow_cands[i].is_empty() {
            return;
        }
    }

    // Greedy order: most bound endpoints first, then fewest candidates.
    let mut bound = vec![false; pn.len()];
    let mut remaining: Vec<usize> = (0..pa.len()).collect();
    let mut arrow_order = Vec::with_capacity(pa.len());
    while !remaining.is_empty() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &a)| {
                let (_, s, t) = pa[a];
                let unbound = usize::from(!bound[s]) + usize::from(!bound[t]);
                (unbound, arrow_cands[a].len(), a)
            })
            .unwrap();
        let a = remaining.remove(pos);
        bound[pa[a].1] = true;
        bound[pa[a].2] = true;
        arrow_order.push(a);
    }

    let problem = Problem {
        node_cands,
        arrow_cands,
        pattern_arrows: pa.iter().map(|&(_, s, t)| (s, t)).collect(),
        target_arrows: ta.iter().map(|&(_, s, t)| (s, t)).collect(),
        arrow_order,
    };
    let mut state = State {
        nodes: vec![None; pn.len()],
        arrows: vec![None; pa.len()],
    };
    let mut emit = |st: &State| {
        let nodes = st
            .nodes
            .iter()
            .enumerate()
            .map(|(p, t)| (pn[p].to_string(), tn[t.unwrap()].to_string()))
            .collect();
        let arrows = st
            .arrows
            .iter()
            .enumerate()
            .map(|(p, t)| (pa[p].0.to_string(), ta[t.unwrap()].0.to_string()))
            .collect();
        visit(&nodes, &arrows)
    };
    let _ = assign_arrows(&problem, &mut state, 0, &mut emit);
}

fn assign_arrows(
    pb: &Problem,
    st: &mut State,
    k: usize,
    emit: &mut dyn FnMut(&State) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if k == pb.arrow_order.len() {
        return assign_nodes(pb, st, 0, emit);
    }
    let a = pb.arrow_order[k];
    let (s, t) = pb.pattern_arrows[a];
    for &c in &pb.arrow_cands[a] {
        let (cs, ct) = pb.target_arrows[c];
        let s_prev = st.nodes[s];
        if s_prev.is_some_and(|x| x != cs) {
            continue;
        }
        st.nodes[s] = Some(cs);
        let t_prev = st.nodes[t];
        if t_prev.is_some_and(|x| x != ct) {
            st.nodes[s] = s_prev;
            continue;
        }
        st.nodes[t] = Some(ct);
        st.arrows[a] = Some(c);
        let flow = assign_arrows(pb, st, k + 1, emit);
        st.arrows[a] = None;
        st.nodes[t] = t_prev;
        st.nodes[s] = s_prev;
        flow?;
    }
    ControlFlow::Continue(())
}

fn assign_nodes(
    pb: &Problem,
    st: &mut State,
    from: usize,
    emit: &mut dyn FnMut(&State) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let Some(p) = (from..st.nodes.len()).find(|&p| st.nodes[p].is_none()) else {
        return emit(st);
    };
    for &c in &pb.node_cands[p] {
        st.nodes[p] = Some(c);
        let flow = assign_nodes(pb, st, p + 1, emit);
        st.nodes[p] = None;
        flow?;
    }
    ControlFlow::Continue(())
}

/// All homomorphisms `pattern → target` admitted by `filter`, up to `limit`.
pub fn homomorphisms(
    pattern: &Graph,
    target: &Graph,
    filter: &ElementFilter<'_>,
    limit: Option<usize>,
) -> Vec<GraphMorphism> {
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    for_each_homomorphism(pattern, target, filter, &mut |nodes, arrows| {
        let m = GraphMorphism::new(pattern.clone(), target.clone(), nodes.clone(), arrows.clone())
            .expect("search yields homomorphisms");
        out.push(m);
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Number of homomorphisms admitted by `filter`.
pub fn count_homomorphisms(pattern: &Graph, target: &Graph, filter: &ElementFilter<'_>) -> usize {
    let mut n = 0;
    for_each_homomorphism(pattern, target, filter, &mut |_, _| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(nodes: &[&str], arrows: &[(&str, &str, &str)]) -> Graph {
        Graph::build(nodes, arrows).unwrap()
    }

    #[test]
    fn counts_node_maps_without_arrows() {
        let p = g(&["a", "b"], &[]);
        let t = g(&["x", "y", "z"], &[]);
        assert_eq!(count_homomorphisms(&p, &t, &any_element), 9);
    }

    #[test]
    fn edge_into_triangle() {
        let p = g(&["a", "b"], &[("e", "a", "b")]);
        let t = g(
            &["x", "y", "z"],
            &[("f", "x", "y"), ("g", "y", "z"), ("h", "z", "x")],
        );
        assert_eq!(count_homomorphisms(&p, &t, &any_element), 3);
    }

    #[test]
    fn loop_needs_loop() {
        let p = g(&["a"], &[("l", "a", "a")]);
        let t = g(&["x", "y"], &[("f", "x", "y")]);
        assert_eq!(count_homomorphisms(&p, &t, &any_element), 0);
        let t2 = g(&["x"], &[("f", "x", "x"), ("g", "x", "x")]);
        assert_eq!(count_homomorphisms(&p, &t2, &any_element), 2);
    }

    #[test]
    fn path_folds_onto_loop() {
        let p = g(&["a", "b", "c"], &[("e", "a", "b"), ("f", "b", "c")]);
        let t = g(&["x"], &[("l", "x", "x")]);
        let all = homomorphisms(&p, &t, &any_element, None);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].node("c"), Some("x"));
    }

    #[test]
    fn filter_restricts_candidates() {
        let p = g(&["a", "b"], &[]);
        let t = g(&["x", "y"], &[]);
        let only_x = |e: &ElementId, n: &str| e.name != "a" || n == "x";
        let all = homomorphisms(&p, &t, &only_x, None);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|m| m.node("a") == Some("x")));
    }

    #[test]
    fn limit_stops_early_and_is_deterministic() {
        let p = g(&["a"], &[]);
        let t = g(&["x", "y", "z"], &[]);
        let first = homomorphisms(&p, &t, &any_element, Some(2));
        assert_eq!(first.len(), 2);
        assert_eq!(first, homomorphisms(&p, &t, &any_element, Some(2)));
        assert!(homomorphisms(&p, &t, &any_element, Some(0)).is_empty());
    }

    #[test]
    fn empty_pattern_has_one_morphism() {
        let t = g(&["x"], &[]);
        assert_eq!(count_homomorphisms(&Graph::new(), &t, &any_element), 1);
        assert_eq!(count_homomorphisms(&Graph::new(), &Graph::new(), &any_element), 1);
    }
}
