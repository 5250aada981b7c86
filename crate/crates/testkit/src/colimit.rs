//! A pushout built as a quotient of the disjoint union, used to check the
//! production pushouts independently.

use std::collections::BTreeMap;

use mlrewrite_core::{ElementId, Graph, GraphMorphism, Kind};

use crate::oracle::Verdict;

/// Tagged element of `H ⊔ K`: `false` for `H`, `true` for `K`.
type Tagged = (bool, ElementId);

struct UnionFind {
    parent: BTreeMap<Tagged, Tagged>,
}

impl UnionFind {
    fn find(&mut self, x: &Tagged) -> Tagged {
        let p = self.parent[x].clone();
        if &p == x {
            return p;
        }
        let root = self.find(&p);
        self.parent.insert(x.clone(), root.clone());
        root
    }

    fn union(&mut self, a: &Tagged, b: &Tagged) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }
}

/// Checks that `apex` with `i1: H → apex`, `i2: K → apex` is isomorphic,
/// compatibly with the injections, to `(H ⊔ K)/~` where `l(x) ~ m(x)` for
/// every `x ∈ G`.
pub fn matches_quotient(
    apex: &Graph,
    i1: &GraphMorphism,
    i2: &GraphMorphism,
    l: &GraphMorphism,
    m: &GraphMorphism,
) -> Verdict {
    let (h, k) = (l.cod(), m.cod());
    let mut uf = UnionFind {
        parent: BTreeMap::new(),
    };
    for e in h.elements() {
        uf.parent.insert((false, e.clone()), (false, e));
    }
    for e in k.elements() {
        uf.parent.insert((true, e.clone()), (true, e));
    }
    for x in l.dom().elements() {
        uf.union(&(false, l.apply(&x).unwrap()), &(true, m.apply(&x).unwrap()));
    }
    // Each class must go to exactly one apex element, and different classes
    // to different elements.
    let mut image_of_class: BTreeMap<Tagged, ElementId> = BTreeMap::new();
    let all: Vec<Tagged> = uf.parent.keys().cloned().collect();
    for t in &all {
        let img = if t.0 { i2.apply(&t.1) } else { i1.apply(&t.1) }
            .ok_or_else(|| format!("{} is not mapped", t.1))?;
        let class = uf.find(t);
        match image_of_class.get(&class) {
            Some(prev) if prev != &img => {
                return Err(format!("class of {} splits between {prev} and {img}", t.1))
            }
            _ => {
                image_of_class.insert(class, img);
            }
        }
    }
    let mut seen = BTreeMap::new();
    for (class, img) in &image_of_class {
        if let Some(other) = seen.insert(img.clone(), class.clone()) {
            return Err(format!("{img} is the image of two classes ({} and {})", other.1, class.1));
        }
    }
    for e in apex.elements() {
        if !seen.contains_key(&e) {
            return Err(format!("{e} is not covered by the injections"));
        }
    }
    // Endpoints of a class of arrows are the classes of the endpoints.
    for (class, img) in &image_of_class {
        if class.1.kind != Kind::Arrow {
            continue;
        }
        let g = if class.0 { k } else { h };
        let ends = g.ends(&class.1.name).unwrap();
        let want = apex.ends(&img.name).unwrap();
        for (mine, theirs) in [(&ends.src, &want.src), (&ends.tgt, &want.tgt)] {
            let c = uf.find(&(class.0, ElementId::node(mine.as_str())));
            if image_of_class[&c].name != *theirs {
                return Err(format!("arrow {} has the wrong endpoints", img.name));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mlrewrite_core::limits::pushout_inclusion;

    #[test]
    fn agrees_with_pushout_inclusion() {
        let g = Graph::build(&["x", "y"], &[]).unwrap();
        let h = Graph::build(&["x", "y", "z"], &[("e", "x", "z"), ("f", "z", "y")]).unwrap();
        let k = Graph::build(&["u"], &[("l", "u", "u")]).unwrap();
        let l = GraphMorphism::inclusion(&g, &h).unwrap();
        let m = GraphMorphism::from_pairs(&g, &k, &[("x", "u"), ("y", "u")], &[]).unwrap();
        let po = pushout_inclusion(&l, &m).unwrap();
        matches_quotient(&po.apex, &po.map, &po.incl, &l, &m).unwrap();
        // Gluing two copies of H along G duplicates z, e and f.
        let id = GraphMorphism::identity(&h);
        assert!(matches_quotient(&h, &id, &id, &l, &l).is_err());
    }
}
