//! Multilevel typed matches: level maps, metamodel morphisms `(β, f)` and
//! graph homomorphisms `μ: L → S` satisfying the reduct and type
//! compatibility conditions.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{reduct, LevelMap, MultilevelTyping, TypingChain, TypingChainMorphism};
use crate::graph::ElementId;
use crate::morphism::GraphMorphism;
use crate::rule::Rule;
use crate::search::homomorphisms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("rule depth {n} exceeds hierarchy depth {m}")]
    DepthExceedsTarget { n: usize, m: usize },
}

/// Fixed images for metamodel elements, keyed by metamodel level.
pub type Pins = BTreeMap<(usize, ElementId), String>;

/// All level maps `[n] → [m]` with `f(0) = 0` and the gap law, in
/// lexicographic order.
pub fn enumerate_level_maps(n: usize, m: usize) -> Result<Vec<LevelMap>, MatchError> {
    if n > m {
        return Err(MatchError::DepthExceedsTarget { n, m });
    }
    fn go(prefix: &mut Vec<usize>, n: usize, m: usize, out: &mut Vec<LevelMap>) {
        let i = prefix.len();
        if i == n + 1 {
            out.push(LevelMap::new(prefix.clone(), m).expect("generated maps obey the gap law"));
            return;
        }
        let lo = prefix.last().map_or(0, |x| x + 1);
        // Leave room for the remaining levels.
        let hi = if i == 0 { 0 } else { m - (n - i) };
        for x in lo..=hi {
            prefix.push(x);
            go(prefix, n, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, m, &mut out);
    Ok(out)
}

/// All chain morphisms `(β, f): mm → tg` respecting `pins`, found level by
/// level from the top with the compatibility law checked per element.
pub fn enumerate_chain_morphisms(
    mm: &TypingChain,
    tg: &TypingChain,
    f: &LevelMap,
    pins: &Pins,
) -> Vec<TypingChainMorphism> {
    if f.n() != mm.depth() || f.m() != tg.depth() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend_beta(mm, tg, f, pins, &mut prefix, &mut out);
    out
}

fn extend_beta(
    mm: &TypingChain,
    tg: &TypingChain,
    f: &LevelMap,
    pins: &Pins,
    prefix: &mut Vec<GraphMorphism>,
    out: &mut Vec<TypingChainMorphism>,
) {
    let i = prefix.len();
    if i > mm.depth() {
        out.push(
            TypingChainMorphism::new(mm.clone(), tg.clone(), f.clone(), prefix.clone())
                .expect("compatibility is checked during the search"),
        );
        return;
    }
    let fi = f.get(i);
    let filter = |e: &ElementId, image: &str| {
        if let Some(p) = pins.get(&(i, e.clone())) {
            if p != image {
                return false;
            }
        }
        let cand = ElementId {
            kind: e.kind,
            name: image.to_string(),
        };
        (0..i).all(|k| match mm.tau(i, k).apply(e) {
            None => true,
            Some(t) => {
                let want = prefix[k].apply(&t).expect("total map");
                tg.tau(fi, f.get(k)).apply(&cand) == Some(want)
            }
        })
    };
    for beta_i in homomorphisms(mm.graph(i), tg.graph(fi), &filter, None) {
        prefix.push(beta_i);
        extend_beta(mm, tg, f, pins, prefix, out);
        prefix.pop();
    }
}

/// A match `(μ, (β, f))` with the reduct morphism `(μ, f)` it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchCandidate {
    pub levels: LevelMap,
    pub beta: TypingChainMorphism,
    pub mu: GraphMorphism,
    /// `(μ, f): L-chain → S-chain`.
    pub mu_chain: TypingChainMorphism,
}

/// Why a proposed match fails.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatchDiagnostic {
    SignatureMismatch(String),
    /// `e ∈ L_i` differs from `μ(e) ∈ S_f(i)`.
    Reduct { level: usize, element: ElementId },
    /// `β_i(σL_i(e)) ≠ σS_f(i)(μ(e))`.
    TypeCompatibility {
        level: usize,
        element: ElementId,
        expected: Option<String>,
        found: Option<String>,
    },
}

impl fmt::Display for MatchDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchDiagnostic::SignatureMismatch(s) => write!(f, "signature mismatch: {s}"),
            MatchDiagnostic::Reduct { level, element } => write!(
                f,
                "reduct condition fails at level {level}: {element} and its image disagree on membership"
            ),
            MatchDiagnostic::TypeCompatibility {
                level,
                element,
                expected,
                found,
            } => write!(
                f,
                "type compatibility fails at level {level} for {element}: expected {}, found {}",
                expected.as_deref().unwrap_or("nothing"),
                found.as_deref().unwrap_or("nothing")
            ),
        }
    }
}

/// Checks both match conditions; an empty result means the match is valid.
pub fn check_match(
    rule: &Rule,
    host: &MultilevelTyping,
    mu: &GraphMorphism,
    beta: &TypingChainMorphism,
) -> Vec<MatchDiagnostic> {
    let lhs = rule.lhs();
    let mut out = Vec::new();
    if mu.dom() != lhs.subject() || mu.cod() != host.subject() {
        out.push(MatchDiagnostic::SignatureMismatch(
            "μ must go from the left-hand side to the host".into(),
        ));
    }
    if beta.src() != rule.metamodel() || beta.dst() != host.target() {
        out.push(MatchDiagnostic::SignatureMismatch(
            "β must go from the rule metamodel to the host's type chain".into(),
        ));
    }
    if !out.is_empty() {
        return out;
    }
    let f = beta.levels();
    for i in 0..=rule.depth() {
        let fi = f.get(i);
        for e in lhs.subject().elements() {
            let image = mu.apply(&e).expect("total map");
            let in_l = lhs.level(i).contains(&e);
            if in_l != host.level(fi).contains(&image) {
                out.push(MatchDiagnostic::Reduct {
                    level: i,
                    element: e,
                });
                continue;
            }
            if !in_l {
                continue;
            }
            let expected = lhs.type_at(i, &e).and_then(|t| beta.map(i).apply(&t));
            let found = host.type_at(fi, &image);
            if expected != found {
                out.push(MatchDiagnostic::TypeCompatibility {
                    level: i,
                    element: e,
                    expected: expected.map(|x| x.name),
                    found: found.map(|x| x.name),
                });
            }
        }
    }
    out
}

/// Restricts the search space of [`find_matches`].
#[derive(Clone, Debug, Default)]
pub struct MatchOptions {
    /// Stop after this many matches.
    pub limit: Option<usize>,
    /// Only consider this level map.
    pub level_map: Option<LevelMap>,
    /// Fixed `β` images in addition to the rule's constants.
    pub pins: Pins,
}

/// All `μ` completing a fixed `(β, f)` to a match, in search order.
pub fn matches_for_beta(
    rule: &Rule,
    host: &MultilevelTyping,
    beta: &TypingChainMorphism,
    limit: Option<usize>,
) -> Vec<MatchCandidate> {
    let lhs = rule.lhs();
    let f = beta.levels();
    let filter = |e: &ElementId, image: &str| {
        let cand = ElementId {
            kind: e.kind,
            name: image.to_string(),
        };
        (0..=rule.depth()).all(|i| {
            let fi = f.get(i);
            if !lhs.level(i).contains(e) {
                return !host.level(fi).contains(&cand);
            }
            let want = lhs.type_at(i, e).and_then(|t| beta.map(i).apply(&t));
            want.is_some() && host.type_at(fi, &cand) == want
        })
    };
    homomorphisms(lhs.subject(), host.subject(), &filter, limit)
        .into_iter()
        .map(|mu| {
            let (chain, mu_chain) =
                reduct(host.chain(), &mu, f).expect("μ lands in the host and f fits its depth");
            debug_assert_eq!(&chain, lhs.chain());
            MatchCandidate {
                levels: f.clone(),
                beta: beta.clone(),
                mu,
                mu_chain,
            }
        })
        .collect()
}

/// Every match of `rule` in `host`, ordered by level map, then `β`, then `μ`.
pub fn find_matches(
    rule: &Rule,
    host: &MultilevelTyping,
    options: &MatchOptions,
) -> Result<Vec<MatchCandidate>, MatchError> {
    let (n, m) = (rule.depth(), host.depth());
    let level_maps = match &options.level_map {
        Some(f) if f.n() == n && f.m() == m => vec![f.clone()],
        Some(_) => Vec::new(),
        None => enumerate_level_maps(n, m)?,
    };
    let mut pins = options.pins.clone();
    for (level, e) in rule.constants() {
        pins.insert((*level, e.clone()), e.name.clone());
    }
    let betas: Vec<TypingChainMorphism> = level_maps
        .iter()
        .flat_map(|f| enumerate_chain_morphisms(rule.metamodel(), host.target(), f, &pins))
        .collect();
    let per_beta: Vec<Vec<MatchCandidate>> = betas
        .par_iter()
        .map(|beta| matches_for_beta(rule, host, beta, options.limit))
        .collect();
    let mut out: Vec<MatchCandidate> = per_beta.into_iter().flatten().collect();
    if let Some(l) = options.limit {
        out.truncate(l);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_maps_one_into_two() {
        let maps = enumerate_level_maps(1, 2).unwrap();
        let images: Vec<&[usize]> = maps.iter().map(|f| f.images()).collect();
        assert_eq!(images, vec![&[0, 1][..], &[0, 2][..]]);
    }

    #[test]
    fn equal_depth_gives_identity_only() {
        for n in 0..4 {
            let maps = enumerate_level_maps(n, n).unwrap();
            assert_eq!(maps, vec![LevelMap::identity(n)]);
        }
    }

    #[test]
    fn level_maps_need_room() {
        assert_eq!(
            enumerate_level_maps(3, 2),
            Err(MatchError::DepthExceedsTarget { n: 3, m: 2 })
        );
    }

    #[test]
    fn level_map_count_matches_brute_force() {
        for m in 0..6 {
            for n in 0..=m {
                let got = enumerate_level_maps(n, m).unwrap().len();
                // Strictly increasing maps fixing 0: choose n of the m
                // positive levels.
                let expected = (0..n).fold(1usize, |acc, k| acc * (m - k) / (k + 1));
                assert_eq!(got, expected, "n={n} m={m}");
            }
        }
    }
}
