//! Elementwise checks of the equations an application result must satisfy.

use mlrewrite_core::{ApplicationResult, ElementId, Graph, GraphMorphism, PushoutStep, Rule};

use crate::colimit::matches_quotient;
use crate::gen::{Application, ReductInstance};
use crate::oracle::Verdict;

fn at(m: &GraphMorphism, e: &ElementId, what: &str) -> Result<ElementId, String> {
    m.apply(e).ok_or_else(|| format!("{what} is undefined on {e}"))
}

fn same(lhs: ElementId, rhs: ElementId, what: String) -> Verdict {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs} vs {rhs}"))
    }
}

/// Pushout square: `λ_i;δ_i = μ_i;ς_f(i)` on every `L_i`.
pub fn pushout_square(app: &Application, res: &ApplicationResult) -> Verdict {
    let f = &app.mat.levels;
    for i in 0..=f.n() {
        let lambda = app.rule.lambda().map(i);
        for e in app.rule.lhs().level(i).elements() {
            let left = at(res.delta.map(i), &at(lambda, &e, "λ")?, "δ")?;
            let right = at(res.sigma_incl.map(f.get(i)), &at(app.mat.mu_chain.map(i), &e, "μ")?, "ς")?;
            same(left, right, format!("pushout square at level {i} for {e}"))?;
        }
    }
    Ok(())
}

/// Both type compatibility conditions of the typing of `D`.
pub fn d_typing(app: &Application, res: &ApplicationResult) -> Verdict {
    let f = &app.mat.levels;
    for a in 0..=f.m() {
        for x in app.host.level(a).elements() {
            let left = at(res.d.sigma(a), &at(res.sigma_incl.map(a), &x, "ς")?, "σD")?;
            same(left, at(app.host.sigma(a), &x, "σS")?, format!("ς;σD = σS at level {a} for {x}"))?;
        }
    }
    let union = app.rule.union();
    for i in 0..=f.n() {
        for y in union.level(i).elements() {
            let left = at(res.d.sigma(f.get(i)), &at(res.delta.map(i), &y, "δ")?, "σD")?;
            let right = at(app.mat.beta.map(i), &at(union.sigma(i), &y, "σI")?, "β")?;
            same(left, right, format!("δ;σD = σI;β at level {i} for {y}"))?;
        }
    }
    Ok(())
}

/// `σ^T = θ;σ^D` levelwise.
pub fn borrowed_typing(res: &ApplicationResult) -> Verdict {
    for a in 0..=res.t.depth() {
        for z in res.t.level(a).elements() {
            let right = at(res.d.sigma(a), &at(res.theta.map(a), &z, "θ")?, "σD")?;
            same(at(res.t.sigma(a), &z, "σT")?, right, format!("σT = θ;σD at level {a} for {z}"))?;
        }
    }
    Ok(())
}

/// `ρ;δ = ν;θ` on every `R_i`.
pub fn co_square(rule: &Rule, res: &ApplicationResult) -> Verdict {
    let f = res.delta.levels();
    for i in 0..=f.n() {
        for r in rule.rhs().level(i).elements() {
            let left = at(res.delta.map(i), &at(rule.rho().map(i), &r, "ρ")?, "δ")?;
            let right = at(res.theta.map(f.get(i)), &at(res.nu.map(i), &r, "ν")?, "θ")?;
            same(left, right, format!("co-square at level {i} for {r}"))?;
        }
    }
    Ok(())
}

/// The result chains are well formed: inclusion chains that pass
/// validation, typed over the host's chain, with the expected level maps.
pub fn result_chains(app: &Application, res: &ApplicationResult) -> Verdict {
    for (name, mt) in [("D", &res.d), ("T", &res.t)] {
        let report = mt.chain().as_chain().validate();
        if !report.is_clean() {
            return Err(format!("{name}-chain fails validation: {report}"));
        }
        if mt.target() != app.host.target() {
            return Err(format!("{name} is typed over a different chain"));
        }
    }
    if res.delta.levels() != &app.mat.levels || res.nu.levels() != &app.mat.levels {
        return Err("δ and ν must use the match's level map".into());
    }
    if !res.theta.levels().is_identity() || !res.sigma_incl.levels().is_identity() {
        return Err("θ and ς must be level preserving".into());
    }
    Ok(())
}

/// All four equations and the chain checks.
pub fn application_invariants(app: &Application, res: &ApplicationResult) -> Verdict {
    pushout_square(app, res)?;
    d_typing(app, res)?;
    borrowed_typing(res)?;
    co_square(&app.rule, res)?;
    result_chains(app, res)
}

/// Every level `D_f(i)` equals the explicit pushout of `L_i ↪ I_i` and
/// `μ_i: L_i → S_f(i)`. Only the pushout step is needed, so this also
/// applies when the complement does not exist.
pub fn levelwise_pushouts(app: &Application, res: &PushoutStep) -> Verdict {
    let f = &app.mat.levels;
    for i in 0..=f.n() {
        let a = f.get(i);
        matches_quotient(
            res.d.level(a),
            res.delta.map(i),
            res.sigma_incl.map(a),
            app.rule.lambda().map(i),
            app.mat.mu_chain.map(i),
        )
        .map_err(|e| format!("level {a}: {e}"))?;
    }
    Ok(())
}

/// Elements of `g0` sent into `h` by `phi0`, computed without the library's
/// preimage.
fn preimage_by_hand(g0: &Graph, phi0: &GraphMorphism, h: &Graph) -> Graph {
    let nodes: Vec<&str> = g0
        .nodes()
        .filter(|x| phi0.node(x).is_some_and(|y| h.has_node(y)))
        .collect();
    let arrows: Vec<&str> = g0
        .arrow_names()
        .filter(|x| phi0.arrow(x).is_some_and(|y| h.has_arrow(y)))
        .collect();
    g0.induced(nodes, arrows).expect("preimages are closed")
}

/// For a family of restrictions of `φ_0` between inclusion chains, the left
/// squares are pullbacks exactly when every `G_j` is the preimage of
/// `H_f(j)`.
pub fn is_reduct_by_hand(inst: &ReductInstance) -> bool {
    (1..=inst.levels.n()).all(|j| {
        inst.src.level(j) == &preimage_by_hand(inst.src.host(), &inst.phi0, inst.dst.level(inst.levels.get(j)))
    })
}
