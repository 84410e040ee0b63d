use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{context_of, push, CategoryError, MorphismRule, MorphismViolation};
use crate::game::{check_alternating, SpacetimeGame};
use crate::ids::{Action, InfoSetId, NodeId, PlayerId};

/// A morphism γ: 𝒢′ → 𝒢 given by (ν′, β). `source` is 𝒢′ and `target` is 𝒢.
/// ν′ sends the target's nature nodes to the source's; β_x sends the source's
/// actions at ν′(x) to the target's actions at x.
#[derive(Debug, Clone)]
pub struct GameMorphism {
    pub source: Arc<SpacetimeGame>,
    pub target: Arc<SpacetimeGame>,
    pub nu_prime: BTreeMap<NodeId, NodeId>,
    pub beta: BTreeMap<InfoSetId, BTreeMap<Action, Action>>,
}

impl PartialEq for GameMorphism {
    fn eq(&self, other: &Self) -> bool {
        same(&self.source, &other.source)
            && same(&self.target, &other.target)
            && self.nu_prime == other.nu_prime
            && self.beta == other.beta
    }
}

impl Eq for GameMorphism {}

pub(crate) fn same<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GameMorphism {
    pub fn identity(game: Arc<SpacetimeGame>) -> Self {
        let alfred = PlayerId::nature();
        let nu_prime = game.nodes_of(&alfred).into_iter().map(|n| (n.clone(), n)).collect();
        let beta = game
            .info_sets_of(&alfred)
            .into_iter()
            .map(|x| {
                let id = game.actions_at(&x).expect("known").iter().map(|a| (a.clone(), a.clone())).collect();
                (x, id)
            })
            .collect();
        GameMorphism { source: game.clone(), target: game, nu_prime, beta }
    }

    /// ν′ read on information sets, when rule 1 holds.
    pub fn nu_prime_on_info_sets(&self) -> Option<BTreeMap<InfoSetId, InfoSetId>> {
        let mut out = BTreeMap::new();
        for (n, n2) in &self.nu_prime {
            let x = self.target.info_set_of(n).clone();
            let x2 = self.source.node(n2).map(|node| node.info_set.clone())?;
            if let Some(prev) = out.insert(x, x2.clone()) {
                if prev != x2 {
                    return None;
                }
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameMorphismReport {
    pub passed: bool,
    pub violations: Vec<MorphismViolation>,
    /// The implied observer map ν: 𝒟_ν → target observer nodes, when
    /// rule 2 makes it a function.
    pub nu: BTreeMap<NodeId, NodeId>,
    /// Non-fatal observations, e.g. the section/retraction remark.
    pub diagnostics: Vec<String>,
}

/// Evaluates the five structural constraints on a game morphism.
pub fn check_game_morphism(m: &GameMorphism) -> GameMorphismReport {
    let mut v: Vec<MorphismViolation> = Vec::new();
    let (src, tgt) = (&*m.source, &*m.target);
    let alfred = PlayerId::nature();

    for (name, g) in [("source", src), ("target", tgt)] {
        let r = check_alternating(g);
        if !r.passed {
            let rules: Vec<&str> = r.failed_rules().into_iter().map(|x| x.id()).collect();
            push(&mut v, MorphismRule::Precondition, format!("{name} is not alternating ({})", rules.join(", ")));
        }
    }
    if !v.is_empty() {
        return GameMorphismReport { passed: false, violations: v, nu: BTreeMap::new(), diagnostics: Vec::new() };
    }

    let tgt_nodes: BTreeSet<NodeId> = tgt.nodes_of(&alfred).into_iter().collect();
    let src_nodes: BTreeSet<NodeId> = src.nodes_of(&alfred).into_iter().collect();
    let domain: BTreeSet<NodeId> = m.nu_prime.keys().cloned().collect();
    if domain != tgt_nodes {
        push(&mut v, MorphismRule::WellFormed, "nu' is not defined exactly on the target's nature nodes".into());
    }
    for (n, n2) in &m.nu_prime {
        if !src_nodes.contains(n2) {
            push(&mut v, MorphismRule::WellFormed, format!("nu'({n}) = {n2} is not a nature node of the source"));
        }
    }
    if !v.is_empty() {
        return GameMorphismReport { passed: false, violations: v, nu: BTreeMap::new(), diagnostics: Vec::new() };
    }

    // Rule 1.
    let mut on_sets: BTreeMap<&InfoSetId, BTreeSet<&InfoSetId>> = BTreeMap::new();
    for (n, n2) in &m.nu_prime {
        on_sets.entry(tgt.info_set_of(n)).or_default().insert(src.info_set_of(n2));
    }
    for (x, images) in &on_sets {
        if images.len() > 1 {
            let names: Vec<&str> = images.iter().map(|i| i.as_str()).collect();
            push(&mut v, MorphismRule::Rule(1), format!("nodes of {x} land in several information sets: {}", names.join(", ")));
        }
    }
    let pi: BTreeMap<&InfoSetId, &InfoSetId> =
        on_sets.iter().map(|(x, imgs)| (*x, *imgs.iter().next().expect("non-empty"))).collect();

    // β well-formedness.
    for x in tgt.info_sets_of(&alfred) {
        let Some(bx) = m.beta.get(&x) else {
            push(&mut v, MorphismRule::WellFormed, format!("beta has no component at {x}"));
            continue;
        };
        let Some(x2) = pi.get(&x) else { continue };
        let want: BTreeSet<&Action> = src.actions_at(x2).expect("known").iter().collect();
        let have: BTreeSet<&Action> = bx.keys().collect();
        if want != have {
            push(&mut v, MorphismRule::WellFormed, format!("beta at {x} is not defined exactly on the actions of {x2}"));
        }
        let allowed = tgt.actions_at(&x).expect("known");
        for (a2, a) in bx {
            if !allowed.contains(a) {
                push(&mut v, MorphismRule::WellFormed, format!("beta at {x} sends {a2} to {a}, unavailable at {x}"));
            }
        }
    }
    for x in m.beta.keys() {
        if tgt.info_set_owner(x) != Some(&alfred) {
            push(&mut v, MorphismRule::WellFormed, format!("beta has a component at {x}, not a nature information set of the target"));
        }
    }

    let parent = |g: &SpacetimeGame, n: &NodeId| g.parent(n).cloned().expect("alternating games have unique parents");

    // Rule 2, and the implied ν.
    let mut nu: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut nu_functional = true;
    for (n, n2) in &m.nu_prime {
        let (p2, p) = (parent(src, n2), parent(tgt, n));
        if let Some(prev) = nu.get(&p2) {
            if prev != &p {
                nu_functional = false;
                push(&mut v, MorphismRule::Rule(2), format!("parent {p2} of images comes from distinct parents {prev} and {p}"));
            }
        } else {
            nu.insert(p2, p);
        }
    }

    if nu_functional {
        // Rule 3.
        for (n, n2) in &m.nu_prime {
            for t2 in src.successors(n2) {
                let Some(t) = nu.get(t2) else { continue };
                let x = tgt.info_set_of(n);
                let label2 = src.edge_label(n2, t2).expect("edge");
                let mapped = m.beta.get(x).and_then(|b| b.get(label2));
                let expected = tgt.edge_label(n, t);
                if mapped.is_none() || mapped != expected {
                    push(
                        &mut v,
                        MorphismRule::Rule(3),
                        format!(
                            "beta_{x}({label2}) = {} but the edge {n} -> {t} is {}",
                            mapped.map_or("undefined".to_string(), |a| a.to_string()),
                            expected.map_or("absent".to_string(), |a| a.to_string())
                        ),
                    );
                }
            }
        }

        // Rule 4.
        for (t2, t) in &nu {
            for n in tgt.successors(t) {
                let n2 = &m.nu_prime[n];
                let ctx = context_of(tgt, t, tgt.edge_label(t, n).expect("edge"));
                let image: BTreeSet<InfoSetId> = ctx.iter().filter_map(|x| pi.get(x).map(|y| (*y).clone())).collect();
                match src.edge_label(t2, n2) {
                    None => push(&mut v, MorphismRule::Rule(4), format!("nu'({n}) = {n2} is not a child of {t2}")),
                    Some(l2) => {
                        let ctx2 = context_of(src, t2, l2);
                        if ctx2 != image {
                            push(
                                &mut v,
                                MorphismRule::Rule(4),
                                format!("context of {n} at {t} maps to {image:?}, but {n2} sits in {ctx2:?} at {t2}"),
                            );
                        }
                    }
                }
            }
        }

        // Rule 5.
        let image_sets: BTreeSet<&InfoSetId> = pi.values().copied().collect();
        for t2 in nu.keys() {
            let parents: BTreeSet<&InfoSetId> = src.predecessors(t2).iter().map(|p| src.info_set_of(p)).collect();
            for x2 in parents {
                if !image_sets.contains(x2) {
                    push(&mut v, MorphismRule::Rule(5), format!("{x2} feeds {t2} but is not in the image of nu'"));
                }
            }
        }
    }

    let mut diagnostics = Vec::new();
    if v.is_empty() {
        let pi_surj = pi.values().copied().collect::<BTreeSet<_>>().len() == src.info_sets_of(&alfred).len();
        let beta_inj = m.beta.values().all(|b| b.values().collect::<BTreeSet<_>>().len() == b.len());
        if pi_surj && beta_inj {
            diagnostics.push("nu' is onto and every beta component is injective".into());
        }
    }
    GameMorphismReport { passed: v.is_empty(), violations: v, nu, diagnostics }
}

/// γ₁ ∘ γ₂ for γ₁: 𝒢′ → 𝒢 and γ₂: 𝒢″ → 𝒢′.
pub fn compose_game_morphisms(g1: &GameMorphism, g2: &GameMorphism) -> Result<GameMorphism, CategoryError> {
    if !same(&g1.source, &g2.target) {
        return Err(CategoryError::DomainMismatch("source of the outer morphism differs from target of the inner one".into()));
    }
    let mut nu_prime = BTreeMap::new();
    for (n, n1) in &g1.nu_prime {
        let n2 = g2.nu_prime.get(n1).ok_or_else(|| CategoryError::DomainMismatch(format!("{n1} outside inner nu'")))?;
        nu_prime.insert(n.clone(), n2.clone());
    }
    let on_sets = g1
        .nu_prime_on_info_sets()
        .ok_or_else(|| CategoryError::DomainMismatch("outer nu' does not act on information sets".into()))?;
    let mut beta = BTreeMap::new();
    for (x, b1) in &g1.beta {
        let x1 = on_sets.get(x).ok_or_else(|| CategoryError::DomainMismatch(format!("{x} has no image")))?;
        let b2 = g2.beta.get(x1).ok_or_else(|| CategoryError::DomainMismatch(format!("inner beta lacks {x1}")))?;
        let mut comp = BTreeMap::new();
        for (a2, a1) in b2 {
            let a = b1.get(a1).ok_or_else(|| CategoryError::DomainMismatch(format!("outer beta_{x} lacks {a1}")))?;
            comp.insert(a2.clone(), a.clone());
        }
        beta.insert(x.clone(), comp);
    }
    Ok(GameMorphism { source: g2.source.clone(), target: g1.target.clone(), nu_prime, beta })
}
