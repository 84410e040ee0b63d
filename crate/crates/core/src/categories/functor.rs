use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::game_morphism::same;
use super::{
    check_game_morphism, check_scenario_morphism, compose_scenario_morphisms, context_of, CategoryError, GameMorphism,
    ScenarioMorphism,
};
use crate::game::{check_alternating, natural_cover_for, EdgeSpec, GameSpec, NodeSpec, SpacetimeGame};
use crate::ids::{context_label, Action, InfoSetId, Measurement, NodeId, Outcome, PlayerId};
use crate::scenario::{EventSet, Scenario};

/// Events recorded on the way into an observer node: nature predecessors
/// contribute their edge label, observer predecessors their own events.
fn observer_events(game: &SpacetimeGame, t: &NodeId, nature: &PlayerId) -> Result<EventSet, CategoryError> {
    let mut acc = EventSet::new();
    for m in game.predecessors(t) {
        let part = if game.owner(m) == nature {
            EventSet::new().with(game.info_set_of(m).clone(), game.edge_label(m, t).expect("edge").clone())
        } else {
            observer_events(game, m, nature)?
        };
        acc = acc.union(&part).map_err(|x| {
            CategoryError::PreconditionViolated(format!("events feeding {t} assign two values to {x}"))
        })?;
    }
    Ok(acc)
}

/// The scenario read off any game with a nature player: measurements are
/// nature's information sets, each nature node contributes the bridge of
/// events leading to it, and the cover is the natural cover. Bridges need
/// not be unique.
pub fn scenario_sketch(game: &SpacetimeGame, nature: &PlayerId) -> Result<Scenario, CategoryError> {
    let mut outcomes: BTreeMap<Measurement, BTreeSet<Outcome>> = BTreeMap::new();
    for x in game.info_sets_of(nature) {
        outcomes.insert(x.clone(), game.actions_at(&x).expect("known").clone());
    }
    let mut enabling = BTreeSet::new();
    for n in game.nodes_of(nature) {
        let mut bridge = EventSet::new();
        for p in game.predecessors(&n) {
            let part = if game.owner(p) == nature {
                EventSet::new().with(game.info_set_of(p).clone(), game.edge_label(p, &n).expect("edge").clone())
            } else {
                observer_events(game, p, nature)?
            };
            bridge = bridge.union(&part).map_err(|x| {
                CategoryError::PreconditionViolated(format!("events enabling {n} assign two values to {x}"))
            })?;
        }
        enabling.insert((bridge, game.info_set_of(&n).clone()));
    }
    Ok(Scenario::from_parts(outcomes, enabling, natural_cover_for(game, nature)))
}

/// F on objects.
pub fn functor_f_object(game: &SpacetimeGame) -> Result<Scenario, CategoryError> {
    let report = check_alternating(game);
    if !report.passed {
        let rules: Vec<&str> = report.failed_rules().into_iter().map(|r| r.id()).collect();
        return Err(CategoryError::NotAlternating(format!("fails {}", rules.join(", "))));
    }
    scenario_sketch(game, &PlayerId::nature())
}

/// F on morphisms: π′ is ν′ read on information sets and α is β.
pub fn functor_f_morphism(m: &GameMorphism) -> Result<ScenarioMorphism, CategoryError> {
    let pi_prime = m
        .nu_prime_on_info_sets()
        .ok_or_else(|| CategoryError::PreconditionViolated("nu' does not preserve information sets".into()))?;
    Ok(ScenarioMorphism {
        source: Arc::new(functor_f_object(&m.source)?),
        target: Arc::new(functor_f_object(&m.target)?),
        pi_prime,
        alpha: m.beta.clone(),
    })
}

fn bob_id(t: &EventSet) -> NodeId {
    NodeId::new(format!("t{t}"))
}

fn alfred_id(t: &EventSet, x: &InfoSetId, c: &Action) -> NodeId {
    NodeId::new(format!("n{t}/{x}/{c}"))
}

/// G on objects without checking that the scenario is in the category.
/// Fails only if the resulting graph is not a well-formed game.
pub fn game_of_scenario_unchecked(scenario: &Scenario) -> Result<SpacetimeGame, CategoryError> {
    let alfred = PlayerId::nature();
    let bob = PlayerId::observer();
    let mut spec = GameSpec::new();
    let sides: Vec<&EventSet> = scenario.enabling_sides().into_iter().collect();
    let mut alfred_nodes: Vec<(NodeId, InfoSetId)> = Vec::new();
    for t in &sides {
        let local = scenario.local_cover_restriction(t);
        let tid = bob_id(t);
        spec.nodes.push(NodeSpec {
            id: tid.clone(),
            player: bob.clone(),
            info_set: Some(InfoSetId::new(tid.as_str())),
            actions: local.facets().map(context_label).collect(),
        });
        let enabled = scenario.enabled(t);
        for c in local.facets() {
            let label = context_label(c);
            for x in c.iter().filter(|x| enabled.contains(*x)) {
                let nid = alfred_id(t, x, &label);
                spec.nodes.push(NodeSpec {
                    id: nid.clone(),
                    player: alfred.clone(),
                    info_set: Some(x.clone()),
                    actions: scenario.outcomes_of(x).expect("known").iter().cloned().collect(),
                });
                spec.edges.push(EdgeSpec { from: tid.clone(), to: nid.clone(), label: label.clone() });
                alfred_nodes.push((nid, x.clone()));
            }
        }
    }
    for (nid, x) in &alfred_nodes {
        for t in &sides {
            if let Some(o) = t.get(x) {
                spec.edges.push(EdgeSpec { from: nid.clone(), to: bob_id(t), label: o.clone() });
            }
        }
    }
    Ok(spec.build()?)
}

/// G on objects. The scenario must be acyclic, clean, have unique bridges
/// and a causally-secured cover.
pub fn functor_g_object(scenario: &Scenario) -> Result<SpacetimeGame, CategoryError> {
    if let Some(x) = scenario.dependency_cycle() {
        return Err(CategoryError::PreconditionViolated(format!("enabling cycle through {x}")));
    }
    if let Some((x, _)) = scenario.check_unique_causal_bridges().witnesses.first() {
        return Err(CategoryError::PreconditionViolated(format!("{x} has several causal bridges")));
    }
    for x in scenario.measurements() {
        scenario
            .tau_bar(x)
            .map_err(|e| CategoryError::PreconditionViolated(format!("scenario is not clean: {e}")))?;
    }
    let report = scenario.check_causally_secured()?;
    if !report.passed {
        let names: Vec<String> = report.failed_criteria().into_iter().map(|c| c.to_string()).collect();
        return Err(CategoryError::PreconditionViolated(format!("cover is not causally secured ({})", names.join(", "))));
    }
    game_of_scenario_unchecked(scenario)
}

/// Witnesses of Γ ≅ F(G(Γ)).
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub game: SpacetimeGame,
    pub image: Arc<Scenario>,
    /// γ: F(G(Γ)) → Γ.
    pub to_original: ScenarioMorphism,
    /// γ′: Γ → F(G(Γ)).
    pub from_original: ScenarioMorphism,
}

/// Builds F(G(Γ)) and the identity-component morphisms both ways, checking
/// that both are morphisms, that they compose to identities, and that the
/// enabling relations agree.
pub fn roundtrip_iso(scenario: &Scenario) -> Result<RoundTrip, CategoryError> {
    let game = functor_g_object(scenario)?;
    let image = Arc::new(functor_f_object(&game)?);
    let original = Arc::new(scenario.clone());
    if image.enabling() != original.enabling() {
        return Err(CategoryError::RoundTripFailed("enabling relations differ".into()));
    }
    let to_original = ScenarioMorphism::identity_between(image.clone(), original.clone());
    let from_original = ScenarioMorphism::identity_between(original.clone(), image.clone());
    for (name, m) in [("gamma", &to_original), ("gamma'", &from_original)] {
        let r = check_scenario_morphism(m);
        if !r.passed {
            let details: Vec<String> = r.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
            return Err(CategoryError::RoundTripFailed(format!("{name} is not a morphism: {}", details.join("; "))));
        }
    }
    let a = compose_scenario_morphisms(&to_original, &from_original)?;
    let b = compose_scenario_morphisms(&from_original, &to_original)?;
    if !a.is_identity() || !b.is_identity() {
        return Err(CategoryError::RoundTripFailed("composites are not identities".into()));
    }
    Ok(RoundTrip { game, image, to_original, from_original })
}

/// Constructs γ: 𝒢′ → 𝒢 with F(γ) = μ for μ: F(𝒢′) → F(𝒢). Each nature node
/// n of 𝒢 goes to the node of π′(ι(n)) under the corresponding observer node
/// whose context is the image of n's context.
pub fn lift_morphism(
    mu: &ScenarioMorphism,
    target: Arc<SpacetimeGame>,
    source: Arc<SpacetimeGame>,
) -> Result<GameMorphism, CategoryError> {
    let f_target = functor_f_object(&target)?;
    let f_source = functor_f_object(&source)?;
    if *mu.target != f_target || *mu.source != f_source {
        return Err(CategoryError::DomainMismatch("scenario morphism does not run between the F-images".into()));
    }
    let alfred = PlayerId::nature();
    let mut nu_prime = BTreeMap::new();
    for n in target.nodes_of(&alfred) {
        let t = target.parent(&n).expect("alternating").clone();
        let x = target.info_set_of(&n);
        let x2 = mu
            .pi_prime
            .get(x)
            .ok_or_else(|| CategoryError::LiftFailed { node: n.clone(), detail: format!("pi' undefined at {x}") })?;
        let members = source
            .info_set_nodes(x2)
            .ok_or_else(|| CategoryError::LiftFailed { node: n.clone(), detail: format!("{x2} is not in the source") })?;
        let parents: BTreeSet<&NodeId> = members.iter().filter_map(|m| source.parent(m)).collect();
        let [t2] = parents.into_iter().collect::<Vec<_>>()[..] else {
            return Err(CategoryError::LiftFailed { node: n.clone(), detail: format!("{x2} has no single parent") });
        };
        let ctx = context_of(&target, &t, target.edge_label(&t, &n).expect("edge"));
        let image: BTreeSet<InfoSetId> = ctx.iter().filter_map(|y| mu.pi_prime.get(y).cloned()).collect();
        let candidates: Vec<&NodeId> = members
            .iter()
            .filter(|m| source.edge_label(t2, m).is_some_and(|l| context_of(&source, t2, l) == image))
            .collect();
        match candidates[..] {
            [one] => {
                nu_prime.insert(n.clone(), one.clone());
            }
            _ => {
                return Err(CategoryError::LiftFailed {
                    node: n.clone(),
                    detail: format!("{} nodes of {x2} under {t2} sit in the image context {image:?}", candidates.len()),
                })
            }
        }
    }
    let gamma = GameMorphism { source, target, nu_prime, beta: mu.alpha.clone() };
    let report = check_game_morphism(&gamma);
    if !report.passed {
        let details: Vec<String> = report.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
        return Err(CategoryError::LiftFailed { node: NodeId::new("-"), detail: details.join("; ") });
    }
    debug_assert!(functor_f_morphism(&gamma).is_ok_and(|f| same(&f.source, &mu.source) && f.pi_prime == mu.pi_prime));
    Ok(gamma)
}

type Bridge = BTreeMap<InfoSetId, Action>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Bob(Bridge),
    Alfred(Bridge, InfoSetId, BTreeSet<InfoSetId>),
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Label {
    Context(BTreeSet<InfoSetId>),
    Outcome(Action),
}

fn canonical_shape(game: &SpacetimeGame) -> Option<(Vec<(Key, Vec<Label>)>, Vec<(Key, Key, Label)>)> {
    if !check_alternating(game).passed {
        return None;
    }
    let bridge = |t: &NodeId| -> Bridge {
        game.predecessors(t)
            .iter()
            .map(|m| (game.info_set_of(m).clone(), game.edge_label(m, t).expect("edge").clone()))
            .collect()
    };
    let alfred = PlayerId::nature();
    let key = |n: &NodeId| -> Key {
        if game.owner(n) == &alfred {
            let t = game.parent(n).expect("alternating");
            Key::Alfred(bridge(t), game.info_set_of(n).clone(), context_of(game, t, game.edge_label(t, n).expect("edge")))
        } else {
            Key::Bob(bridge(n))
        }
    };
    let label = |from: &NodeId, a: &Action| -> Label {
        if game.owner(from) == &alfred {
            Label::Outcome(a.clone())
        } else {
            Label::Context(context_of(game, from, a))
        }
    };
    let mut nodes: Vec<(Key, Vec<Label>)> = game
        .nodes()
        .map(|(id, n)| {
            let mut acts: Vec<Label> = n.actions.iter().map(|a| label(id, a)).collect();
            acts.sort();
            (key(id), acts)
        })
        .collect();
    nodes.sort();
    let mut edges: Vec<(Key, Key, Label)> = game.edges().map(|(a, b, l)| (key(a), key(b), label(a, l))).collect();
    edges.sort();
    Some((nodes, edges))
}

/// Alternating games equal up to renaming nodes and observer actions: nodes
/// are matched by their causal bridge (and, for nature, information set and
/// context), observer actions by the context they select.
pub fn structurally_isomorphic(a: &SpacetimeGame, b: &SpacetimeGame) -> bool {
    match (canonical_shape(a), canonical_shape(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}
