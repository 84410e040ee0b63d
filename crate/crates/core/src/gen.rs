//! Random generators for property tests and benchmarks: alternating games,
//! morphism chains between them, and mixed strategies of nature.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::categories::GameMorphism;
use crate::game::{EdgeSpec, GameSpec, NodeSpec, SpacetimeGame};
use crate::ids::{context_label, Action, InfoSetId, NodeId, PlayerId};
use crate::strategy::PureStrategy;

/// Size knobs for [`random_alternating_game`].
#[derive(Debug, Clone, Copy)]
pub struct GameParams {
    /// Observer nodes beyond the root.
    pub extra_observers: usize,
    /// Fresh measurements per observer node, at most.
    pub max_measurements: usize,
    /// Outcomes per measurement, at most (at least 2).
    pub max_outcomes: usize,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams { extra_observers: 2, max_measurements: 3, max_outcomes: 3 }
    }
}

/// Random antichain covering `ms`.
fn random_contexts<R: Rng>(rng: &mut R, ms: &[String]) -> Vec<BTreeSet<String>> {
    let set = |xs: &[&String]| xs.iter().map(|s| (*s).clone()).collect::<BTreeSet<String>>();
    match ms {
        [a] => vec![set(&[a])],
        [a, b] => {
            if rng.gen_bool(0.5) {
                vec![set(&[a, b])]
            } else {
                vec![set(&[a]), set(&[b])]
            }
        }
        [a, b, c] => match rng.gen_range(0..5) {
            0 => vec![set(&[a, b, c])],
            1 => vec![set(&[a, b]), set(&[c])],
            2 => vec![set(&[a, b]), set(&[a, c]), set(&[b, c])],
            3 => vec![set(&[a]), set(&[b]), set(&[c])],
            _ => vec![set(&[a, b]), set(&[b, c])],
        },
        _ => ms.iter().map(|m| set(&[m])).collect(),
    }
}

/// A random alternating game. Every observer node has a distinct bridge made
/// of events from one context of an earlier observer node; each measurement
/// belongs to exactly one observer node. Observer action labels are either
/// canonical contexts or opaque names.
pub fn random_alternating_game<R: Rng>(rng: &mut R, p: GameParams) -> SpacetimeGame {
    struct Obs {
        id: String,
        bridge: BTreeMap<String, String>,
        contexts: Vec<BTreeSet<String>>,
    }
    let mut outcomes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut next_m = 0;
    let mut fresh = |rng: &mut R, outcomes: &mut BTreeMap<String, Vec<String>>| -> Vec<String> {
        let k = rng.gen_range(1..=p.max_measurements.max(1));
        (0..k)
            .map(|_| {
                let name = format!("M{next_m}");
                next_m += 1;
                let n = rng.gen_range(2..=p.max_outcomes.max(2));
                outcomes.insert(name.clone(), (0..n).map(|o| o.to_string()).collect());
                name
            })
            .collect()
    };
    let root_ms = fresh(rng, &mut outcomes);
    let mut obs = vec![Obs { id: "b0".into(), bridge: BTreeMap::new(), contexts: random_contexts(rng, &root_ms) }];
    let mut attempts = 0;
    while obs.len() < p.extra_observers + 1 && attempts < 20 {
        attempts += 1;
        let parent = &obs[rng.gen_range(0..obs.len())];
        let ctx: Vec<&String> = parent.contexts[rng.gen_range(0..parent.contexts.len())].iter().collect();
        let size = rng.gen_range(1..=ctx.len().min(2));
        let mut chosen: Vec<&String> = ctx.choose_multiple(rng, size).copied().collect();
        chosen.sort();
        let mut bridge = parent.bridge.clone();
        bridge.clear();
        for x in chosen {
            let os = &outcomes[x];
            bridge.insert(x.clone(), os[rng.gen_range(0..os.len())].clone());
        }
        if obs.iter().any(|o| o.bridge == bridge) {
            continue;
        }
        let ms = fresh(rng, &mut outcomes);
        let id = format!("b{}", obs.len());
        obs.push(Obs { id, bridge, contexts: random_contexts(rng, &ms) });
    }

    let opaque = rng.gen_bool(0.3);
    let mut spec = GameSpec::new();
    let mut nodes_of: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
    for o in &obs {
        let labels: Vec<Action> = o
            .contexts
            .iter()
            .enumerate()
            .map(|(k, c)| if opaque { Action::new(format!("{}c{k}", o.id)) } else { context_label(&c.iter().map(|s| InfoSetId::new(s.as_str())).collect::<Vec<_>>()) })
            .collect();
        spec.nodes.push(NodeSpec {
            id: o.id.as_str().into(),
            player: PlayerId::observer(),
            info_set: Some(o.id.as_str().into()),
            actions: labels.clone(),
        });
        for (k, c) in o.contexts.iter().enumerate() {
            for x in c {
                let nid = NodeId::new(format!("{}_{k}_{x}", o.id));
                spec.nodes.push(NodeSpec {
                    id: nid.clone(),
                    player: PlayerId::nature(),
                    info_set: Some(x.as_str().into()),
                    actions: outcomes[x].iter().map(|s| s.as_str().into()).collect(),
                });
                spec.edges.push(EdgeSpec { from: o.id.as_str().into(), to: nid.clone(), label: labels[k].clone() });
                nodes_of.entry(x.clone()).or_default().push(nid);
            }
        }
    }
    for o in &obs {
        for (x, v) in &o.bridge {
            for n in &nodes_of[x] {
                spec.edges.push(EdgeSpec { from: n.clone(), to: o.id.as_str().into(), label: v.as_str().into() });
            }
        }
    }
    spec.build().expect("generated games are well formed")
}

fn clean_spec(g: &SpacetimeGame) -> GameSpec {
    let mut spec = g.to_spec();
    spec.actions = None;
    spec.outcomes = None;
    spec
}

/// A copy of `target` with renamed nodes and measurements, permuted
/// outcomes and fresh observer labels, with the isomorphism γ: copy → target.
pub fn random_relabeling<R: Rng>(rng: &mut R, target: Arc<SpacetimeGame>, tag: &str) -> GameMorphism {
    let alfred = PlayerId::nature();
    let spec = clean_spec(&target);
    let rename_node = |n: &NodeId| NodeId::new(format!("{tag}{n}"));
    let rename_set = |i: &InfoSetId| InfoSetId::new(format!("{i}{tag}"));
    // perm[x][target outcome] = source outcome.
    let mut perm: BTreeMap<InfoSetId, BTreeMap<Action, Action>> = BTreeMap::new();
    for x in target.info_sets_of(&alfred) {
        let os: Vec<Action> = target.actions_at(&x).expect("known").iter().cloned().collect();
        let mut shuffled = os.clone();
        shuffled.shuffle(rng);
        perm.insert(x, os.into_iter().zip(shuffled).collect());
    }
    let opaque = rng.gen_bool(0.5);
    let mut bob_labels: BTreeMap<(NodeId, Action), Action> = BTreeMap::new();
    let mut out = GameSpec::new();
    for n in &spec.nodes {
        let info = n.info_set.clone().expect("to_spec names info sets");
        if n.player == alfred {
            out.nodes.push(NodeSpec {
                id: rename_node(&n.id),
                player: alfred.clone(),
                info_set: Some(rename_set(&info)),
                actions: n.actions.iter().map(|a| perm[&info][a].clone()).collect(),
            });
        } else {
            let labels: Vec<Action> = n
                .actions
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let l = if opaque { Action::new(format!("{tag}{}a{k}", n.id)) } else { a.clone() };
                    bob_labels.insert((n.id.clone(), a.clone()), l.clone());
                    l
                })
                .collect();
            out.nodes.push(NodeSpec {
                id: rename_node(&n.id),
                player: n.player.clone(),
                info_set: Some(InfoSetId::new(format!("{tag}{info}"))),
                actions: labels,
            });
        }
    }
    for e in &spec.edges {
        let label = if target.owner(&e.from) == &alfred {
            perm[target.info_set_of(&e.from)][&e.label].clone()
        } else {
            bob_labels[&(e.from.clone(), e.label.clone())].clone()
        };
        out.edges.push(EdgeSpec { from: rename_node(&e.from), to: rename_node(&e.to), label });
    }
    let source = Arc::new(out.build().expect("relabeling preserves structure"));
    let nu_prime = target.nodes_of(&alfred).into_iter().map(|n| (n.clone(), rename_node(&n))).collect();
    let beta = perm.into_iter().map(|(x, m)| (x, m.into_iter().map(|(t, s)| (s, t)).collect())).collect();
    GameMorphism { source, target, nu_prime, beta }
}

/// A copy of `target` where one measurement gains an extra outcome, with
/// γ: copy → target identity on nodes and β sending the new outcome to an
/// existing one. The new outcome enables nothing.
pub fn random_outcome_extension<R: Rng>(rng: &mut R, target: Arc<SpacetimeGame>, tag: &str) -> GameMorphism {
    let alfred = PlayerId::nature();
    let sets = target.info_sets_of(&alfred);
    let x = sets[rng.gen_range(0..sets.len())].clone();
    let extra = Action::new(format!("e{tag}"));
    let existing: Vec<Action> = target.actions_at(&x).expect("known").iter().cloned().collect();
    let merged_into = existing[rng.gen_range(0..existing.len())].clone();
    let mut spec = clean_spec(&target);
    for n in spec.nodes.iter_mut() {
        if n.info_set.as_ref() == Some(&x) {
            n.actions.push(extra.clone());
        }
    }
    let source = Arc::new(spec.build().expect("extension preserves structure"));
    let nu_prime = target.nodes_of(&alfred).into_iter().map(|n| (n.clone(), n)).collect();
    let beta = sets
        .iter()
        .map(|y| {
            let mut m: BTreeMap<Action, Action> =
                target.actions_at(y).expect("known").iter().map(|a| (a.clone(), a.clone())).collect();
            if *y == x {
                m.insert(extra.clone(), merged_into.clone());
            }
            (y.clone(), m)
        })
        .collect();
    GameMorphism { source, target, nu_prime, beta }
}

/// A random morphism into `target` from a freshly built source.
pub fn random_morphism_into<R: Rng>(rng: &mut R, target: Arc<SpacetimeGame>, tag: &str) -> GameMorphism {
    if rng.gen_bool(0.5) {
        random_relabeling(rng, target, tag)
    } else {
        random_outcome_extension(rng, target, tag)
    }
}

/// `len` composable morphisms: chain[k] runs from game k+1 to game k.
pub fn random_chain<R: Rng>(rng: &mut R, len: usize, p: GameParams) -> Vec<GameMorphism> {
    let mut target = Arc::new(random_alternating_game(rng, p));
    let mut chain = Vec::with_capacity(len);
    for k in 0..len {
        let m = random_morphism_into(rng, target, &format!("g{k}"));
        target = m.source.clone();
        chain.push(m);
    }
    chain
}

/// A probability distribution over `support` distinct random pure strategies
/// of nature, with random positive rational weights.
pub fn random_nature_mix<R: Rng>(rng: &mut R, game: &SpacetimeGame, support: usize) -> Vec<(PureStrategy, BigRational)> {
    let alfred = PlayerId::nature();
    let sets = game.info_sets_of(&alfred);
    let mut picked: BTreeSet<PureStrategy> = BTreeSet::new();
    for _ in 0..support.max(1) * 4 {
        if picked.len() >= support.max(1) {
            break;
        }
        let mut s = PureStrategy::new(alfred.clone());
        for x in &sets {
            let os: Vec<&Action> = game.actions_at(x).expect("known").iter().collect();
            s.choice.insert(x.clone(), os[rng.gen_range(0..os.len())].clone());
        }
        picked.insert(s);
    }
    let raw: Vec<u32> = picked.iter().map(|_| rng.gen_range(1..10)).collect();
    let total: u32 = raw.iter().sum();
    picked
        .into_iter()
        .zip(raw)
        .map(|(s, w)| (s, BigRational::new(BigInt::from(w), BigInt::from(total))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::check_game_morphism;
    use crate::game::check_alternating;
    use rand::SeedableRng;

    #[test]
    fn generated_games_alternate() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..30 {
            let g = random_alternating_game(&mut rng, GameParams::default());
            let r = check_alternating(&g);
            assert!(r.passed, "{:?}", r.violations);
            assert!(g.validate().valid);
        }
    }

    #[test]
    fn generated_morphisms_pass() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..10 {
            for m in random_chain(&mut rng, 3, GameParams::default()) {
                let r = check_game_morphism(&m);
                assert!(r.passed, "{:?}", r.violations);
            }
        }
    }
}
