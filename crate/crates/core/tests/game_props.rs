//! Game-level invariants on random alternating games, checked against
//! brute-force oracles written directly from the definitions.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spacetime_core::corpus;
use spacetime_core::game::{
    canonicalize_contexts, check_alternating, enumerate_complete_histories, enumerate_histories, natural_cover,
    to_extensive_form, History, SpacetimeGame,
};
use spacetime_core::gen::{random_alternating_game, GameParams};
use spacetime_core::ids::{Action, InfoSetId, NodeId, PlayerId};

const SMALL: GameParams = GameParams { extra_observers: 1, max_measurements: 2, max_outcomes: 2 };

fn game(seed: u64, p: GameParams) -> SpacetimeGame {
    random_alternating_game(&mut ChaCha8Rng::seed_from_u64(seed), p)
}

/// Activation straight from the edge list.
fn activated(g: &SpacetimeGame, h: &History, i: &InfoSetId) -> bool {
    let mut incoming: BTreeMap<&NodeId, Vec<(&NodeId, &Action)>> = BTreeMap::new();
    for (from, to, a) in g.edges() {
        incoming.entry(to).or_default().push((from, a));
    }
    g.info_set_nodes(i).unwrap().iter().any(|n| {
        incoming.get(n).is_none_or(|es| es.iter().all(|(m, a)| h.get(g.info_set_of(m)) == Some(*a)))
    })
}

/// Every partial assignment, filtered by the definition of (complete) history.
fn oracle_histories(g: &SpacetimeGame, complete: bool) -> Option<BTreeSet<History>> {
    let sets: Vec<InfoSetId> = g.info_sets().map(|(i, _)| i.clone()).collect();
    let size: u128 = sets.iter().map(|i| g.actions_at(i).unwrap().len() as u128 + 1).product();
    if size > 200_000 {
        return None;
    }
    let mut all = vec![History::new()];
    for i in &sets {
        let mut next = Vec::new();
        for h in &all {
            next.push(h.clone());
            for a in g.actions_at(i).unwrap() {
                next.push(h.clone().with(i.clone(), a.clone()));
            }
        }
        all = next;
    }
    Some(
        all.into_iter()
            .filter(|h| {
                sets.iter().all(|i| {
                    let (act, asg) = (activated(g, h, i), h.get(i).is_some());
                    if complete {
                        act == asg
                    } else {
                        !asg || act
                    }
                })
            })
            .collect(),
    )
}

fn nature_sets(g: &SpacetimeGame) -> BTreeSet<InfoSetId> {
    g.info_sets_of(&PlayerId::nature()).into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn node_order_is_topological(seed in any::<u64>()) {
        let g = game(seed, GameParams::default());
        let pos: BTreeMap<&NodeId, usize> = g.node_order().iter().enumerate().map(|(k, n)| (n, k)).collect();
        prop_assert_eq!(pos.len(), g.node_count());
        for (a, b, _) in g.edges() {
            prop_assert!(pos[a] < pos[b]);
        }
    }

    #[test]
    fn outcomes_match_brute_force(seed in any::<u64>()) {
        let g = game(seed, SMALL);
        if let Some(want) = oracle_histories(&g, true) {
            let got: BTreeSet<History> = g.outcomes().iter().cloned().collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(enumerate_complete_histories(&g).len(), want.len());
        }
        if let Some(want) = oracle_histories(&g, false) {
            let got: BTreeSet<History> = enumerate_histories(&g).into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn histories_are_downward_closed(seed in any::<u64>()) {
        let g = game(seed, GameParams::default());
        let all: BTreeSet<History> = enumerate_histories(&g).into_iter().collect();
        for h in &all {
            let assigned: BTreeSet<&InfoSetId> = h.support().collect();
            for i in &assigned {
                // i is last-activated when no other assigned set sits below it.
                let feeds_assigned = g.info_set_nodes(i).unwrap().iter().any(|n| {
                    g.successors(n).iter().any(|m| assigned.contains(g.info_set_of(m)))
                });
                if !feeds_assigned {
                    let mut smaller = h.clone();
                    smaller.remove(i);
                    prop_assert!(all.contains(&smaller), "{} minus {} is not a history", h, i);
                }
            }
        }
    }

    #[test]
    fn natural_cover_is_the_facet_antichain(seed in any::<u64>()) {
        let g = game(seed, GameParams::default());
        let ia = nature_sets(&g);
        let supports: BTreeSet<BTreeSet<InfoSetId>> = g
            .outcomes()
            .iter()
            .map(|z| z.support().filter(|i| ia.contains(*i)).cloned().collect())
            .collect();
        let facets: Vec<BTreeSet<InfoSetId>> = natural_cover(&g).facets().cloned().collect();
        for (a, fa) in facets.iter().enumerate() {
            prop_assert!(supports.contains(fa));
            for (b, fb) in facets.iter().enumerate() {
                prop_assert!(a == b || !fa.is_subset(fb));
            }
        }
        for s in &supports {
            prop_assert!(facets.iter().any(|f| s.is_subset(f)));
        }
    }

    #[test]
    fn canonicalize_is_idempotent(seed in any::<u64>()) {
        let g = game(seed, GameParams::default());
        let once = canonicalize_contexts(&g).unwrap();
        let twice = canonicalize_contexts(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.outcomes().len(), g.outcomes().len());
        prop_assert!(check_alternating(&once).passed);
    }

    #[test]
    fn extensive_form_preserves_counts(seed in any::<u64>()) {
        let g = game(seed, GameParams::default());
        let t = to_extensive_form(&g);
        prop_assert_eq!(t.leaves().len(), g.outcomes().len());
        prop_assert_eq!(t.info_sets().len(), g.info_sets().count());
    }
}

#[test]
fn oracle_agrees_on_corpus() {
    for e in corpus::all() {
        let Some(want) = oracle_histories(&e.game, true) else { continue };
        let got: BTreeSet<History> = e.game.outcomes().iter().cloned().collect();
        assert_eq!(got, want, "{}", e.name);
    }
}

#[test]
fn extensive_form_on_corpus() {
    for e in corpus::all() {
        let t = to_extensive_form(&e.game);
        assert_eq!(t.leaves().len(), e.game.outcomes().len(), "{}", e.name);
    }
    assert!(to_extensive_form(&corpus::adaptive().game).is_perfect_information());
}
