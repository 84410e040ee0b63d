use std::collections::{BTreeMap, BTreeSet};

use super::{build_game, check_alternating, GameError, History, SpacetimeGame};
use crate::ids::{context_label, Action, InfoSetId, NodeId, PlayerId};

/// Renames every Bob action to the set of information sets its edges reach,
/// e.g. `a1` becomes `{W,X}`. Outcomes are renamed along with the labels.
pub fn canonicalize_contexts(game: &SpacetimeGame) -> Result<SpacetimeGame, GameError> {
    let report = check_alternating(game);
    if !report.passed {
        let rules: Vec<&str> = report.failed_rules().into_iter().map(|r| r.id()).collect();
        return Err(GameError::NotAlternating(format!("fails {}", rules.join(", "))));
    }
    let bob = PlayerId::observer();
    let mut renaming: BTreeMap<NodeId, BTreeMap<Action, Action>> = BTreeMap::new();
    for t in game.nodes_of(&bob) {
        let mut reached: BTreeMap<&Action, BTreeSet<&InfoSetId>> =
            game.node(&t).expect("node").actions.iter().map(|a| (a, BTreeSet::new())).collect();
        for n in game.successors(&t) {
            let label = game.edge_label(&t, n).expect("edge");
            reached.get_mut(label).expect("label available").insert(game.info_set_of(n));
        }
        let mut map = BTreeMap::new();
        let mut produced: BTreeSet<Action> = BTreeSet::new();
        for (a, members) in reached {
            let c = context_label(members);
            if !produced.insert(c.clone()) {
                return Err(GameError::ContextCollision { node: t.clone(), context: c });
            }
            map.insert(a.clone(), c);
        }
        renaming.insert(t, map);
    }

    let mut spec = game.to_spec();
    for n in &mut spec.nodes {
        if let Some(map) = renaming.get(&n.id) {
            n.actions = n.actions.iter().map(|a| map[a].clone()).collect();
        }
    }
    for e in &mut spec.edges {
        if let Some(map) = renaming.get(&e.from) {
            e.label = map[&e.label].clone();
        }
    }
    // Bob's information sets are singletons, so a set's renaming is its node's.
    let by_info: BTreeMap<&InfoSetId, &BTreeMap<Action, Action>> =
        renaming.iter().map(|(n, m)| (game.info_set_of(n), m)).collect();
    spec.outcomes = spec.outcomes.map(|zs| {
        zs.into_iter()
            .map(|z| -> History {
                z.iter()
                    .map(|(i, a)| {
                        let a = by_info.get(i).map_or_else(|| a.clone(), |m| m[a].clone());
                        (i.clone(), a)
                    })
                    .collect()
            })
            .collect()
    });
    spec.actions = None;
    build_game(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    #[test]
    fn renames_sole_action_of_minimal_game() {
        let g = GameSpec::new()
            .node("B", "Bob", "B", ["go"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "go")
            .build()
            .unwrap();
        let c = canonicalize_contexts(&g).unwrap();
        let acts: Vec<&str> = c.actions_at(&"B".into()).unwrap().iter().map(Action::as_str).collect();
        assert_eq!(acts, ["{x}"]);
        assert_eq!(c.outcomes().len(), 2);
        assert!(c.validate().valid);
        assert_eq!(canonicalize_contexts(&c).unwrap(), c);
    }

    #[test]
    fn non_alternating_input_is_rejected() {
        let g = GameSpec::new().node("x", "Alfred", "x", ["0"]).build().unwrap();
        assert!(matches!(canonicalize_contexts(&g), Err(GameError::NotAlternating(_))));
    }
}
