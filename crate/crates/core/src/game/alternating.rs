use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::SpacetimeGame;
use crate::ids::{Action, NodeId, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AlternationRule {
    #[serde(rename = "2-PLAYERS")]
    TwoPlayers,
    #[serde(rename = "BIPARTITE")]
    Bipartite,
    #[serde(rename = "EVEN")]
    Even,
    #[serde(rename = "BOB-S")]
    BobSingletons,
    #[serde(rename = "BOB-A")]
    BobActionsUsed,
    #[serde(rename = "BA1")]
    Ba1,
    #[serde(rename = "BA2")]
    Ba2,
    #[serde(rename = "AB1")]
    Ab1,
    #[serde(rename = "AB2")]
    Ab2,
}

impl AlternationRule {
    pub const ALL: [AlternationRule; 9] = [
        Self::TwoPlayers,
        Self::Bipartite,
        Self::Even,
        Self::BobSingletons,
        Self::BobActionsUsed,
        Self::Ba1,
        Self::Ba2,
        Self::Ab1,
        Self::Ab2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::TwoPlayers => "2-PLAYERS",
            Self::Bipartite => "BIPARTITE",
            Self::Even => "EVEN",
            Self::BobSingletons => "BOB-S",
            Self::BobActionsUsed => "BOB-A",
            Self::Ba1 => "BA1",
            Self::Ba2 => "BA2",
            Self::Ab1 => "AB1",
            Self::Ab2 => "AB2",
        }
    }
}

impl fmt::Display for AlternationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub rule: AlternationRule,
    /// Offending node, edge (`a->b`), information set or player ids.
    pub subjects: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternationReport {
    pub passed: bool,
    pub violations: Vec<RuleViolation>,
}

impl AlternationReport {
    pub fn failed_rules(&self) -> BTreeSet<AlternationRule> {
        self.violations.iter().map(|v| v.rule).collect()
    }
}

/// Evaluates the nine alternating rules with the strict form of BOB-A.
pub fn check_alternating(game: &SpacetimeGame) -> AlternationReport {
    check_alternating_with(game, false)
}

/// Evaluates the nine alternating rules. With `relax_bob_a`, a Bob node may
/// leave at most one action unused.
pub fn check_alternating_with(game: &SpacetimeGame, relax_bob_a: bool) -> AlternationReport {
    let alfred = PlayerId::nature();
    let bob = PlayerId::observer();
    let is = |n: &NodeId, p: &PlayerId| game.owner(n) == p;
    let mut v = Vec::new();
    let mut push = |rule, subjects: Vec<String>, detail: String| v.push(RuleViolation { rule, subjects, detail });

    let players = game.players();
    let expected: BTreeSet<PlayerId> = [alfred.clone(), bob.clone()].into();
    if players != expected {
        let odd: Vec<String> = players.symmetric_difference(&expected).map(|p| p.to_string()).collect();
        push(AlternationRule::TwoPlayers, odd, "players must be exactly Alfred and Bob".into());
    }

    for (a, b, _) in game.edges() {
        let ok = (is(a, &alfred) && is(b, &bob)) || (is(a, &bob) && is(b, &alfred));
        if !ok {
            push(AlternationRule::Bipartite, vec![format!("{a}->{b}")], "edge does not alternate between Alfred and Bob".into());
        }
    }

    for r in game.roots() {
        if !is(&r, &bob) {
            push(AlternationRule::Even, vec![r.to_string()], "root not played by Bob".into());
        }
    }
    for l in game.leaves() {
        if !is(&l, &alfred) {
            push(AlternationRule::Even, vec![l.to_string()], "leaf not played by Alfred".into());
        }
    }

    for (i, members) in game.info_sets() {
        if game.info_set_owner(i) == Some(&bob) && members.len() != 1 {
            push(
                AlternationRule::BobSingletons,
                members.iter().map(|m| m.to_string()).collect(),
                format!("Bob information set {i} is not a singleton"),
            );
        }
    }

    for t in game.nodes_of(&bob) {
        let used: BTreeSet<&Action> = game
            .successors(&t)
            .iter()
            .filter(|n| is(n, &alfred))
            .filter_map(|n| game.edge_label(&t, n))
            .collect();
        let unused: Vec<String> = game.node(&t).expect("node").actions.iter().filter(|a| !used.contains(a)).map(|a| a.to_string()).collect();
        let limit = usize::from(relax_bob_a);
        if unused.len() > limit {
            push(AlternationRule::BobActionsUsed, vec![t.to_string()], format!("unused actions {}", unused.join(" ")));
        }
    }

    for n in game.nodes_of(&alfred) {
        let bob_parents = game.predecessors(&n).iter().filter(|p| is(p, &bob)).count();
        if bob_parents != 1 {
            push(AlternationRule::Ba1, vec![n.to_string()], format!("{bob_parents} Bob parents"));
        }
    }

    for t in game.nodes_of(&bob) {
        let mut seen: BTreeMap<(&Action, &crate::ids::InfoSetId), &NodeId> = BTreeMap::new();
        for n in game.successors(&t) {
            if !is(n, &alfred) {
                continue;
            }
            let key = (game.edge_label(&t, n).expect("edge"), game.info_set_of(n));
            if let Some(prev) = seen.insert(key, n) {
                push(
                    AlternationRule::Ba2,
                    vec![t.to_string(), prev.to_string(), n.to_string()],
                    format!("two successors labeled {} share information set {}", key.0, key.1),
                );
            }
        }
    }

    for (i, members) in game.info_sets() {
        if game.info_set_owner(i) != Some(&alfred) {
            continue;
        }
        let futures: BTreeSet<BTreeMap<&NodeId, &Action>> = members
            .iter()
            .map(|m| game.successors(m).iter().map(|u| (u, game.edge_label(m, u).expect("edge"))).collect())
            .collect();
        if futures.len() > 1 {
            push(
                AlternationRule::Ab1,
                members.iter().map(|m| m.to_string()).collect(),
                format!("nodes of {i} have different outgoing edges"),
            );
        }
    }

    let mut bridges: BTreeMap<BTreeMap<NodeId, Action>, NodeId> = BTreeMap::new();
    for t in game.nodes_of(&bob) {
        if let Some(prev) = bridges.insert(game.causal_bridge(&t), t.clone()) {
            push(AlternationRule::Ab2, vec![prev.to_string(), t.to_string()], "distinct Bob nodes share a causal bridge".into());
        }
    }

    AlternationReport { passed: v.is_empty(), violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    #[test]
    fn minimal_game_alternates() {
        let g = GameSpec::new()
            .node("B", "Bob", "B", ["{x}"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "{x}")
            .build()
            .unwrap();
        assert!(check_alternating(&g).passed);
    }

    #[test]
    fn unused_bob_action_respects_relaxation() {
        let g = GameSpec::new()
            .node("B", "Bob", "B", ["{x}", "{}"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "{x}")
            .build()
            .unwrap();
        assert_eq!(check_alternating(&g).failed_rules(), BTreeSet::from([AlternationRule::BobActionsUsed]));
        assert!(check_alternating_with(&g, true).passed);
    }

    #[test]
    fn lone_alfred_root_breaks_even_and_ba1() {
        let g = GameSpec::new().node("x", "Alfred", "x", ["0"]).node("B", "Bob", "B", ["go"]).edge("x", "B", "0").build().unwrap();
        let rules = check_alternating(&g).failed_rules();
        assert!(rules.contains(&AlternationRule::Even));
        assert!(rules.contains(&AlternationRule::Ba1));
        assert!(rules.contains(&AlternationRule::BobActionsUsed));
    }
}
