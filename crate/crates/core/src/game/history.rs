use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SpacetimeGame;
use crate::ids::{Action, InfoSetId};

/// A partial assignment of actions to information sets. Unassigned sets
/// (undefined, ⊥) are simply absent.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct History(BTreeMap<InfoSetId, Action>);

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: &InfoSetId) -> Option<&Action> {
        self.0.get(i)
    }

    pub fn insert(&mut self, i: InfoSetId, a: Action) -> Option<Action> {
        self.0.insert(i, a)
    }

    pub fn remove(&mut self, i: &InfoSetId) -> Option<Action> {
        self.0.remove(i)
    }

    pub fn with(mut self, i: impl Into<InfoSetId>, a: impl Into<Action>) -> Self {
        self.0.insert(i.into(), a.into());
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InfoSetId, &Action)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &InfoSetId> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn restrict(&self, domain: &BTreeSet<InfoSetId>) -> History {
        History(self.0.iter().filter(|(k, _)| domain.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect())
    }

    pub fn as_map(&self) -> &BTreeMap<InfoSetId, Action> {
        &self.0
    }
}

impl FromIterator<(InfoSetId, Action)> for History {
    fn from_iter<T: IntoIterator<Item = (InfoSetId, Action)>>(iter: T) -> Self {
        History(iter.into_iter().collect())
    }
}

impl From<BTreeMap<InfoSetId, Action>> for History {
    fn from(m: BTreeMap<InfoSetId, Action>) -> Self {
        History(m)
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

impl fmt::Debug for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All complete histories: activation of every information set coincides
/// with it being assigned. Sorted in the game's canonical history order.
pub fn enumerate_complete_histories(game: &SpacetimeGame) -> Vec<History> {
    enumerate(game, true)
}

/// All histories, partial ones included.
pub fn enumerate_histories(game: &SpacetimeGame) -> Vec<History> {
    enumerate(game, false)
}

fn enumerate(game: &SpacetimeGame, complete: bool) -> Vec<History> {
    let mut out = match game.evaluation_order() {
        Some(order) => {
            let mut out = Vec::new();
            descend(game, order, 0, &mut History::new(), complete, &mut out);
            out
        }
        None => brute_force(game, complete),
    };
    out.sort_by(|a, b| game.history_key(a).cmp(&game.history_key(b)));
    out
}

// With information sets in dependency order, activation of the set at
// `depth` depends only on choices already made.
fn descend(
    game: &SpacetimeGame,
    order: &[InfoSetId],
    depth: usize,
    h: &mut History,
    complete: bool,
    out: &mut Vec<History>,
) {
    let Some(i) = order.get(depth) else {
        out.push(h.clone());
        return;
    };
    if !game.info_set_activated(i, h) {
        descend(game, order, depth + 1, h, complete, out);
        return;
    }
    if !complete {
        descend(game, order, depth + 1, h, complete, out);
    }
    for a in game.actions_at(i).expect("known information set") {
        h.insert(i.clone(), a.clone());
        descend(game, order, depth + 1, h, complete, out);
        h.remove(i);
    }
}

/// Literal check over every partial assignment. Used when information sets
/// depend on each other cyclically.
fn brute_force(game: &SpacetimeGame, complete: bool) -> Vec<History> {
    let sets = game.canonical_info_order();
    let mut out = Vec::new();
    let mut h = History::new();
    fn rec(game: &SpacetimeGame, sets: &[InfoSetId], k: usize, h: &mut History, complete: bool, out: &mut Vec<History>) {
        if k == sets.len() {
            let ok = sets.iter().all(|i| {
                let active = game.info_set_activated(i, h);
                let assigned = h.get(i).is_some();
                if complete {
                    active == assigned
                } else {
                    !assigned || active
                }
            });
            if ok {
                out.push(h.clone());
            }
            return;
        }
        let i = &sets[k];
        rec(game, sets, k + 1, h, complete, out);
        for a in game.actions_at(i).expect("known information set") {
            h.insert(i.clone(), a.clone());
            rec(game, sets, k + 1, h, complete, out);
            h.remove(i);
        }
    }
    rec(game, sets, 0, &mut h, complete, &mut out);
    out
}

/// Outcome of [`SpacetimeGame::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    /// Complete histories missing from the declared outcomes.
    pub missing: Vec<History>,
    /// Declared outcomes that are not complete histories.
    pub unexpected: Vec<History>,
    /// Information sets no history ever activates.
    pub unused_info_sets: Vec<InfoSetId>,
    /// Declared actions no information set offers, or observer actions never
    /// used on an edge.
    pub unused_actions: Vec<Action>,
}

impl ValidationReport {
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for h in &self.missing {
            out.push(format!("missing complete history {h}"));
        }
        for h in &self.unexpected {
            out.push(format!("declared outcome {h} is not a complete history"));
        }
        if !self.unused_info_sets.is_empty() {
            let names: Vec<&str> = self.unused_info_sets.iter().map(InfoSetId::as_str).collect();
            out.push(format!(
                "information sets never activated: {}; prune them with the explicit prune operation",
                names.join(", ")
            ));
        }
        if !self.unused_actions.is_empty() {
            let names: Vec<&str> = self.unused_actions.iter().map(Action::as_str).collect();
            out.push(format!("actions never available: {}", names.join(", ")));
        }
        out
    }
}

impl SpacetimeGame {
    /// Compares the declared outcomes with the complete histories and reports
    /// cleanliness problems. Never mutates the game.
    pub fn validate(&self) -> ValidationReport {
        let computed = enumerate_complete_histories(self);
        let computed_set: BTreeSet<&History> = computed.iter().collect();
        let declared: BTreeSet<&History> = self.outcomes().iter().collect();
        let missing: Vec<History> = computed.iter().filter(|h| !declared.contains(h)).cloned().collect();
        let unexpected: Vec<History> =
            self.outcomes().iter().filter(|h| !computed_set.contains(h)).cloned().collect();

        let activated: BTreeSet<&InfoSetId> = computed.iter().flat_map(History::support).collect();
        let unused_info_sets: Vec<InfoSetId> =
            self.canonical_info_order().iter().filter(|i| !activated.contains(i)).cloned().collect();

        let offered: BTreeSet<&Action> = self.nodes().flat_map(|(_, n)| n.actions.iter()).collect();
        let unused_actions: Vec<Action> = self.actions().iter().filter(|a| !offered.contains(a)).cloned().collect();

        ValidationReport {
            valid: missing.is_empty() && unexpected.is_empty() && unused_info_sets.is_empty() && unused_actions.is_empty(),
            missing,
            unexpected,
            unused_info_sets,
            unused_actions,
        }
    }
}
