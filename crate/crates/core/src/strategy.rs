//! Pure strategies, the Kuhn strategic form and its reduction, and the
//! presheaf of nature's strategies with restriction and gluing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cover::{render_facet, Cover, Facet};
use crate::game::{History, SpacetimeGame};
use crate::ids::{Action, InfoSetId, PlayerId};
use crate::par::{decode, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("restriction domain is not contained in the strategy's domain: {0} is missing")]
    DomainNotContained(InfoSetId),
    #[error("profile has no strategy for {0}")]
    MissingPlayer(PlayerId),
    #[error("strategy for {player} chooses {action} at {info_set}, which is not available there")]
    InvalidChoice { player: PlayerId, info_set: InfoSetId, action: Action },
}

/// A (possibly partial) choice function for one player. Pure strategies are
/// the total ones; restrictions produce partial ones with the same type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PureStrategy {
    pub player: PlayerId,
    pub choice: BTreeMap<InfoSetId, Action>,
}

impl PureStrategy {
    pub fn new(player: impl Into<PlayerId>) -> Self {
        PureStrategy { player: player.into(), choice: BTreeMap::new() }
    }

    pub fn with(mut self, i: impl Into<InfoSetId>, a: impl Into<Action>) -> Self {
        self.choice.insert(i.into(), a.into());
        self
    }

    pub fn domain(&self) -> BTreeSet<InfoSetId> {
        self.choice.keys().cloned().collect()
    }

    pub fn get(&self, i: &InfoSetId) -> Option<&Action> {
        self.choice.get(i)
    }

    /// Total on the player's information sets with available actions.
    pub fn is_total_for(&self, game: &SpacetimeGame) -> bool {
        let sets = game.info_sets_of(&self.player);
        sets.len() == self.choice.len()
            && sets.iter().all(|i| self.choice.get(i).is_some_and(|a| game.actions_at(i).is_some_and(|s| s.contains(a))))
    }
}

impl fmt::Display for PureStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.choice.iter().map(|(i, a)| format!("{i}={a}")).collect();
        write!(f, "{}[{}]", self.player, parts.join(" "))
    }
}

/// All pure strategies of `p`, ordered lexicographically along the canonical
/// information-set order (the last set varies fastest).
pub fn enumerate_pure_strategies(game: &SpacetimeGame, p: &PlayerId) -> Result<Vec<PureStrategy>, StrategyError> {
    if !game.players().contains(p) {
        return Err(StrategyError::UnknownPlayer(p.clone()));
    }
    let sets = game.info_sets_of(p);
    let options: Vec<Vec<Action>> =
        sets.iter().map(|i| game.actions_at(i).expect("known").iter().cloned().collect()).collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    let count: usize = radices.iter().product();
    Ok((0..count)
        .map(|k| {
            let digits = decode(k, &radices);
            PureStrategy {
                player: p.clone(),
                choice: sets.iter().zip(&digits).zip(&options).map(|((i, d), opts)| (i.clone(), opts[*d].clone())).collect(),
            }
        })
        .collect())
}

/// The unique complete history in which every activated information set
/// takes the action its owner's strategy prescribes. Computed as the least
/// fixpoint of "assign every activated, unassigned set".
pub fn play(game: &SpacetimeGame, profile: &[PureStrategy]) -> Result<History, StrategyError> {
    let mut joint: BTreeMap<&InfoSetId, &Action> = BTreeMap::new();
    for s in profile {
        joint.extend(s.choice.iter());
    }
    play_joint(game, &joint)
}

fn play_joint(game: &SpacetimeGame, joint: &BTreeMap<&InfoSetId, &Action>) -> Result<History, StrategyError> {
    let mut h = History::new();
    loop {
        let mut changed = false;
        for n in game.node_order() {
            let i = game.info_set_of(n);
            if h.get(i).is_some() || !game.node_activated(n, &h) {
                continue;
            }
            let Some(a) = joint.get(i) else {
                return Err(StrategyError::MissingPlayer(game.owner(n).clone()));
            };
            if !game.actions_at(i).is_some_and(|s| s.contains(*a)) {
                return Err(StrategyError::InvalidChoice {
                    player: game.owner(n).clone(),
                    info_set: i.clone(),
                    action: (*a).clone(),
                });
            }
            h.insert(i.clone(), (*a).clone());
            changed = true;
        }
        if !changed {
            return Ok(h);
        }
    }
}

/// Kuhn's strategic form: every player's strategies and, for each profile
/// (row-major over `players`), the induced complete history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategicForm {
    pub players: Vec<PlayerId>,
    pub strategies: Vec<Vec<PureStrategy>>,
    pub table: Vec<History>,
}

impl StrategicForm {
    pub fn radices(&self) -> Vec<usize> {
        self.strategies.iter().map(Vec::len).collect()
    }

    pub fn profile_count(&self) -> usize {
        self.table.len()
    }

    pub fn cell(&self, indices: &[usize]) -> &History {
        let mut k = 0;
        for (d, r) in indices.iter().zip(self.radices()) {
            k = k * r + d;
        }
        &self.table[k]
    }

    pub fn player_index(&self, p: &PlayerId) -> Option<usize> {
        self.players.iter().position(|q| q == p)
    }

    pub fn distinct_outcomes(&self) -> BTreeSet<&History> {
        self.table.iter().collect()
    }

    /// The row of a player's strategy: the histories against every opponent
    /// profile, opponents in row-major order.
    pub fn row(&self, player: usize, strategy: usize) -> Vec<&History> {
        let radices = self.radices();
        let opp: Vec<usize> = radices.iter().enumerate().filter(|(k, _)| *k != player).map(|(_, r)| *r).collect();
        let total: usize = opp.iter().product();
        (0..total)
            .map(|j| {
                let mut digits = decode(j, &opp);
                digits.insert(player, strategy);
                self.cell(&digits)
            })
            .collect()
    }
}

pub fn strategic_form(game: &SpacetimeGame) -> StrategicForm {
    strategic_form_with(game, Exec::default())
}

/// [`strategic_form`] with an explicit execution mode.
pub fn strategic_form_with(game: &SpacetimeGame, exec: Exec) -> StrategicForm {
    let players: Vec<PlayerId> = game.players().into_iter().collect();
    let strategies: Vec<Vec<PureStrategy>> =
        players.iter().map(|p| enumerate_pure_strategies(game, p).expect("player of the game")).collect();
    let radices: Vec<usize> = strategies.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let table = exec.map_range(total, |k| {
        let digits = decode(k, &radices);
        let mut joint: BTreeMap<&InfoSetId, &Action> = BTreeMap::new();
        for (p, d) in digits.iter().enumerate() {
            joint.extend(strategies[p][*d].choice.iter());
        }
        play_joint(game, &joint).expect("profiles of valid strategies always play out")
    });
    StrategicForm { players, strategies, table }
}

/// Strategies of one player inducing identical rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyClass {
    /// Indices into the player's strategy list.
    pub members: Vec<usize>,
    /// Information sets of the player activated in some row cell; every
    /// member agrees on them.
    pub determined: BTreeSet<InfoSetId>,
    /// Determined sets with a node downstream of another node of the same
    /// player: choices made conditionally on the player's own earlier moves.
    pub conditional: BTreeSet<InfoSetId>,
    /// The common choices on `determined`.
    pub representative: PureStrategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedStrategicForm {
    pub form: StrategicForm,
    /// Per player (same order as `form.players`), its classes in order of
    /// first member.
    pub classes: Vec<Vec<StrategyClass>>,
}

impl ReducedStrategicForm {
    pub fn classes_of(&self, p: &PlayerId) -> Option<&[StrategyClass]> {
        self.form.player_index(p).map(|k| self.classes[k].as_slice())
    }
}

pub fn reduced_strategic_form(game: &SpacetimeGame) -> ReducedStrategicForm {
    reduced_strategic_form_with(game, Exec::default())
}

pub fn reduced_strategic_form_with(game: &SpacetimeGame, exec: Exec) -> ReducedStrategicForm {
    let form = strategic_form_with(game, exec);
    let mut classes = Vec::new();
    for (k, p) in form.players.iter().enumerate() {
        let own: BTreeSet<InfoSetId> = game.info_sets_of(p).into_iter().collect();
        let rows: Vec<Vec<&History>> = exec.map_range(form.strategies[k].len(), |s| form.row(k, s));
        let mut by_row: BTreeMap<&Vec<&History>, Vec<usize>> = BTreeMap::new();
        for (s, row) in rows.iter().enumerate() {
            by_row.entry(row).or_default().push(s);
        }
        let mut list: Vec<StrategyClass> = by_row
            .into_iter()
            .map(|(row, members)| {
                let determined: BTreeSet<InfoSetId> =
                    row.iter().flat_map(|h| h.support().cloned()).filter(|i| own.contains(i)).collect();
                let conditional = determined
                    .iter()
                    .filter(|i| game.info_set_nodes(i).expect("known").iter().any(|n| has_own_ancestor(game, n)))
                    .cloned()
                    .collect();
                let first = &form.strategies[k][members[0]];
                let representative = PureStrategy {
                    player: p.clone(),
                    choice: determined.iter().map(|i| (i.clone(), first.choice[i].clone())).collect(),
                };
                StrategyClass { members, determined, conditional, representative }
            })
            .collect();
        list.sort_by_key(|c| c.members[0]);
        classes.push(list);
    }
    ReducedStrategicForm { form, classes }
}

fn has_own_ancestor(game: &SpacetimeGame, n: &crate::ids::NodeId) -> bool {
    let owner = game.owner(n);
    let mut stack: Vec<&crate::ids::NodeId> = game.predecessors(n).iter().collect();
    let mut seen = BTreeSet::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m) {
            continue;
        }
        if game.owner(m) == owner {
            return true;
        }
        stack.extend(game.predecessors(m));
    }
    false
}

/// Set-theoretic restriction of a (partial) strategy.
pub fn restrict_strategy(s: &PureStrategy, domain: &BTreeSet<InfoSetId>) -> Result<PureStrategy, StrategyError> {
    let mut choice = BTreeMap::new();
    for i in domain {
        let a = s.choice.get(i).ok_or_else(|| StrategyError::DomainNotContained(i.clone()))?;
        choice.insert(i.clone(), a.clone());
    }
    Ok(PureStrategy { player: s.player.clone(), choice })
}

/// Local sections of nature's strategy presheaf indexed by a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionFamily {
    pub cover: Cover,
    pub local: BTreeMap<Facet, PureStrategy>,
}

impl SectionFamily {
    /// The family of restrictions of one strategy.
    pub fn from_strategy(cover: &Cover, s: &PureStrategy) -> Result<Self, StrategyError> {
        let local = cover
            .facets()
            .map(|c| Ok((c.clone(), restrict_strategy(s, c)?)))
            .collect::<Result<_, StrategyError>>()?;
        Ok(SectionFamily { cover: cover.clone(), local })
    }

    /// Every family of total local choices over the cover, with actions from
    /// `actions_at`. Exhaustive; meant for small covers.
    pub fn enumerate_all(cover: &Cover, player: &PlayerId, game: &SpacetimeGame) -> Vec<SectionFamily> {
        let per_facet: Vec<(Facet, Vec<PureStrategy>)> = cover
            .facets()
            .map(|c| {
                let sets: Vec<&InfoSetId> = c.iter().collect();
                let opts: Vec<Vec<&Action>> =
                    sets.iter().map(|i| game.actions_at(i).map(|s| s.iter().collect()).unwrap_or_default()).collect();
                let radices: Vec<usize> = opts.iter().map(Vec::len).collect();
                let n: usize = radices.iter().product();
                let locals = (0..n)
                    .map(|k| PureStrategy {
                        player: player.clone(),
                        choice: decode(k, &radices)
                            .into_iter()
                            .enumerate()
                            .map(|(j, d)| (sets[j].clone(), opts[j][d].clone()))
                            .collect(),
                    })
                    .collect();
                (c.clone(), locals)
            })
            .collect();
        let radices: Vec<usize> = per_facet.iter().map(|(_, l)| l.len()).collect();
        let total: usize = radices.iter().product();
        (0..total)
            .map(|k| SectionFamily {
                cover: cover.clone(),
                local: decode(k, &radices)
                    .into_iter()
                    .zip(&per_facet)
                    .map(|(d, (c, l))| (c.clone(), l[d].clone()))
                    .collect(),
            })
            .collect()
    }

    /// Pairwise agreement on facet intersections.
    pub fn is_compatible(&self) -> bool {
        first_disagreement(self).is_none()
    }
}

/// Why a family does not glue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GluingFailure {
    /// Two local sections disagree on their overlap.
    Disagreement { left: Facet, right: Facet, overlap: Facet, at: InfoSetId },
    /// A local section's domain is not its facet, or a facet has no section.
    DomainMismatch { facet: Facet },
}

impl fmt::Display for GluingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingFailure::Disagreement { left, right, overlap, at } => write!(
                f,
                "sections on {} and {} disagree at {at} (overlap {})",
                render_facet(left),
                render_facet(right),
                render_facet(overlap)
            ),
            GluingFailure::DomainMismatch { facet } => write!(f, "no section with domain {}", render_facet(facet)),
        }
    }
}

fn first_disagreement(family: &SectionFamily) -> Option<GluingFailure> {
    let facets: Vec<&Facet> = family.cover.facets().collect();
    for (a, ca) in facets.iter().enumerate() {
        for cb in &facets[a + 1..] {
            let (sa, sb) = (family.local.get(*ca)?, family.local.get(*cb)?);
            let overlap: Facet = ca.intersection(cb).cloned().collect();
            if let Some(at) = overlap.iter().find(|i| sa.choice.get(*i) != sb.choice.get(*i)) {
                return Some(GluingFailure::Disagreement {
                    left: (*ca).clone(),
                    right: (*cb).clone(),
                    overlap: overlap.clone(),
                    at: at.clone(),
                });
            }
        }
    }
    None
}

/// Glues a compatible family into the unique strategy on the cover's
/// vertices restricting to every local section.
pub fn glue_strategies(family: &SectionFamily) -> Result<PureStrategy, GluingFailure> {
    for c in family.cover.facets() {
        match family.local.get(c) {
            Some(s) if s.domain() == *c => {}
            _ => return Err(GluingFailure::DomainMismatch { facet: c.clone() }),
        }
    }
    if family.local.len() != family.cover.len() {
        let stray = family.local.keys().find(|c| !family.cover.contains_facet(c)).cloned().unwrap_or_default();
        return Err(GluingFailure::DomainMismatch { facet: stray });
    }
    if let Some(w) = first_disagreement(family) {
        return Err(w);
    }
    let player = family.local.values().next().map(|s| s.player.clone()).unwrap_or_else(PlayerId::nature);
    let mut glued = PureStrategy::new(player);
    for s in family.local.values() {
        glued.choice.extend(s.choice.iter().map(|(i, a)| (i.clone(), a.clone())));
    }
    for (c, s) in &family.local {
        debug_assert_eq!(restrict_strategy(&glued, c).as_ref(), Ok(s), "glued strategy restricts to each section");
    }
    Ok(glued)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn minimal_play() {
        let g = corpus::minimal_game();
        let profile = [PureStrategy::new("Bob").with("B", "{x}"), PureStrategy::new("Alfred").with("x", "0")];
        assert_eq!(play(&g, &profile).unwrap(), History::new().with("B", "{x}").with("x", "0"));
        assert_eq!(strategic_form(&g).table.len(), 2);
    }

    #[test]
    fn adaptive_play_skips_inactive_observer() {
        let g = corpus::adaptive_game();
        let alfred = PureStrategy::new("Alfred").with("X", "0").with("Y", "0").with("W", "1").with("Z", "1");
        let bob = PureStrategy::new("Bob").with("A", "{X}").with("B", "{W}");
        let h = play(&g, &[bob, alfred]).unwrap();
        assert_eq!(h, History::new().with("A", "{X}").with("X", "0"));
    }

    #[test]
    fn restriction_is_functorial() {
        let s = PureStrategy::new("Alfred").with("X", "0").with("Y", "1").with("Z", "0");
        let d1: BTreeSet<InfoSetId> = ["X".into(), "Y".into()].into();
        let d2: BTreeSet<InfoSetId> = ["X".into()].into();
        let twice = restrict_strategy(&restrict_strategy(&s, &d1).unwrap(), &d2).unwrap();
        assert_eq!(twice, restrict_strategy(&s, &d2).unwrap());
        assert_eq!(restrict_strategy(&s, &s.domain()).unwrap(), s);
        assert!(restrict_strategy(&s, &BTreeSet::new()).unwrap().choice.is_empty());
        assert_eq!(restrict_strategy(&s, &["Q".into()].into()), Err(StrategyError::DomainNotContained("Q".into())));
    }
}
