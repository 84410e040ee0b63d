//! Oracles shared by the integration suites. Each is written from the
//! definitions, without going through the library's own search code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num::BigRational;
use spacetime_core::cover::Facet;
use spacetime_core::game::{natural_cover, History, SpacetimeGame};
use spacetime_core::strategy::{glue_strategies, GluingFailure, PureStrategy, SectionFamily};
use spacetime_core::ids::{InfoSetId, PlayerId};
use spacetime_core::scenario::{EventSet, Scenario, ScenarioHistory};

/// A game history is closed when every observer choice it contains has been
/// carried out: each nature set the choice activates is assigned.
pub fn is_closed(g: &SpacetimeGame, h: &History) -> bool {
    let alfred = PlayerId::nature();
    g.nodes().filter(|(t, _)| g.owner(t) != &alfred).all(|(t, _)| {
        let Some(a) = h.get(g.info_set_of(t)) else { return true };
        if !g.node_activated(t, h) {
            return true;
        }
        g.successors(t)
            .iter()
            .filter(|m| g.edge_label(t, m) == Some(a))
            .all(|m| h.get(g.info_set_of(m)).is_some())
    })
}

/// Reads a game history as a scenario history: each activated observer
/// choice becomes (its bridge, the context its action selects).
pub fn as_scenario_history(g: &SpacetimeGame, h: &History) -> ScenarioHistory {
    let alfred = PlayerId::nature();
    let mut choices: BTreeMap<EventSet, Facet> = BTreeMap::new();
    let mut events = EventSet::new();
    for (i, a) in h.iter() {
        if g.info_set_owner(i) == Some(&alfred) {
            events = events.with(i.clone(), a.clone());
        }
    }
    for (t, _) in g.nodes() {
        if g.owner(t) == &alfred || !g.node_activated(t, h) {
            continue;
        }
        let Some(a) = h.get(g.info_set_of(t)) else { continue };
        let side: EventSet = g
            .predecessors(t)
            .iter()
            .map(|m| (g.info_set_of(m).clone(), g.edge_label(m, t).unwrap().clone()))
            .collect();
        let ctx: Facet = g
            .successors(t)
            .iter()
            .filter(|m| g.edge_label(t, m) == Some(a))
            .map(|m| g.info_set_of(m).clone())
            .collect();
        choices.insert(side, ctx);
    }
    ScenarioHistory { choices, events }
}

/// Even cardinality of the domain, read literally.
pub fn even_support(h: &History) -> bool {
    h.len().is_multiple_of(2)
}

pub fn q(s: &str) -> BigRational {
    s.parse().unwrap()
}

pub fn set<I: IntoIterator<Item = &'static str>>(xs: I) -> BTreeSet<InfoSetId> {
    xs.into_iter().map(InfoSetId::from).collect()
}

/// Every total assignment of outcomes to the scenario's measurements.
pub fn assignments(s: &Scenario) -> Vec<EventSet> {
    let mut out = vec![EventSet::new()];
    for (x, os) in s.outcome_table() {
        out = out.into_iter().flat_map(|e| os.iter().map(move |o| e.clone().with(x.clone(), o.clone()))).collect();
    }
    out
}

/// Events of `lambda` that actually occur: least fixpoint of the enabling
/// relation starting from nothing.
pub fn occurring(s: &Scenario, lambda: &EventSet) -> EventSet {
    let mut occ = EventSet::new();
    loop {
        let before = occ.len();
        for (t, x) in s.enabling() {
            if occ.get(x).is_none() && t.is_subset(&occ) {
                occ = occ.with(x.clone(), lambda.get(x).unwrap().clone());
            }
        }
        if occ.len() == before {
            return occ;
        }
    }
}

/// The local section a deterministic assignment shows on a facet.
pub fn shown(s: &Scenario, lambda: &EventSet, facet: &Facet) -> EventSet {
    occurring(s, lambda).iter().filter(|(x, _)| facet.contains(*x)).map(|(x, o)| (x.clone(), o.clone())).collect()
}

/// Every total choice on `sets`, built by repeated extension.
pub fn all_choices(g: &SpacetimeGame, player: &PlayerId, sets: &BTreeSet<InfoSetId>) -> Vec<PureStrategy> {
    let mut out = vec![PureStrategy::new(player.clone())];
    for i in sets {
        out = out
            .into_iter()
            .flat_map(|s| g.actions_at(i).unwrap().iter().map(move |a| s.clone().with(i.clone(), a.clone())))
            .collect();
    }
    out
}

pub fn family_count(g: &SpacetimeGame) -> u128 {
    natural_cover(g)
        .facets()
        .map(|c| c.iter().map(|i| g.actions_at(i).unwrap().len() as u128).product::<u128>())
        .product()
}

/// Every family of nature's local choices over the natural cover, against
/// the families restricted from global choices. Returns how many families
/// glued and how many were rejected with a valid overlap witness.
pub fn check_sheaf(g: &SpacetimeGame) -> Result<(usize, usize), String> {
    if family_count(g) > 1 << 16 {
        return Err("too many families to enumerate".into());
    }
    let alfred = PlayerId::nature();
    let cover = natural_cover(g);
    let mut preimages: BTreeMap<BTreeMap<Facet, PureStrategy>, Vec<PureStrategy>> = BTreeMap::new();
    for s in all_choices(g, &alfred, &cover.vertices()) {
        let fam = SectionFamily::from_strategy(&cover, &s).map_err(|e| e.to_string())?;
        preimages.entry(fam.local).or_default().push(s);
    }
    let (mut glued, mut rejected) = (0, 0);
    for fam in SectionFamily::enumerate_all(&cover, &alfred, g) {
        match (preimages.get(&fam.local), glue_strategies(&fam)) {
            (Some(pre), Ok(s)) if fam.is_compatible() && pre == &vec![s.clone()] => glued += 1,
            (None, Err(GluingFailure::Disagreement { left, right, overlap, at }))
                if !fam.is_compatible()
                    && overlap.contains(&at)
                    && left.contains(&at)
                    && right.contains(&at)
                    && fam.local[&left].get(&at) != fam.local[&right].get(&at) =>
            {
                rejected += 1
            }
            (pre, got) => return Err(format!("family {:?}: preimages {pre:?}, glue {got:?}", fam.local)),
        }
    }
    Ok((glued, rejected))
}
