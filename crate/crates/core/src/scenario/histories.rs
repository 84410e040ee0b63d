use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{EventSet, Scenario};
use crate::cover::{render_facet, Facet};

/// A history of a scenario: the contexts chosen at the enabling sets that
/// occurred, and the events obtained.
///
/// A context is chosen at `t` only if every event of `t` occurred; every
/// event belongs to a measurement of some chosen context; and every
/// measurement of a chosen context has an event.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScenarioHistory {
    pub choices: BTreeMap<EventSet, Facet>,
    pub events: EventSet,
}

impl fmt::Debug for ScenarioHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let choices: Vec<String> = self.choices.iter().map(|(t, c)| format!("{t}->{}", render_facet(c))).collect();
        write!(f, "[{}] {}", choices.join(" "), self.events)
    }
}

/// Histories of a scenario. `complete` additionally requires a context to
/// be chosen at every enabling set that occurred (and admits one).
pub fn enumerate_scenario_histories(scenario: &Scenario, complete: bool) -> Vec<ScenarioHistory> {
    let mut sides: Vec<&EventSet> = scenario.enabling_sides().into_iter().collect();
    sides.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let restrictions: Vec<Vec<Facet>> = sides
        .iter()
        .map(|t| scenario.local_cover_restriction(t).facets().cloned().collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut state = State { choices: BTreeMap::new(), declined: BTreeSet::new(), events: EventSet::new() };
    explore(scenario, &sides, &restrictions, complete, &mut state, &mut out);
    out.into_iter().collect()
}

struct State {
    choices: BTreeMap<EventSet, Facet>,
    declined: BTreeSet<usize>,
    events: EventSet,
}

fn explore(
    scenario: &Scenario,
    sides: &[&EventSet],
    restrictions: &[Vec<Facet>],
    complete: bool,
    st: &mut State,
    out: &mut BTreeSet<ScenarioHistory>,
) {
    let next = sides.iter().enumerate().find(|(k, t)| {
        !st.declined.contains(k) && !st.choices.contains_key(**t) && t.is_subset(&st.events) && !restrictions[*k].is_empty()
    });
    let Some((k, t)) = next else {
        out.insert(ScenarioHistory { choices: st.choices.clone(), events: st.events.clone() });
        return;
    };
    if !complete {
        st.declined.insert(k);
        explore(scenario, sides, restrictions, complete, st, out);
        st.declined.remove(&k);
    }
    for c in &restrictions[k] {
        st.choices.insert((*t).clone(), c.clone());
        let fresh: Vec<_> = c.iter().filter(|x| st.events.get(x).is_none()).cloned().collect();
        assign(scenario, sides, restrictions, complete, st, out, &fresh, 0);
        st.choices.remove(*t);
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    scenario: &Scenario,
    sides: &[&EventSet],
    restrictions: &[Vec<Facet>],
    complete: bool,
    st: &mut State,
    out: &mut BTreeSet<ScenarioHistory>,
    fresh: &[crate::ids::Measurement],
    k: usize,
) {
    let Some(x) = fresh.get(k) else {
        explore(scenario, sides, restrictions, complete, st, out);
        return;
    };
    for o in scenario.outcomes_of(x).expect("known measurement") {
        let saved = st.events.clone();
        st.events = st.events.clone().with(x.clone(), o.clone());
        assign(scenario, sides, restrictions, complete, st, out, fresh, k + 1);
        st.events = saved;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioSpec;

    #[test]
    fn single_measurement_histories() {
        let s = ScenarioSpec::new().measurement("x", ["0", "1"]).enable(&[], "x").facet(&["x"]).build().unwrap();
        assert_eq!(enumerate_scenario_histories(&s, true).len(), 2);
        // The empty history plus the two complete ones.
        assert_eq!(enumerate_scenario_histories(&s, false).len(), 3);
    }
}
