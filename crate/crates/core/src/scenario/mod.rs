//! Causal contextuality scenarios: measurements with outcome sets, an
//! enabling relation and a cover of contexts.

mod histories;

pub use histories::{enumerate_scenario_histories, ScenarioHistory};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cover::{render_facet, Cover, CoverError, Facet};
use crate::ids::{is_valid_token, Measurement, Outcome};

/// A consistent set of events: a partial map from measurements to outcomes.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventSet(BTreeMap<Measurement, Outcome>);

impl EventSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an event set, rejecting two different outcomes for one
    /// measurement.
    pub fn from_events<I>(events: I) -> Result<Self, ScenarioError>
    where
        I: IntoIterator<Item = (Measurement, Outcome)>,
    {
        let mut m = BTreeMap::new();
        for (x, o) in events {
            if let Some(prev) = m.insert(x.clone(), o.clone()) {
                if prev != o {
                    return Err(ScenarioError::InconsistentEvents { measurement: x, first: prev, second: o });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn with(mut self, x: impl Into<Measurement>, o: impl Into<Outcome>) -> Self {
        self.0.insert(x.into(), o.into());
        self
    }

    pub fn get(&self, x: &Measurement) -> Option<&Outcome> {
        self.0.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Measurement, &Outcome)> {
        self.0.iter()
    }

    pub fn support(&self) -> BTreeSet<Measurement> {
        self.0.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every event of `self` also occurs in `other`.
    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.0.iter().all(|(x, o)| other.0.get(x) == Some(o))
    }

    pub fn consistent_with(&self, other: &EventSet) -> bool {
        self.0.iter().all(|(x, o)| other.0.get(x).is_none_or(|p| p == o))
    }

    /// Union of two event sets, or the first conflicting measurement.
    pub fn union(&self, other: &EventSet) -> Result<EventSet, Measurement> {
        let mut m = self.0.clone();
        for (x, o) in &other.0 {
            if let Some(prev) = m.insert(x.clone(), o.clone()) {
                if &prev != o {
                    return Err(x.clone());
                }
            }
        }
        Ok(EventSet(m))
    }

    pub fn as_map(&self) -> &BTreeMap<Measurement, Outcome> {
        &self.0
    }
}

impl FromIterator<(Measurement, Outcome)> for EventSet {
    /// Later events win; use [`EventSet::from_events`] to detect conflicts.
    fn from_iter<T: IntoIterator<Item = (Measurement, Outcome)>>(iter: T) -> Self {
        EventSet(iter.into_iter().collect())
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(x, o)| format!("{x}:{o}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for EventSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("identifier {0:?} is empty or contains whitespace, '=' or a leading '#'")]
    InvalidIdentifier(String),
    #[error("measurement {0} is declared twice")]
    DuplicateMeasurement(Measurement),
    #[error("measurement {0} has no outcomes")]
    EmptyOutcomeSet(Measurement),
    #[error("unknown measurement {0}")]
    UnknownMeasurement(Measurement),
    #[error("outcome {outcome} is not available for measurement {measurement}")]
    OutcomeNotAvailable { measurement: Measurement, outcome: Outcome },
    #[error("events assign both {first} and {second} to {measurement}")]
    InconsistentEvents { measurement: Measurement, first: Outcome, second: Outcome },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("measurement {0} has several causal bridges")]
    NonUniqueBridge(Measurement),
    #[error("measurement {0} is never enabled")]
    NoBridge(Measurement),
    #[error("ancestry of {measurement} is inconsistent at {conflict}; the measurement is unused")]
    InconsistentAncestry { measurement: Measurement, conflict: Measurement },
    #[error("enabling relation has a cycle through {0}")]
    CycleDetected(Measurement),
}

/// Raw scenario description consumed by [`Scenario::build`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub outcomes: Vec<(Measurement, Vec<Outcome>)>,
    /// Left-hand side events and the enabled measurement.
    pub enabling: Vec<(Vec<(Measurement, Outcome)>, Measurement)>,
    pub cover: Vec<Vec<Measurement>>,
}

impl ScenarioSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn measurement<I, O>(mut self, x: &str, outcomes: I) -> Self
    where
        I: IntoIterator<Item = O>,
        O: Into<Outcome>,
    {
        self.outcomes.push((x.into(), outcomes.into_iter().map(Into::into).collect()));
        self
    }

    /// `events` are `(measurement, outcome)` pairs.
    pub fn enable(mut self, events: &[(&str, &str)], x: &str) -> Self {
        self.enabling.push((events.iter().map(|(a, b)| ((*a).into(), (*b).into())).collect(), x.into()));
        self
    }

    pub fn facet(mut self, members: &[&str]) -> Self {
        self.cover.push(members.iter().map(|m| (*m).into()).collect());
        self
    }

    pub fn build(self) -> Result<Scenario, ScenarioError> {
        Scenario::build(self)
    }
}

/// A causal contextuality scenario (X, O, ⊢, 𝒞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    outcomes: BTreeMap<Measurement, BTreeSet<Outcome>>,
    enabling: BTreeSet<(EventSet, Measurement)>,
    cover: Cover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub unique: bool,
    /// Measurements with several bridges, with those bridges.
    pub witnesses: Vec<(Measurement, Vec<EventSet>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SecurityCriterion {
    Propagation,
    Consistency,
    Maximality,
}

impl fmt::Display for SecurityCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Propagation => "propagation",
            Self::Consistency => "consistency",
            Self::Maximality => "maximality",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecurityViolation {
    pub criterion: SecurityCriterion,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecurityReport {
    pub passed: bool,
    pub violations: Vec<SecurityViolation>,
}

impl SecurityReport {
    pub fn failed_criteria(&self) -> BTreeSet<SecurityCriterion> {
        self.violations.iter().map(|v| v.criterion).collect()
    }
}

fn check_token(s: &str) -> Result<(), ScenarioError> {
    if is_valid_token(s) {
        Ok(())
    } else {
        Err(ScenarioError::InvalidIdentifier(s.to_owned()))
    }
}

impl Scenario {
    pub fn build(spec: ScenarioSpec) -> Result<Self, ScenarioError> {
        let mut outcomes = BTreeMap::new();
        for (x, os) in spec.outcomes {
            check_token(x.as_str())?;
            for o in &os {
                check_token(o.as_str())?;
            }
            if os.is_empty() {
                return Err(ScenarioError::EmptyOutcomeSet(x));
            }
            if outcomes.insert(x.clone(), os.into_iter().collect::<BTreeSet<_>>()).is_some() {
                return Err(ScenarioError::DuplicateMeasurement(x));
            }
        }
        let mut enabling = BTreeSet::new();
        for (events, x) in spec.enabling {
            if !outcomes.contains_key(&x) {
                return Err(ScenarioError::UnknownMeasurement(x));
            }
            for (y, o) in &events {
                let os = outcomes.get(y).ok_or_else(|| ScenarioError::UnknownMeasurement(y.clone()))?;
                if !os.contains(o) {
                    return Err(ScenarioError::OutcomeNotAvailable { measurement: y.clone(), outcome: o.clone() });
                }
            }
            enabling.insert((EventSet::from_events(events)?, x));
        }
        let mut facets = Vec::new();
        for f in spec.cover {
            let f: Facet = f.into_iter().collect();
            if let Some(x) = f.iter().find(|x| !outcomes.contains_key(*x)) {
                return Err(ScenarioError::UnknownMeasurement(x.clone()));
            }
            facets.push(f);
        }
        let cover = Cover::new(facets)?;
        Ok(Scenario { outcomes, enabling, cover })
    }

    /// Assembles a scenario from already-validated parts.
    pub(crate) fn from_parts(
        outcomes: BTreeMap<Measurement, BTreeSet<Outcome>>,
        enabling: BTreeSet<(EventSet, Measurement)>,
        cover: Cover,
    ) -> Self {
        Scenario { outcomes, enabling, cover }
    }

    pub fn measurements(&self) -> impl Iterator<Item = &Measurement> {
        self.outcomes.keys()
    }

    pub fn measurement_set(&self) -> BTreeSet<Measurement> {
        self.outcomes.keys().cloned().collect()
    }

    pub fn outcomes_of(&self, x: &Measurement) -> Option<&BTreeSet<Outcome>> {
        self.outcomes.get(x)
    }

    pub fn outcome_table(&self) -> &BTreeMap<Measurement, BTreeSet<Outcome>> {
        &self.outcomes
    }

    pub fn enabling(&self) -> &BTreeSet<(EventSet, Measurement)> {
        &self.enabling
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    /// Distinct left-hand sides of the enabling relation.
    pub fn enabling_sides(&self) -> BTreeSet<&EventSet> {
        self.enabling.iter().map(|(t, _)| t).collect()
    }

    /// enabled(t) = {x | t ⊢ x}.
    pub fn enabled(&self, t: &EventSet) -> BTreeSet<Measurement> {
        self.enabling.iter().filter(|(u, _)| u == t).map(|(_, x)| x.clone()).collect()
    }

    pub fn bridges(&self, x: &Measurement) -> Vec<&EventSet> {
        self.enabling.iter().filter(|(_, y)| y == x).map(|(t, _)| t).collect()
    }

    /// τ(x), the unique enabling left-hand side of `x`.
    pub fn tau(&self, x: &Measurement) -> Result<&EventSet, ScenarioError> {
        match self.bridges(x).as_slice() {
            [] => Err(ScenarioError::NoBridge(x.clone())),
            [t] => Ok(t),
            _ => Err(ScenarioError::NonUniqueBridge(x.clone())),
        }
    }

    /// τ̄(x): the union of the bridges of `x` and of all measurements they
    /// mention, transitively.
    pub fn tau_bar(&self, x: &Measurement) -> Result<EventSet, ScenarioError> {
        let mut on_path = BTreeSet::new();
        let mut memo = BTreeMap::new();
        self.tau_bar_rec(x, x, &mut on_path, &mut memo)
    }

    fn tau_bar_rec(
        &self,
        root: &Measurement,
        x: &Measurement,
        on_path: &mut BTreeSet<Measurement>,
        memo: &mut BTreeMap<Measurement, EventSet>,
    ) -> Result<EventSet, ScenarioError> {
        if let Some(done) = memo.get(x) {
            return Ok(done.clone());
        }
        if !on_path.insert(x.clone()) {
            return Err(ScenarioError::CycleDetected(x.clone()));
        }
        let t = self.tau(x)?.clone();
        let mut acc = t.clone();
        for y in t.support() {
            let up = self.tau_bar_rec(root, &y, on_path, memo)?;
            acc = acc
                .union(&up)
                .map_err(|conflict| ScenarioError::InconsistentAncestry { measurement: root.clone(), conflict })?;
        }
        on_path.remove(x);
        memo.insert(x.clone(), acc.clone());
        Ok(acc)
    }

    /// Facets of the cover restricted to enabled(t).
    pub fn local_cover_restriction(&self, t: &EventSet) -> Cover {
        self.cover.restrict(&self.enabled(t))
    }

    /// {C ∩ enabled(t)} without the empty set and without eliminating
    /// non-maximal faces. Agrees with [`Self::local_cover_restriction`] on
    /// causally-secured covers.
    pub fn local_cover_restriction_unreduced(&self, t: &EventSet) -> BTreeSet<Facet> {
        let en = self.enabled(t);
        self.cover
            .facets()
            .map(|c| c.intersection(&en).cloned().collect::<Facet>())
            .filter(|c| !c.is_empty())
            .collect()
    }

    pub fn check_unique_causal_bridges(&self) -> BridgeReport {
        let mut witnesses = Vec::new();
        for x in self.outcomes.keys() {
            let b = self.bridges(x);
            if b.len() > 1 {
                witnesses.push((x.clone(), b.into_iter().cloned().collect()));
            }
        }
        BridgeReport { unique: witnesses.is_empty(), witnesses }
    }

    /// The dependency graph (y → x whenever y is in the support of a bridge
    /// of x) has no directed cycle.
    pub fn check_acyclic(&self) -> bool {
        self.dependency_cycle().is_none()
    }

    /// A measurement on a dependency cycle, if any.
    pub fn dependency_cycle(&self) -> Option<Measurement> {
        let mut deps: BTreeMap<&Measurement, BTreeSet<&Measurement>> =
            self.outcomes.keys().map(|x| (x, BTreeSet::new())).collect();
        for (t, x) in &self.enabling {
            for y in t.as_map().keys() {
                deps.get_mut(x).expect("known measurement").insert(y);
            }
        }
        let mut done: BTreeSet<&Measurement> = BTreeSet::new();
        loop {
            let ready: Vec<&Measurement> =
                deps.iter().filter(|(x, d)| !done.contains(*x) && d.iter().all(|y| done.contains(y))).map(|(x, _)| *x).collect();
            if ready.is_empty() {
                break;
            }
            done.extend(ready);
        }
        deps.keys().find(|x| !done.contains(*x)).map(|x| (*x).clone())
    }

    /// Measurements in an order where every bridge's support precedes the
    /// measurement. `None` on cyclic scenarios.
    pub fn causal_order(&self) -> Option<Vec<Measurement>> {
        let mut order: Vec<Measurement> = Vec::new();
        let mut placed: BTreeSet<&Measurement> = BTreeSet::new();
        while placed.len() < self.outcomes.len() {
            let next = self.outcomes.keys().find(|x| {
                !placed.contains(x)
                    && self.bridges(x).iter().all(|t| t.as_map().keys().all(|y| placed.contains(y)))
            })?;
            placed.insert(next);
            order.push(next.clone());
        }
        Some(order)
    }

    /// Every measurement has a consistent τ̄.
    pub fn is_clean(&self) -> bool {
        self.outcomes.keys().all(|x| self.tau_bar(x).is_ok())
    }

    /// Acyclic with unique bridges and every τ̄ consistent.
    pub fn in_category_scope(&self) -> bool {
        self.check_acyclic() && self.check_unique_causal_bridges().unique && self.is_clean()
    }

    /// Checks the three causal-security criteria. Criterion 1 reads: every
    /// facet containing x contains support(τ(x)). Maximality compares the
    /// cover with the natural cover of the associated game.
    pub fn check_causally_secured(&self) -> Result<SecurityReport, ScenarioError> {
        if let Some(x) = self.dependency_cycle() {
            return Err(ScenarioError::CycleDetected(x));
        }
        if let Some((x, _)) = self.check_unique_causal_bridges().witnesses.first() {
            return Err(ScenarioError::NonUniqueBridge(x.clone()));
        }
        let mut violations = Vec::new();
        for c in self.cover.facets() {
            for x in c {
                let t = self.tau(x)?;
                let missing: Vec<&Measurement> = t.as_map().keys().filter(|y| !c.contains(*y)).collect();
                if !missing.is_empty() {
                    let names: Vec<&str> = missing.iter().map(|m| m.as_str()).collect();
                    violations.push(SecurityViolation {
                        criterion: SecurityCriterion::Propagation,
                        witness: format!("facet {} contains {x} but not {}", render_facet(c), names.join(",")),
                    });
                }
            }
        }
        let mut closures = BTreeMap::new();
        for x in self.outcomes.keys() {
            closures.insert(x, self.tau_bar(x)?);
        }
        for c in self.cover.facets() {
            let members: Vec<&Measurement> = c.iter().collect();
            for (k, x) in members.iter().enumerate() {
                for y in &members[k + 1..] {
                    if !closures[x].consistent_with(&closures[y]) {
                        violations.push(SecurityViolation {
                            criterion: SecurityCriterion::Consistency,
                            witness: format!("facet {} holds {x} and {y} with inconsistent ancestry", render_facet(c)),
                        });
                    }
                }
            }
        }
        match crate::categories::game_of_scenario_unchecked(self) {
            Ok(g) => {
                let natural = crate::game::natural_cover(&g);
                if natural != self.cover {
                    violations.push(SecurityViolation {
                        criterion: SecurityCriterion::Maximality,
                        witness: format!("cover {} differs from the maximal cover {}", self.cover, natural),
                    });
                }
            }
            Err(e) => violations.push(SecurityViolation {
                criterion: SecurityCriterion::Maximality,
                witness: format!("associated game cannot be built: {e}"),
            }),
        }
        Ok(SecurityReport { passed: violations.is_empty(), violations })
    }

    /// Removes measurements whose τ̄ is inconsistent or undefined, together
    /// with enabling relations mentioning them, repeating until stable.
    /// Facets are intersected with the survivors.
    pub fn prune_unused_settings(&self) -> Scenario {
        let mut current = self.clone();
        loop {
            let dead: BTreeSet<Measurement> = current
                .outcomes
                .keys()
                .filter(|x| matches!(current.tau_bar(x), Err(ScenarioError::InconsistentAncestry { .. } | ScenarioError::NoBridge(_))))
                .cloned()
                .collect();
            if dead.is_empty() {
                return current;
            }
            let outcomes: BTreeMap<_, _> =
                current.outcomes.iter().filter(|(x, _)| !dead.contains(*x)).map(|(k, v)| (k.clone(), v.clone())).collect();
            let enabling = current
                .enabling
                .iter()
                .filter(|(t, x)| !dead.contains(x) && t.as_map().keys().all(|y| !dead.contains(y)))
                .cloned()
                .collect();
            let alive: BTreeSet<Measurement> = outcomes.keys().cloned().collect();
            let cover = current.cover.restrict(&alive);
            current = Scenario { outcomes, enabling, cover };
        }
    }

    pub fn to_spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            outcomes: self.outcomes.iter().map(|(x, os)| (x.clone(), os.iter().cloned().collect())).collect(),
            enabling: self
                .enabling
                .iter()
                .map(|(t, x)| (t.iter().map(|(a, b)| (a.clone(), b.clone())).collect(), x.clone()))
                .collect(),
            cover: self.cover.facets().map(|f| f.iter().cloned().collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::facet;

    fn adaptive() -> Scenario {
        ScenarioSpec::new()
            .measurement("X", ["0", "1"])
            .measurement("Y", ["0", "1"])
            .measurement("W", ["0", "1"])
            .measurement("Z", ["0", "1"])
            .enable(&[], "X")
            .enable(&[], "Y")
            .enable(&[("Y", "0")], "W")
            .enable(&[("Y", "0")], "Z")
            .facet(&["X"])
            .facet(&["Y", "W"])
            .facet(&["Y", "Z"])
            .build()
            .unwrap()
    }

    #[test]
    fn enabled_and_tau() {
        let s = adaptive();
        let y0 = EventSet::new().with("Y", "0");
        assert_eq!(s.enabled(&y0), facet(["W", "Z"]));
        assert_eq!(s.tau(&"W".into()).unwrap(), &y0);
        assert_eq!(s.tau_bar(&"W".into()).unwrap(), y0);
        assert!(s.enabled(&EventSet::new().with("X", "1")).is_empty());
    }

    #[test]
    fn local_restriction_of_adaptive() {
        let s = adaptive();
        let y0 = EventSet::new().with("Y", "0");
        assert_eq!(s.local_cover_restriction(&y0).to_string(), "{W} {Z}");
        assert_eq!(s.local_cover_restriction(&EventSet::new()).to_string(), "{X} {Y}");
    }

    #[test]
    fn non_unique_bridges_are_reported() {
        let s = ScenarioSpec::new()
            .measurement("a", ["0", "1"])
            .measurement("b", ["0"])
            .enable(&[], "a")
            .enable(&[("a", "0")], "b")
            .enable(&[("a", "1")], "b")
            .facet(&["a", "b"])
            .build()
            .unwrap();
        let r = s.check_unique_causal_bridges();
        assert!(!r.unique);
        assert_eq!(r.witnesses[0].0, Measurement::from("b"));
        assert_eq!(s.tau(&"b".into()), Err(ScenarioError::NonUniqueBridge("b".into())));
    }

    #[test]
    fn cycles_are_detected() {
        let s = ScenarioSpec::new()
            .measurement("x", ["0"])
            .measurement("y", ["0"])
            .enable(&[("y", "0")], "x")
            .enable(&[("x", "0")], "y")
            .facet(&["x", "y"])
            .build()
            .unwrap();
        assert!(!s.check_acyclic());
        assert!(matches!(s.tau_bar(&"x".into()), Err(ScenarioError::CycleDetected(_))));
    }

    #[test]
    fn inconsistent_events_are_rejected() {
        let err = EventSet::from_events([("x".into(), "0".into()), ("x".into(), "1".into())]).unwrap_err();
        assert!(matches!(err, ScenarioError::InconsistentEvents { .. }));
    }

    #[test]
    fn pruning_removes_unreachable_measurement() {
        let s = ScenarioSpec::new()
            .measurement("x", ["0", "1"])
            .measurement("y", ["0"])
            .measurement("u", ["0"])
            .measurement("dead", ["0"])
            .enable(&[], "x")
            .enable(&[("x", "0")], "y")
            .enable(&[("x", "1")], "u")
            .enable(&[("y", "0"), ("u", "0")], "dead")
            .facet(&["x", "y"])
            .facet(&["x", "u"])
            .build()
            .unwrap();
        assert!(!s.is_clean());
        let p = s.prune_unused_settings();
        assert!(p.is_clean());
        assert!(p.outcomes_of(&"dead".into()).is_none());
        assert_eq!(p.prune_unused_settings(), p);
    }
}
