use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::game_morphism::same;
use super::{push, CategoryError, MorphismRule, MorphismViolation};
use crate::cover::{render_facet, Facet};
use crate::ids::{Measurement, Outcome};
use crate::scenario::{EventSet, Scenario};

/// A morphism μ: Γ′ → Γ given by (π′, α). `source` is Γ′ and `target` is Γ.
/// π′ sends the target's measurements to the source's; α_x sends outcomes of
/// π′(x) to outcomes of x.
#[derive(Debug, Clone)]
pub struct ScenarioMorphism {
    pub source: Arc<Scenario>,
    pub target: Arc<Scenario>,
    pub pi_prime: BTreeMap<Measurement, Measurement>,
    pub alpha: BTreeMap<Measurement, BTreeMap<Outcome, Outcome>>,
}

impl PartialEq for ScenarioMorphism {
    fn eq(&self, other: &Self) -> bool {
        same(&self.source, &other.source)
            && same(&self.target, &other.target)
            && self.pi_prime == other.pi_prime
            && self.alpha == other.alpha
    }
}

impl Eq for ScenarioMorphism {}

impl ScenarioMorphism {
    pub fn identity(scenario: Arc<Scenario>) -> Self {
        let pi_prime = scenario.measurements().map(|x| (x.clone(), x.clone())).collect();
        let alpha = scenario
            .outcome_table()
            .iter()
            .map(|(x, os)| (x.clone(), os.iter().map(|o| (o.clone(), o.clone())).collect()))
            .collect();
        ScenarioMorphism { source: scenario.clone(), target: scenario, pi_prime, alpha }
    }

    /// Same components between two scenarios with the same measurements and
    /// outcomes: the identity maps, with explicit endpoints.
    pub fn identity_between(source: Arc<Scenario>, target: Arc<Scenario>) -> Self {
        let mut m = Self::identity(target.clone());
        m.source = source;
        m
    }

    pub fn is_identity(&self) -> bool {
        same(&self.source, &self.target)
            && self.pi_prime.iter().all(|(a, b)| a == b)
            && self.alpha.values().all(|m| m.iter().all(|(a, b)| a == b))
            && self.pi_prime.len() == self.target.measurements().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioMorphismReport {
    pub passed: bool,
    pub violations: Vec<MorphismViolation>,
    /// Non-fatal observations. The converse of rule 1 is reported here when
    /// it fails, since it does not follow from the rules in general.
    pub diagnostics: Vec<String>,
}

/// Evaluates well-formedness, the simplicial-map condition and rules 1 to 3.
pub fn check_scenario_morphism(m: &ScenarioMorphism) -> ScenarioMorphismReport {
    let mut v: Vec<MorphismViolation> = Vec::new();
    let (src, tgt) = (&*m.source, &*m.target);

    for (name, s) in [("source", src), ("target", tgt)] {
        if let Some((x, _)) = s.check_unique_causal_bridges().witnesses.first() {
            push(&mut v, MorphismRule::Precondition, format!("{name} has several bridges for {x}"));
        }
        if let Some(x) = s.measurements().find(|x| s.tau(x).is_err()) {
            push(&mut v, MorphismRule::Precondition, format!("{name} never enables {x}"));
        }
    }
    if !v.is_empty() {
        return ScenarioMorphismReport { passed: false, violations: v, diagnostics: Vec::new() };
    }

    let tgt_x = tgt.measurement_set();
    let domain: BTreeSet<Measurement> = m.pi_prime.keys().cloned().collect();
    if domain != tgt_x {
        push(&mut v, MorphismRule::WellFormed, "pi' is not defined exactly on the target's measurements".into());
    }
    for (x, x2) in &m.pi_prime {
        if src.outcomes_of(x2).is_none() {
            push(&mut v, MorphismRule::WellFormed, format!("pi'({x}) = {x2} is not a source measurement"));
        }
    }
    if !v.is_empty() {
        return ScenarioMorphismReport { passed: false, violations: v, diagnostics: Vec::new() };
    }
    for x in &tgt_x {
        let x2 = &m.pi_prime[x];
        let Some(ax) = m.alpha.get(x) else {
            push(&mut v, MorphismRule::WellFormed, format!("alpha has no component at {x}"));
            continue;
        };
        let want: BTreeSet<&Outcome> = src.outcomes_of(x2).expect("checked").iter().collect();
        if ax.keys().collect::<BTreeSet<_>>() != want {
            push(&mut v, MorphismRule::WellFormed, format!("alpha at {x} is not defined exactly on the outcomes of {x2}"));
        }
        let allowed = tgt.outcomes_of(x).expect("known");
        for (o2, o) in ax {
            if !allowed.contains(o) {
                push(&mut v, MorphismRule::WellFormed, format!("alpha at {x} sends {o2} to {o}, not an outcome of {x}"));
            }
        }
    }
    if m.alpha.keys().any(|x| !tgt_x.contains(x)) {
        push(&mut v, MorphismRule::WellFormed, "alpha has components outside the target's measurements".into());
    }

    for c in tgt.cover().facets() {
        let image: Facet = c.iter().map(|x| m.pi_prime[x].clone()).collect();
        if !src.cover().contains_face(&image) {
            push(&mut v, MorphismRule::Simplicial, format!("facet {} maps to {}, not a face of the source cover", render_facet(c), render_facet(&image)));
        }
    }

    let tau = |s: &Scenario, x: &Measurement| -> EventSet { s.tau(x).expect("checked").clone() };
    let xs: Vec<&Measurement> = tgt_x.iter().collect();
    let image: BTreeSet<&Measurement> = m.pi_prime.values().collect();
    let mut diagnostics = Vec::new();
    for x in &xs {
        let tx = tau(tgt, x);
        let t2x = tau(src, &m.pi_prime[*x]);
        for y in &xs {
            let same_src = t2x == tau(src, &m.pi_prime[*y]);
            let same_tgt = tx == tau(tgt, y);
            if same_src && !same_tgt {
                push(&mut v, MorphismRule::Rule(1), format!("{x} and {y} share a bridge in the source but not in the target"));
            }
            if same_tgt && !same_src && x < y {
                diagnostics.push(format!("{x} and {y} share a bridge in the target but not in the source"));
            }
        }
        for y2 in t2x.as_map().keys() {
            if !image.contains(y2) {
                push(&mut v, MorphismRule::Rule(2), format!("{y2} enables the image of {x} but is not in the image of pi'"));
            }
        }
        for y in &xs {
            let y2 = &m.pi_prime[*y];
            let Some(o2) = t2x.get(y2) else { continue };
            let mapped = m.alpha.get(*y).and_then(|a| a.get(o2));
            let expected = tx.get(y);
            if mapped.is_none() || mapped != expected {
                push(
                    &mut v,
                    MorphismRule::Rule(3),
                    format!(
                        "alpha_{y}({o2}) = {} but the bridge of {x} has {y} = {}",
                        mapped.map_or("undefined".to_string(), |o| o.to_string()),
                        expected.map_or("nothing".to_string(), |o| o.to_string())
                    ),
                );
            }
        }
    }
    ScenarioMorphismReport { passed: v.is_empty(), violations: v, diagnostics }
}

/// μ₁ ∘ μ₂ for μ₁: Γ′ → Γ and μ₂: Γ″ → Γ′.
pub fn compose_scenario_morphisms(m1: &ScenarioMorphism, m2: &ScenarioMorphism) -> Result<ScenarioMorphism, CategoryError> {
    if !same(&m1.source, &m2.target) {
        return Err(CategoryError::DomainMismatch("source of the outer morphism differs from target of the inner one".into()));
    }
    let mut pi_prime = BTreeMap::new();
    for (x, x1) in &m1.pi_prime {
        let x2 = m2.pi_prime.get(x1).ok_or_else(|| CategoryError::DomainMismatch(format!("{x1} outside inner pi'")))?;
        pi_prime.insert(x.clone(), x2.clone());
    }
    let mut alpha = BTreeMap::new();
    for (x, a1) in &m1.alpha {
        let x1 = m1.pi_prime.get(x).ok_or_else(|| CategoryError::DomainMismatch(format!("{x} has no image")))?;
        let a2 = m2.alpha.get(x1).ok_or_else(|| CategoryError::DomainMismatch(format!("inner alpha lacks {x1}")))?;
        let mut comp = BTreeMap::new();
        for (o2, o1) in a2 {
            let o = a1.get(o1).ok_or_else(|| CategoryError::DomainMismatch(format!("outer alpha_{x} lacks {o1}")))?;
            comp.insert(o2.clone(), o.clone());
        }
        alpha.insert(x.clone(), comp);
    }
    Ok(ScenarioMorphism { source: m2.source.clone(), target: m1.target.clone(), pi_prime, alpha })
}
