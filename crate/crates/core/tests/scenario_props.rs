use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spacetime_core::categories::functor_f_object;
use spacetime_core::corpus;
use spacetime_core::cover::Facet;
use spacetime_core::gen::{random_alternating_game, GameParams};
use spacetime_core::ids::Measurement;
use spacetime_core::scenario::{EventSet, Scenario, ScenarioSpec};

fn f_image(seed: u64) -> Scenario {
    let g = random_alternating_game(&mut ChaCha8Rng::seed_from_u64(seed), GameParams::default());
    functor_f_object(&g).expect("alternating")
}

/// Maximal elements of a family of sets.
fn facets_of(sets: &BTreeSet<Facet>) -> BTreeSet<Facet> {
    sets.iter().filter(|a| !sets.iter().any(|b| b != *a && a.is_subset(b))).cloned().collect()
}

/// τ̄ by the recursive definition.
fn closure(s: &Scenario, x: &Measurement) -> EventSet {
    let mut acc = s.tau(x).unwrap().clone();
    for y in s.tau(x).unwrap().support() {
        acc = acc.union(&closure(s, &y)).expect("consistent");
    }
    acc
}

fn check_restrictions(s: &Scenario) -> Result<(), TestCaseError> {
    for t in s.enabling_sides() {
        let direct: BTreeSet<Facet> = s
            .cover()
            .facets()
            .map(|c| c.intersection(&s.enabled(t)).cloned().collect::<Facet>())
            .filter(|c| !c.is_empty())
            .collect();
        let lcr: BTreeSet<Facet> = s.local_cover_restriction(t).facets().cloned().collect();
        prop_assert_eq!(&lcr, &facets_of(&direct));
        // On secured covers the intersections are already an antichain.
        prop_assert_eq!(&s.local_cover_restriction_unreduced(t), &lcr);
    }
    for x in s.measurements() {
        let tx = s.tau(x).unwrap();
        prop_assert!(s.local_cover_restriction(tx).facets().any(|c| c.contains(x)), "no context of tau({}) holds it", x);
        let tb = s.tau_bar(x).unwrap();
        prop_assert!(tx.is_subset(&tb));
        prop_assert_eq!(tb, closure(s, x));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_images_are_causally_secured(seed in any::<u64>()) {
        let s = f_image(seed);
        let r = s.check_causally_secured().unwrap();
        prop_assert!(r.passed, "{:?}", r.violations);
        prop_assert!(s.in_category_scope());
        check_restrictions(&s)?;
    }
}

#[test]
fn corpus_scenarios_satisfy_the_restriction_identities() {
    for e in corpus::all().into_iter().filter(|e| e.in_scope) {
        assert!(e.scenario.is_clean(), "{}", e.name);
        check_restrictions(&e.scenario).unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn inconsistent_enabling_side_is_rejected() {
    let r = ScenarioSpec::new()
        .measurement("x", ["0", "1"])
        .measurement("y", ["0", "1"])
        .enable(&[], "x")
        .enable(&[("x", "0"), ("x", "1")], "y")
        .facet(&["x", "y"])
        .build();
    assert!(r.is_err());
}

#[test]
fn adaptive_bridge_of_w() {
    let s = corpus::adaptive().scenario;
    assert_eq!(s.tau(&"W".into()).unwrap(), &EventSet::new().with("Y", "0"));
}
