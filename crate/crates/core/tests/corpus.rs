use spacetime_core::categories::{roundtrip_iso, structurally_isomorphic, functor_g_object};
use spacetime_core::corpus::{self, CorpusEntry};
use spacetime_core::game::{check_alternating, enumerate_complete_histories, enumerate_histories, natural_cover, to_extensive_form};
use spacetime_core::ids::PlayerId;
use spacetime_core::strategy::{enumerate_pure_strategies, reduced_strategic_form};

fn observed(e: &CorpusEntry, key: &str) -> String {
    let g = &e.game;
    match key {
        "complete_histories" => enumerate_complete_histories(g).len().to_string(),
        "histories" => enumerate_histories(g).len().to_string(),
        "natural_cover" => natural_cover(g).to_string(),
        "alternating" => check_alternating(g).passed.to_string(),
        "failed_rules" => {
            check_alternating(g).failed_rules().into_iter().map(|r| r.id()).collect::<Vec<_>>().join(",")
        }
        "tau_W" => e.scenario.tau(&"W".into()).unwrap().to_string(),
        "perfect_information" => to_extensive_form(g).is_perfect_information().to_string(),
        "unique_bridges" => e.scenario.check_unique_causal_bridges().unique.to_string(),
        "alfred_strategies" => enumerate_pure_strategies(g, &PlayerId::nature()).unwrap().len().to_string(),
        "reduced_alfred_classes" => reduced_strategic_form(g).classes_of(&PlayerId::nature()).unwrap().len().to_string(),
        "reduced_conditional_choices" => {
            let red = reduced_strategic_form(g);
            let counts: std::collections::BTreeSet<usize> =
                red.classes_of(&PlayerId::nature()).unwrap().iter().map(|c| c.conditional.len()).collect();
            counts.into_iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        }
        other => panic!("no observer for {other}"),
    }
}

#[test]
fn every_expected_value_is_reproduced() {
    for e in corpus::all() {
        assert!(e.game.validate().valid, "{} does not validate", e.name);
        for (key, want) in &e.expected {
            assert_eq!(&observed(&e, key), want, "{}: {key}", e.name);
        }
    }
}

#[test]
fn in_scope_entries_pass_the_category_checks() {
    let names: Vec<&str> = corpus::all().iter().filter(|e| e.in_scope).map(|e| e.name).collect();
    assert_eq!(names, ["minimal", "fig3", "fig5", "fig7", "fig11"]);
    for e in corpus::all().into_iter().filter(|e| e.in_scope) {
        let s = &e.scenario;
        assert!(s.check_acyclic() && s.check_unique_causal_bridges().unique, "{}", e.name);
        assert!(s.check_causally_secured().unwrap().passed, "{}", e.name);
        let back = functor_g_object(s).unwrap();
        assert!(structurally_isomorphic(&back, &e.game), "{}: G(F(g)) differs from g", e.name);
        roundtrip_iso(s).unwrap();
    }
}

#[test]
fn lookup_by_alias() {
    assert_eq!(corpus::by_name("cyclic4").unwrap().name, "fig7");
    assert_eq!(corpus::by_name("fig12").unwrap().name, "fig12");
    assert!(corpus::by_name("nope").is_none());
    assert_eq!(corpus::standard_models().iter().map(|(n, _)| *n).collect::<Vec<_>>(), ["classical-bell", "pr-box", "ghz"]);
}

#[test]
fn bell_info_sets() {
    let e = corpus::bell_two_observer();
    let sets: Vec<String> = e.game.info_sets().map(|(i, _)| i.to_string()).collect();
    assert_eq!(sets, ["A", "B", "W", "X", "Y", "Z"]);
}

#[test]
fn ghz_or_is_excluded() {
    let e = corpus::ghz_or();
    assert!(!e.in_scope);
    assert!(!e.scenario.check_unique_causal_bridges().unique);
}
