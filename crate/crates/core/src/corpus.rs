//! Fixtures: the example games and the standard empirical models.

use std::collections::BTreeMap;

use crate::categories::{functor_f_object, scenario_sketch};
use crate::empirical::{EmpiricalModel, Semiring};
use crate::game::{GameSpec, SpacetimeGame};
use crate::ids::PlayerId;
use crate::scenario::Scenario;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub summary: &'static str,
    pub game: SpacetimeGame,
    /// F(game) for alternating games, otherwise the scenario sketch.
    pub scenario: Scenario,
    /// Whether the entry lies inside both categories (alternating game,
    /// acyclic scenario with unique bridges).
    pub in_scope: bool,
    pub models: Vec<(&'static str, EmpiricalModel)>,
    /// Expected property values, checked by the test suite.
    pub expected: BTreeMap<&'static str, String>,
}

fn entry(
    name: &'static str,
    aliases: &'static [&'static str],
    summary: &'static str,
    game: SpacetimeGame,
    expected: &[(&'static str, &str)],
) -> CorpusEntry {
    let (scenario, in_scope) = match functor_f_object(&game) {
        Ok(s) => {
            let scope = s.in_category_scope();
            (s, scope)
        }
        Err(_) => (scenario_sketch(&game, &PlayerId::nature()).expect("fixture has consistent bridges"), false),
    };
    CorpusEntry {
        name,
        aliases,
        summary,
        game,
        scenario,
        in_scope,
        models: Vec::new(),
        expected: expected.iter().map(|(k, v)| (*k, (*v).to_string())).collect(),
    }
}

/// One observer context {x} with a binary outcome.
pub fn minimal_game() -> SpacetimeGame {
    GameSpec::new()
        .node("B", "Bob", "B", ["{x}"])
        .node("x", "Alfred", "x", ["0", "1"])
        .edge("B", "x", "{x}")
        .build()
        .expect("fixture")
}

/// Two spacelike-separated observer decisions A and B with singleton
/// contexts. Both are played by Bob, so the game is two-player and fails only
/// the rule that forbids equal causal bridges.
pub fn bell_two_observer_game() -> SpacetimeGame {
    GameSpec::new()
        .node("A", "Bob", "A", ["{X}", "{Y}"])
        .node("B", "Bob", "B", ["{W}", "{Z}"])
        .node("x", "Alfred", "X", ["0", "1"])
        .node("y", "Alfred", "Y", ["0", "1"])
        .node("w", "Alfred", "W", ["0", "1"])
        .node("z", "Alfred", "Z", ["0", "1"])
        .edge("A", "x", "{X}")
        .edge("A", "y", "{Y}")
        .edge("B", "w", "{W}")
        .edge("B", "z", "{Z}")
        .build()
        .expect("fixture")
}

/// Flat scenario picking one context among `contexts` at a single root.
fn flat_game(contexts: &[(&str, &[&str])]) -> SpacetimeGame {
    let mut spec = GameSpec::new().node("A", "Bob", "A", contexts.iter().map(|(label, _)| *label));
    for (label, members) in contexts {
        let tag: String = members.concat();
        for x in *members {
            let id = format!("{x}_{tag}");
            spec = spec.node(&id, "Alfred", x, ["0", "1"]).edge("A", &id, label);
        }
    }
    spec.build().expect("fixture")
}

/// Cyclic system of rank 3: contexts XY, XZ, YZ.
pub fn cyclic3_game() -> SpacetimeGame {
    flat_game(&[("{X,Y}", &["X", "Y"]), ("{X,Z}", &["X", "Z"]), ("{Y,Z}", &["Y", "Z"])])
}

/// Cyclic system of rank 4: contexts XW, WY, YZ, ZX under one observer node.
pub fn cyclic4_game() -> SpacetimeGame {
    flat_game(&[("{W,X}", &["X", "W"]), ("{W,Y}", &["W", "Y"]), ("{Y,Z}", &["Y", "Z"]), ("{X,Z}", &["Z", "X"])])
}

/// The rank-4 cycle with opaque observer labels a1..a4.
pub fn cyclic4_opaque_game() -> SpacetimeGame {
    flat_game(&[("a1", &["X", "W"]), ("a2", &["W", "Y"]), ("a3", &["Y", "Z"]), ("a4", &["Z", "X"])])
}

/// Adaptive measurement: the second observer decision happens only after
/// Y was measured with outcome 0.
pub fn adaptive_game() -> SpacetimeGame {
    GameSpec::new()
        .node("A", "Bob", "A", ["{X}", "{Y}"])
        .node("x", "Alfred", "X", ["0", "1"])
        .node("y", "Alfred", "Y", ["0", "1"])
        .node("B", "Bob", "B", ["{W}", "{Z}"])
        .node("w", "Alfred", "W", ["0", "1"])
        .node("z", "Alfred", "Z", ["0", "1"])
        .edge("A", "x", "{X}")
        .edge("A", "y", "{Y}")
        .edge("y", "B", "0")
        .edge("B", "w", "{W}")
        .edge("B", "z", "{Z}")
        .build()
        .expect("fixture")
}

/// Temporal two-stage scenario: after every first-stage setting and outcome
/// the second observer picks Z or W, each a distinct measurement (e.g. `ZX1`
/// is Z after X gave 1).
pub fn gp_game() -> SpacetimeGame {
    let mut spec = GameSpec::new()
        .node("A", "Bob", "A", ["{X}", "{Y}"])
        .node("x", "Alfred", "X", ["0", "1"])
        .node("y", "Alfred", "Y", ["0", "1"])
        .edge("A", "x", "{X}")
        .edge("A", "y", "{Y}");
    for (first, node) in [("X", "x"), ("Y", "y")] {
        for o in ["0", "1"] {
            let b = format!("B{first}{o}");
            let z = format!("Z{first}{o}");
            let w = format!("W{first}{o}");
            spec = spec
                .node(&b, "Bob", &b, [format!("{{{w}}}"), format!("{{{z}}}")])
                .edge(node, &b, o)
                .node(&z.to_lowercase(), "Alfred", &z, ["0", "1"])
                .node(&w.to_lowercase(), "Alfred", &w, ["0", "1"])
                .edge(&b, &z.to_lowercase(), &format!("{{{z}}}"))
                .edge(&b, &w.to_lowercase(), &format!("{{{w}}}"));
        }
    }
    spec.build().expect("fixture")
}

/// OR gate on a GHZ resource. Alice picks the two input settings as a
/// rank-4 context over X1, Y1, X2, Y2; after both outcomes, Bob measures X3
/// when the settings agree and Y3 otherwise. X3 and Y3 are enabled by many
/// different event sets, so bridges are not unique.
pub fn ghz_or_game() -> SpacetimeGame {
    let contexts = [("X1", "X2", "X3"), ("X1", "Y2", "Y3"), ("Y1", "X2", "Y3"), ("Y1", "Y2", "X3")];
    let mut spec = GameSpec::new().node(
        "A",
        "Alice",
        "A",
        contexts.iter().map(|(a, b, _)| format!("{{{a},{b}}}")).collect::<Vec<_>>(),
    );
    for (a, b, third) in contexts {
        let label = format!("{{{a},{b}}}");
        let (na, nb) = (format!("{a}_{a}{b}"), format!("{b}_{a}{b}"));
        spec = spec
            .node(&na, "Alfred", a, ["0", "1"])
            .node(&nb, "Alfred", b, ["0", "1"])
            .edge("A", &na, &label)
            .edge("A", &nb, &label);
        for oa in ["0", "1"] {
            for ob in ["0", "1"] {
                let t = format!("B_{a}{oa}{b}{ob}");
                let n = format!("{third}_{a}{oa}{b}{ob}");
                let ctx = format!("{{{third}}}");
                spec = spec
                    .node(&t, "Bob", &t, [ctx.clone()])
                    .edge(&na, &t, oa)
                    .edge(&nb, &t, ob)
                    .node(&n, "Alfred", third, ["0", "1"])
                    .edge(&t, &n, &ctx);
            }
        }
    }
    spec.build().expect("fixture")
}

pub fn minimal() -> CorpusEntry {
    entry("minimal", &[], "single context {x} with a binary outcome", minimal_game(), &[
        ("complete_histories", "2"),
        ("histories", "4"),
        ("natural_cover", "{x}"),
        ("alternating", "true"),
    ])
}

pub fn bell_two_observer() -> CorpusEntry {
    entry("fig1", &["bell"], "Bell experiment with two spacelike-separated observer decisions", bell_two_observer_game(), &[
        ("complete_histories", "16"),
        ("natural_cover", "{W,X} {W,Y} {X,Z} {Y,Z}"),
        ("failed_rules", "AB2"),
        ("alternating", "false"),
    ])
}

pub fn cyclic3() -> CorpusEntry {
    entry("fig3", &["cyclic3"], "cyclic system of rank 3", cyclic3_game(), &[
        ("complete_histories", "12"),
        ("natural_cover", "{X,Y} {X,Z} {Y,Z}"),
        ("alternating", "true"),
    ])
}

pub fn adaptive() -> CorpusEntry {
    entry("fig5", &["adaptive"], "adaptive measurement through a causal bridge", adaptive_game(), &[
        ("complete_histories", "7"),
        ("natural_cover", "{W,Y} {X} {Y,Z}"),
        ("tau_W", "{Y:0}"),
        ("perfect_information", "true"),
        ("alternating", "true"),
    ])
}

pub fn cyclic4() -> CorpusEntry {
    let mut e = entry("fig7", &["cyclic4"], "cyclic system of rank 4, the grouped Bell experiment", cyclic4_game(), &[
        ("complete_histories", "16"),
        ("natural_cover", "{W,X} {W,Y} {X,Z} {Y,Z}"),
        ("alternating", "true"),
    ]);
    e.models = vec![("classical-bell", classical_bell_model(&e.scenario)), ("pr-box", pr_box_model(&e.scenario))];
    e
}

pub fn gp() -> CorpusEntry {
    entry("fig11", &["gp"], "temporal two-stage scenario", gp_game(), &[
        ("complete_histories", "16"),
        ("alfred_strategies", "1024"),
        ("reduced_conditional_choices", "4"),
        ("reduced_alfred_classes", "64"),
        ("perfect_information", "true"),
        ("alternating", "true"),
    ])
}

pub fn ghz_or() -> CorpusEntry {
    let mut e = entry("fig12", &["ghz-or"], "OR gate on a GHZ resource; outside the categorical equivalence", ghz_or_game(), &[
        ("complete_histories", "32"),
        ("natural_cover", "{X1,X2,X3} {X1,Y2,Y3} {X2,Y1,Y3} {X3,Y1,Y2}"),
        ("unique_bridges", "false"),
        ("alternating", "false"),
    ]);
    e.models = vec![("ghz", ghz_model(&e.scenario))];
    e
}

/// Every entry, in figure order.
pub fn all() -> Vec<CorpusEntry> {
    vec![minimal(), bell_two_observer(), cyclic3(), adaptive(), cyclic4(), gp(), ghz_or()]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    all().into_iter().find(|e| e.name == name || e.aliases.contains(&name))
}

fn bits(s: &str) -> Vec<&str> {
    s.split("").filter(|c| !c.is_empty()).collect()
}

/// Builds a model from rows `(facet, [(joint outcome as bit string, weight)])`.
fn model_from_rows(scenario: &Scenario, semiring: Semiring, rows: &[(&[&str], &[(&str, &str)])]) -> EmpiricalModel {
    let mut m = EmpiricalModel::empty(scenario.clone(), semiring);
    for (facet, entries) in rows {
        for (outcome, weight) in *entries {
            let section = facet.iter().zip(bits(outcome)).map(|(x, o)| ((*x).into(), o.into())).collect();
            m.set(&facet.iter().map(|x| (*x).into()).collect(), section, weight.parse().expect("rational"))
                .expect("fixture section");
        }
    }
    m
}

/// Uniform mixture of the four deterministic strategies with X = W and
/// Y = Z, over the rank-4 cycle.
pub fn classical_bell_model(scenario: &Scenario) -> EmpiricalModel {
    let half = &[("00", "1/2"), ("11", "1/2")][..];
    let quarter = &[("00", "1/4"), ("01", "1/4"), ("10", "1/4"), ("11", "1/4")][..];
    model_from_rows(scenario, Semiring::Probability, &[
        (&["W", "X"], half),
        (&["Y", "Z"], half),
        (&["X", "Z"], quarter),
        (&["W", "Y"], quarter),
    ])
}

/// Popescu-Rohrlich box: outputs agree except in the {Y,Z} context, where
/// they differ; all marginals uniform.
pub fn pr_box_model(scenario: &Scenario) -> EmpiricalModel {
    let same = &[("00", "1/2"), ("11", "1/2")][..];
    let differ = &[("01", "1/2"), ("10", "1/2")][..];
    model_from_rows(scenario, Semiring::Probability, &[
        (&["W", "X"], same),
        (&["X", "Z"], same),
        (&["W", "Y"], same),
        (&["Y", "Z"], differ),
    ])
}

/// Possibilistic GHZ support: even parity in the XXX context, odd parity in
/// the three contexts with two Y settings.
pub fn ghz_model(scenario: &Scenario) -> EmpiricalModel {
    let even = &[("000", "1"), ("011", "1"), ("101", "1"), ("110", "1")][..];
    let odd = &[("001", "1"), ("010", "1"), ("100", "1"), ("111", "1")][..];
    model_from_rows(scenario, Semiring::Possibility, &[
        (&["X1", "X2", "X3"], even),
        (&["X1", "Y2", "Y3"], odd),
        (&["X2", "Y1", "Y3"], odd),
        (&["X3", "Y1", "Y2"], odd),
    ])
}

/// Every named standard model: classical-bell, pr-box, ghz.
pub fn standard_models() -> Vec<(&'static str, EmpiricalModel)> {
    let mut out = cyclic4().models;
    out.extend(ghz_or().models);
    out
}
