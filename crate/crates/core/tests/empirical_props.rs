mod common;

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spacetime_core::categories::scenario_sketch;
use spacetime_core::corpus;
use spacetime_core::cover::Facet;
use spacetime_core::empirical::{
    check_compatibility, deterministic_hvm_from_section, feasible_by_vertex_enumeration, find_global_section,
    marginalize, model_from_strategy_mix, remix, section_residual, verify_certificate, Certificate, EmpiricalModel,
    LocalDistribution, Row, SectionResult, Semiring,
};
use spacetime_core::game::SpacetimeGame;
use spacetime_core::gen::random_nature_mix;
use spacetime_core::ids::PlayerId;
use spacetime_core::scenario::EventSet;
use spacetime_core::strategy::PureStrategy;

type Q = BigRational;

fn strategy(e: &EventSet) -> PureStrategy {
    PureStrategy { player: PlayerId::nature(), choice: e.as_map().clone() }
}

/// Local distributions of a mix, from the definitions.
fn oracle_model(game: &SpacetimeGame, mix: &[(PureStrategy, Q)]) -> BTreeMap<Facet, BTreeMap<EventSet, Q>> {
    let s = scenario_sketch(game, &PlayerId::nature()).unwrap();
    let mut out: BTreeMap<Facet, BTreeMap<EventSet, Q>> = BTreeMap::new();
    for c in s.cover().facets() {
        let d = out.entry(c.clone()).or_default();
        for (p, w) in mix {
            let lambda: EventSet = p.choice.iter().map(|(x, o)| (x.clone(), o.clone())).collect();
            *d.entry(common::shown(&s, &lambda, c)).or_insert_with(Q::zero) += w;
        }
    }
    out
}

fn as_table(m: &EmpiricalModel) -> BTreeMap<Facet, BTreeMap<EventSet, Q>> {
    m.locals()
        .iter()
        .map(|(c, d)| (c.clone(), d.weights.iter().filter(|(_, w)| !w.is_zero()).map(|(k, w)| (k.clone(), w.clone())).collect()))
        .collect()
}

fn games() -> Vec<SpacetimeGame> {
    corpus::all().into_iter().map(|e| e.game).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Forward then backward: the mix's model has a section that re-mixes to
    /// the model exactly.
    #[test]
    fn forward_backward(seed in any::<u64>(), which in 0usize..7, support in 1usize..5) {
        let gs = games();
        let g = &gs[which % gs.len()];
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mix = random_nature_mix(&mut r, g, support);
        let m = model_from_strategy_mix(g, &mix, Semiring::Probability).unwrap();
        prop_assert_eq!(as_table(&m), oracle_model(g, &mix));
        prop_assert!(check_compatibility(&m).compatible);
        let SectionResult::Found(sec) = find_global_section(&m).unwrap() else {
            return Err(TestCaseError::fail("mix model reported infeasible"));
        };
        prop_assert!(section_residual(&m, &sec).unwrap().is_empty());
        let hvm = deterministic_hvm_from_section(&sec);
        let back = remix(m.scenario(), &hvm, Semiring::Probability).unwrap();
        prop_assert_eq!(as_table(&back), as_table(&m));
        prop_assert!(sec.weights.values().all(|w| w.is_positive()));
        prop_assert_eq!(sec.weights.values().cloned().sum::<Q>(), Q::one());
        // The support of a probabilistic section is a possibilistic one.
        let poss = m.support();
        let found: BTreeSet<EventSet> = sec.weights.keys().map(|p| p.choice.iter().map(|(x, o)| (x.clone(), o.clone())).collect()).collect();
        let bool_hvm: Vec<(PureStrategy, Q)> = found.iter().map(|e| (strategy(e), Q::one())).collect();
        prop_assert_eq!(as_table(&remix(poss.scenario(), &bool_hvm, Semiring::Possibility).unwrap()), as_table(&poss));
        prop_assert!(find_global_section(&poss).unwrap().is_feasible());
        prop_assert!(find_global_section(&m.with_semiring(Semiring::Signed)).unwrap().is_feasible());
    }

    /// Mixing then marginalizing equals marginalizing then mixing.
    #[test]
    fn marginalize_commutes_with_mixing(seed in any::<u64>(), which in 0usize..7, lam in 1u32..10, drop in any::<u8>()) {
        let gs = games();
        let g = &gs[which % gs.len()];
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_nature_mix(&mut r, g, 2), random_nature_mix(&mut r, g, 3));
        let l = Q::new(lam.into(), 10.into());
        let joint: Vec<(PureStrategy, Q)> = a
            .iter()
            .map(|(p, w)| (p.clone(), w * &l))
            .chain(b.iter().map(|(p, w)| (p.clone(), w * (Q::one() - &l))))
            .collect();
        let (ma, mb, mj) = (
            model_from_strategy_mix(g, &a, Semiring::Probability).unwrap(),
            model_from_strategy_mix(g, &b, Semiring::Probability).unwrap(),
            model_from_strategy_mix(g, &joint, Semiring::Probability).unwrap(),
        );
        for (c, dj) in mj.locals() {
            let sub: Facet = c.iter().enumerate().filter(|(k, _)| drop >> k & 1 == 0).map(|(_, x)| x.clone()).collect();
            let mut want: BTreeMap<EventSet, Q> = BTreeMap::new();
            for (m, f) in [(&ma, l.clone()), (&mb, Q::one() - &l)] {
                let d: &LocalDistribution = m.local(c).unwrap();
                for (k, w) in &marginalize(d, &sub, Semiring::Probability).unwrap().weights {
                    *want.entry(k.clone()).or_insert_with(Q::zero) += w * &f;
                }
            }
            want.retain(|_, w| !w.is_zero());
            let got: BTreeMap<EventSet, Q> = marginalize(dj, &sub, Semiring::Probability)
                .unwrap()
                .weights
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .collect();
            prop_assert_eq!(got, want);
        }
    }
}

#[test]
fn vertex_enumeration_agrees_with_simplex() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for g in games() {
        for _ in 0..3 {
            let mix = random_nature_mix(&mut r, &g, 3);
            let m = model_from_strategy_mix(&g, &mix, Semiring::Probability).unwrap();
            if let Some(v) = feasible_by_vertex_enumeration(&m, 10).unwrap() {
                assert!(v);
            }
        }
    }
    for (name, m) in corpus::standard_models() {
        if m.semiring() != Semiring::Probability {
            continue;
        }
        let simplex = find_global_section(&m).unwrap().is_feasible();
        assert_eq!(feasible_by_vertex_enumeration(&m, 64).unwrap(), Some(simplex), "{name}");
    }
}

/// zᵀA ≥ 0 and zᵀb < 0, with A and b rebuilt from the definitions.
fn farkas_holds(m: &EmpiricalModel, z: &BTreeMap<Row, Q>) -> bool {
    let s = m.scenario();
    let zb = z.get(&Row::Normalization).cloned().unwrap_or_else(Q::zero)
        + m.locals()
            .iter()
            .flat_map(|(c, d)| d.weights.iter().map(move |(k, w)| (Row::Local { facet: c.clone(), section: k.clone() }, w)))
            .map(|(row, w)| z.get(&row).cloned().unwrap_or_else(Q::zero) * w)
            .sum::<Q>();
    let columns_ok = common::assignments(s).iter().all(|lambda| {
        let mut v = z.get(&Row::Normalization).cloned().unwrap_or_else(Q::zero);
        for c in m.locals().keys() {
            let row = Row::Local { facet: c.clone(), section: common::shown(s, lambda, c) };
            v += z.get(&row).cloned().unwrap_or_else(Q::zero);
        }
        !v.is_negative()
    });
    columns_ok && zb.is_negative()
}

fn pr_box() -> EmpiricalModel {
    corpus::standard_models().into_iter().find(|(n, _)| *n == "pr-box").unwrap().1
}

#[test]
fn pr_box_certificate_checks_out() {
    let m = pr_box();
    let SectionResult::Infeasible(cert) = find_global_section(&m).unwrap() else { panic!("PR box has a section") };
    assert!(verify_certificate(&m, &cert).unwrap());
    let Certificate::Farkas(z) = &cert else { panic!("expected a Farkas vector") };
    assert!(farkas_holds(&m, z));
    // A tampered vector fails both checks.
    let mut bad = z.clone();
    *bad.entry(Row::Normalization).or_insert_with(Q::zero) += Q::from_integer(10.into());
    assert!(!farkas_holds(&m, &bad));
    assert!(!verify_certificate(&m, &Certificate::Farkas(bad)).unwrap());
}

/// Signed correlator sum over the four contexts. Each context's sign is the
/// PR box's own correlation sign, so the box scores 4.
#[test]
fn chsh_oracle() {
    let m = pr_box();
    let s = m.scenario();
    let corr = |d: &BTreeMap<EventSet, Q>| -> Q {
        d.iter()
            .map(|(k, w)| {
                let vals: BTreeSet<_> = k.iter().map(|(_, o)| o.clone()).collect();
                if vals.len() == 1 {
                    w.clone()
                } else {
                    -w.clone()
                }
            })
            .sum()
    };
    let table = as_table(&m);
    let signs: BTreeMap<&Facet, Q> = table.iter().map(|(c, d)| (c, corr(d).signum())).collect();
    assert_eq!(signs.values().filter(|v| v.is_negative()).count() % 2, 1);
    let score = |t: &BTreeMap<Facet, BTreeMap<EventSet, Q>>| -> Q { t.iter().map(|(c, d)| corr(d) * &signs[c]).sum() };
    assert_eq!(score(&table), Q::from_integer(4.into()));
    let lambdas = common::assignments(s);
    assert_eq!(lambdas.len(), 16);
    for l in &lambdas {
        let det: BTreeMap<Facet, BTreeMap<EventSet, Q>> =
            table.keys().map(|c| (c.clone(), BTreeMap::from([(common::shown(s, l, c), Q::one())]))).collect();
        assert!(score(&det) <= Q::from_integer(2.into()), "{l} scores above 2");
    }
    // Any convex combination scores at most 2, so the box has no section.
    assert!(!find_global_section(&m).unwrap().is_feasible());
    assert!(find_global_section(&m.with_semiring(Semiring::Signed)).unwrap().is_feasible());
}

/// Exhaustive: a boolean section exists iff every possible local section is
/// shown by some assignment whose every local section is possible.
#[test]
fn ghz_has_no_boolean_section() {
    let m = corpus::standard_models().into_iter().find(|(n, _)| *n == "ghz").unwrap().1;
    let s = m.scenario();
    let table = as_table(&m);
    let consistent: Vec<EventSet> = common::assignments(s)
        .into_iter()
        .filter(|l| table.iter().all(|(c, d)| d.contains_key(&common::shown(s, l, c))))
        .collect();
    let explained = table
        .iter()
        .all(|(c, d)| d.keys().all(|k| consistent.iter().any(|l| &common::shown(s, l, c) == k)));
    assert!(!explained);
    let SectionResult::Infeasible(cert) = find_global_section(&m).unwrap() else { panic!("GHZ has a boolean section") };
    assert!(verify_certificate(&m, &cert).unwrap());
}

#[test]
fn classical_bell_is_explained_exactly() {
    let m = corpus::standard_models().into_iter().find(|(n, _)| *n == "classical-bell").unwrap().1;
    let SectionResult::Found(sec) = find_global_section(&m).unwrap() else { panic!("no section") };
    assert!(section_residual(&m, &sec).unwrap().is_empty());
    let mixed = oracle_model(&corpus::cyclic4().game, &deterministic_hvm_from_section(&sec));
    assert_eq!(mixed, as_table(&m));
}
