use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spacetime_core::categories::{functor_f_morphism, ScenarioMorphism};
use spacetime_core::corpus;
use spacetime_core::format::{parse_document, serialize_document, Document, FormatError};
use spacetime_core::gen::{random_alternating_game, random_chain, GameParams};

/// parse ∘ serialize is the identity, and reserializing is byte-stable.
fn round_trip(doc: &Document) -> Result<(), TestCaseError> {
    let text = serialize_document(doc);
    let back = parse_document(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, doc);
    prop_assert_eq!(serialize_document(&back), text);
    Ok(())
}

fn corpus_documents() -> Vec<(String, Document)> {
    let mut out = Vec::new();
    for e in corpus::all() {
        out.push((format!("{}/game", e.name), Document::Game(e.game.clone())));
        out.push((format!("{}/scenario", e.name), Document::Scenario(e.scenario.clone())));
        for (n, m) in &e.models {
            out.push((format!("{}/{n}", e.name), Document::Model(m.clone())));
        }
    }
    out
}

#[test]
fn every_corpus_document_round_trips() {
    let docs = corpus_documents();
    assert!(docs.len() >= 17);
    for (name, d) in docs {
        round_trip(&d).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn identity_morphisms_round_trip() {
    for e in corpus::all().into_iter().filter(|e| e.in_scope) {
        let s = Arc::new(e.scenario.clone());
        round_trip(&Document::ScenarioMorphism(ScenarioMorphism::identity(s))).unwrap();
    }
}

#[test]
fn errors_carry_locations() {
    let cases = [
        ("", (1, 1)),
        ("spacetime-doc version=1 kind=game\n[nodes]\nB Bob B a\n[edges]\nB B a\n", (5, 1)),
        ("spacetime-doc version=1 kind=scenario\n[measurements]\nx 0 1\n[enabling]\nx y=0\n[cover]\nx\n", (5, 1)),
        ("spacetime-doc version=1 kind=model semiring=probability\n[measurements]\nx 0 1\n[enabling]\nx\n[cover]\nx\n[distribution]\nx | x=0 | half\n", (9, 11)),
    ];
    for (text, want) in cases {
        let e: FormatError = parse_document(text).unwrap_err();
        assert_eq!(e.location(), want, "{e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_games_and_morphisms_round_trip(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g = random_alternating_game(&mut r, GameParams::default());
        round_trip(&Document::Game(g))?;
        let chain = random_chain(&mut r, 1, GameParams::default());
        round_trip(&Document::GameMorphism(chain[0].clone()))?;
        round_trip(&Document::ScenarioMorphism(functor_f_morphism(&chain[0]).unwrap()))?;
    }

    /// Arbitrary text never panics the parser.
    #[test]
    fn parser_is_total(text in "(spacetime-doc version=1 kind=(game|scenario|model) ?\n)?([\\[\\]a-z0-9=|/ #\n]{0,80})") {
        let _ = parse_document(&text);
    }
}
