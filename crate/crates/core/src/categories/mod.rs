//! Morphisms of alternating games and of scenarios, their identities and
//! composition, and the functors relating the two categories.

mod functor;
mod game_morphism;
mod scenario_morphism;

pub use functor::{
    functor_f_morphism, functor_f_object, functor_g_object, game_of_scenario_unchecked, lift_morphism, roundtrip_iso,
    scenario_sketch, structurally_isomorphic, RoundTrip,
};
pub use game_morphism::{check_game_morphism, compose_game_morphisms, GameMorphism, GameMorphismReport};
pub use scenario_morphism::{check_scenario_morphism, compose_scenario_morphisms, ScenarioMorphism, ScenarioMorphismReport};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameError, SpacetimeGame};
use crate::ids::{Action, InfoSetId, NodeId};
use crate::scenario::ScenarioError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("game is not alternating: {0}")]
    NotAlternating(String),
    #[error("scenario is outside the category: {0}")]
    PreconditionViolated(String),
    #[error("morphisms do not chain: {0}")]
    DomainMismatch(String),
    #[error("cannot lift node {node}: {detail}")]
    LiftFailed { node: NodeId, detail: String },
    #[error("round trip failed: {0}")]
    RoundTripFailed(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Which constraint a morphism violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MorphismRule {
    /// Source or target is outside the category.
    Precondition,
    /// Components are not total functions between the right sets.
    WellFormed,
    /// The measurement map does not carry facets into facets.
    Simplicial,
    /// One of the numbered structural constraints.
    Rule(u8),
}

impl fmt::Display for MorphismRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Precondition => f.write_str("precondition"),
            Self::WellFormed => f.write_str("well-formed"),
            Self::Simplicial => f.write_str("simplicial"),
            Self::Rule(k) => write!(f, "rule-{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismViolation {
    pub rule: MorphismRule,
    pub detail: String,
}

/// The context an observer action selects, read off the edges:
/// {ι(m) | σ(t, m) = a}.
pub fn context_of(game: &SpacetimeGame, t: &NodeId, a: &Action) -> BTreeSet<InfoSetId> {
    game.successors(t)
        .iter()
        .filter(|m| game.edge_label(t, m) == Some(a))
        .map(|m| game.info_set_of(m).clone())
        .collect()
}

pub(crate) fn push(v: &mut Vec<MorphismViolation>, rule: MorphismRule, detail: String) {
    v.push(MorphismViolation { rule, detail });
}
