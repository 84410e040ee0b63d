//! String-backed identifiers for game and scenario entities.

use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// A decision node of a spacetime game.
    NodeId
);
string_id!(
    /// An information set. Nature's information sets double as measurements.
    InfoSetId
);
string_id!(
    /// A player of a spacetime game.
    PlayerId
);
string_id!(
    /// An action label. Nature's actions double as measurement outcomes, and
    /// observer actions in canonical form are rendered contexts such as `{W,X}`.
    Action
);

/// Measurements of a scenario are identified with nature's information sets.
pub type Measurement = InfoSetId;

/// Measurement outcomes are identified with nature's actions.
pub type Outcome = Action;

/// The standard name of the nature player in alternating games.
pub const NATURE: &str = "Alfred";

/// The standard name of the observer player in alternating games.
pub const OBSERVER: &str = "Bob";

impl PlayerId {
    pub fn nature() -> Self {
        Self::new(NATURE)
    }

    pub fn observer() -> Self {
        Self::new(OBSERVER)
    }
}

/// Renders a set of measurements as a context label, e.g. `{W,X}`.
pub fn context_label<'a, I>(members: I) -> Action
where
    I: IntoIterator<Item = &'a InfoSetId>,
{
    let parts: Vec<&str> = members.into_iter().map(InfoSetId::as_str).collect();
    Action::new(format!("{{{}}}", parts.join(",")))
}

/// Rejects identifiers the text format cannot carry.
pub(crate) fn is_valid_token(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('#') && !s.chars().any(|c| c.is_whitespace() || c == '=')
}
