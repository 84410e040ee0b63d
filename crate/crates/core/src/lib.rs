//! Spacetime games, causal contextuality scenarios and the functors between
//! them, with strategic forms, strategy sheaves and exact global-section
//! solving over pluggable semirings.

pub mod categories;
pub mod corpus;
pub mod cover;
pub mod dot;
pub mod empirical;
pub mod format;
pub mod game;
pub mod gen;
pub mod ids;
pub mod par;
pub mod scenario;
pub mod strategy;
