//! Monte Carlo comparison of two 48-team World Cup formats.
//!
//! The crate models matches with an Elo-driven Poisson scorer, draws groups
//! under the confederation rules, plays full tournaments in the official
//! format (twelve groups, round of 32) and an imbalanced alternative (eight
//! Tier 1 and four Tier 2 groups with an intermediate play-off round), and
//! aggregates per-team progression and stakeless-match statistics over many
//! draws and simulations.

pub mod draw;
pub mod elo;
pub mod error;
pub mod format;
pub mod group;
pub mod output;
pub mod rng;
pub mod simulation;
pub mod stakeless;
pub mod team;
pub mod tournament;

pub use error::{Error, Result};
pub use format::FormatKind;
pub use team::{TeamId, TeamTable};
