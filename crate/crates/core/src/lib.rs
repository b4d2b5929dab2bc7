//! Solver and simulator for pairwise n-person stochastic duel games.
//!
//! Every player holds a monotone success curve `P_i(t)` and a limited number
//! of bullets. Each pair of players has a best-shot time, the first moment
//! with `P_i(t) + P_j(t) >= 1`; sorting those times yields a schedule of
//! battlefields. Players rank their battlefields by the ratio of actual
//! success probabilities, act at the epochs of a renewal process, and fire
//! at the first epoch past their chosen battlefield's time.
//!
//! Modules, bottom-up:
//!
//! - [`curve`]: success curves and their evaluation.
//! - [`schedule`]: pairwise crossing times and the sorted battlefield list.
//! - [`battlefield`]: actual success probabilities, indicators, targets.
//! - [`fluctuation`]: renewal epochs, exit/pre-exit statistics, the confined
//!   functional, and the shoot-or-wait rule.
//! - [`engine`]: the game-state machine.
//! - [`simulator`]: seeded playouts and survival estimates.
//! - [`config`] and [`cli`]: spec files and the `duel` command.
//!
//! ```
//! use std::collections::BTreeMap;
//! use pairwise_duel::{curve::SuccessCurve, schedule::PairSchedule, PlayerId};
//!
//! let curves: BTreeMap<_, _> = [(1, 20.0), (2, 30.0), (3, 40.0)]
//!     .into_iter()
//!     .map(|(id, t_max)| (PlayerId(id), SuccessCurve::linear(t_max).unwrap()))
//!     .collect();
//! let schedule = PairSchedule::build(&curves, 1e-9).unwrap();
//! assert!((schedule.battlefields()[0].time - 12.0).abs() < 1e-8);
//! ```

use std::fmt;

use serde::Serialize;

pub mod battlefield;
mod bisect;
pub mod cli;
pub mod config;
pub mod curve;
pub mod engine;
mod error;
pub mod fluctuation;
pub mod schedule;
pub mod simulator;

pub use error::{Error, Result};

/// Identifier of a player, as given in the spec file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PlayerId(pub u32);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
