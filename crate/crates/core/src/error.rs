use thiserror::Error;

use crate::PlayerId;

/// Errors raised by the analytic and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid renewal law: {0}")]
    InvalidRenewal(String),
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("probability level {0} outside [0, 1]")]
    InvalidLevel(f64),
    #[error("level {0} is never reached by a zero curve")]
    LevelUnreachable(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("both curves are identically zero; no crossing time exists")]
    NoCrossing,
    #[error("a schedule needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("player {player} does not take part in battlefield {m}")]
    NotInBattlefield { player: PlayerId, m: usize },
    #[error("battlefield index {0} out of range")]
    BadBattlefield(usize),
    #[error("bullet count must be at least 1")]
    NoBullets,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("illegal shot: {0}")]
    IllegalShot(String),
    #[error("time {t} precedes the clock origin {origin}")]
    BeforeClockOrigin { t: f64, origin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
