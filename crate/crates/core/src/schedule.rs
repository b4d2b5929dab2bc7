//! Pairwise best-shot times and the sorted battlefield schedule.
//!
//! For every unordered pair of players the crossing time is the first moment
//! at which `P_i(t) + P_j(t) >= 1`: before it, waiting is better for both;
//! from then on, shooting beats waiting. Sorting all `C(n, 2)` crossing times
//! gives the global battlefield schedule, and filtering it by player gives
//! that player's `n - 1` engagements.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bisect::first_true;
use crate::curve::SuccessCurve;
use crate::error::{Error, Result};
use crate::PlayerId;

/// Crossing-time tolerance used when none is configured.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An unordered pair of distinct players, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pair {
    low: PlayerId,
    high: PlayerId,
}

impl Pair {
    pub fn new(a: PlayerId, b: PlayerId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { low: a, high: b }),
            std::cmp::Ordering::Greater => Some(Self { low: b, high: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn low(&self) -> PlayerId {
        self.low
    }

    pub fn high(&self) -> PlayerId {
        self.high
    }

    pub fn contains(&self, p: PlayerId) -> bool {
        self.low == p || self.high == p
    }

    /// The other member of the pair, if `p` belongs to it.
    pub fn opponent_of(&self, p: PlayerId) -> Option<PlayerId> {
        if p == self.low {
            Some(self.high)
        } else if p == self.high {
            Some(self.low)
        } else {
            None
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.low, self.high)
    }
}

/// One pairwise engagement slot: battlefield `m` opens at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Battlefield {
    /// 1-based position in the sorted schedule.
    pub m: usize,
    pub pair: Pair,
    /// Crossing time. Infinite for a dormant pair of two spent players,
    /// which never opens.
    pub time: f64,
}

/// First `t` with `P_i(t) + P_j(t) >= 1`, to within `tol`.
///
/// The search bracket ends at the smallest horizon among the non-zero
/// curves, where that curve reaches 1. When one curve is zero this is the
/// other curve's `t_max`.
pub fn pairwise_time(curve_i: &SuccessCurve, curve_j: &SuccessCurve, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let hi = match (curve_i.is_zero(), curve_j.is_zero()) {
        (true, true) => return Err(Error::NoCrossing),
        (true, false) => curve_j.t_max(),
        (false, true) => curve_i.t_max(),
        (false, false) => curve_i.t_max().min(curve_j.t_max()),
    };
    Ok(first_true(0.0, hi, tol, |t| {
        curve_i.prob_at(t) + curve_j.prob_at(t) >= 1.0
    }))
}

/// The sorted list of all pairwise battlefields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSchedule {
    battlefields: Vec<Battlefield>,
    players: Vec<PlayerId>,
}

impl PairSchedule {
    /// Computes every pairwise crossing time and sorts ascending by time,
    /// breaking ties by pair order.
    pub fn build(curves: &BTreeMap<PlayerId, SuccessCurve>, tol: f64) -> Result<Self> {
        Self::assemble(curves, tol, false)
    }

    /// Like [`PairSchedule::build`], but a pair of two zero curves becomes a
    /// dormant battlefield at infinite time instead of an error. Used by the
    /// game engine, where two spent players can both still be alive.
    pub fn build_allowing_dormant(
        curves: &BTreeMap<PlayerId, SuccessCurve>,
        tol: f64,
    ) -> Result<Self> {
        Self::assemble(curves, tol, true)
    }

    fn assemble(
        curves: &BTreeMap<PlayerId, SuccessCurve>,
        tol: f64,
        allow_dormant: bool,
    ) -> Result<Self> {
        if curves.len() < 2 {
            return Err(Error::TooFewPlayers(curves.len()));
        }
        let entries: Vec<_> = curves.iter().collect();
        let mut battlefields = Vec::with_capacity(entries.len() * (entries.len() - 1) / 2);
        for (a, (&pa, ca)) in entries.iter().enumerate() {
            for &(&pb, cb) in &entries[a + 1..] {
                let time = match pairwise_time(ca, cb, tol) {
                    Ok(t) => t,
                    Err(Error::NoCrossing) if allow_dormant => f64::INFINITY,
                    Err(e) => return Err(e),
                };
                let pair = Pair::new(pa, pb).expect("map keys are distinct");
                battlefields.push(Battlefield { m: 0, pair, time });
            }
        }
        battlefields.sort_by(|x, y| x.time.total_cmp(&y.time).then(x.pair.cmp(&y.pair)));
        for (idx, bf) in battlefields.iter_mut().enumerate() {
            bf.m = idx + 1;
        }
        Ok(Self {
            battlefields,
            players: curves.keys().copied().collect(),
        })
    }

    pub fn battlefields(&self) -> &[Battlefield] {
        &self.battlefields
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn n_players(&self) -> usize {
        self.players.len()
    }

    pub fn len(&self) -> usize {
        self.battlefields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.battlefields.is_empty()
    }

    pub fn contains_player(&self, p: PlayerId) -> bool {
        self.players.binary_search(&p).is_ok()
    }

    /// Battlefield by its 1-based index.
    pub fn get(&self, m: usize) -> Result<&Battlefield> {
        m.checked_sub(1)
            .and_then(|idx| self.battlefields.get(idx))
            .ok_or(Error::BadBattlefield(m))
    }

    /// The `n - 1` battlefields involving `player`, in schedule order.
    pub fn player_schedule(&self, player: PlayerId) -> Result<Vec<Battlefield>> {
        if !self.contains_player(player) {
            return Err(Error::UnknownPlayer(player));
        }
        Ok(self
            .battlefields
            .iter()
            .filter(|bf| bf.pair.contains(player))
            .copied()
            .collect())
    }
}
