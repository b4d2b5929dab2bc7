//! The game-state machine.
//!
//! A [`GameState`] is an immutable value. [`GameState::apply_shot`] takes
//! the outcome as an input and returns the successor state, so any sequence
//! of hits and misses can be replayed exactly.
//!
//! After every shot the shooter spends a bullet (and gets the zero curve
//! once none remain), a hit target leaves the game together with all of its
//! pairs, the schedule is rebuilt over the survivors, and the shared curve
//! clock restarts at the time of the shot.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::battlefield::{best_battlefield, Objective, TargetPlan};
use crate::config::GameSpec;
use crate::curve::SuccessCurve;
use crate::error::{Error, Result};
use crate::schedule::PairSchedule;
use crate::PlayerId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Hit,
    Miss,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Hit => "hit",
            Outcome::Miss => "miss",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEvent {
    pub global_time: f64,
    pub local_time: f64,
    pub shooter: PlayerId,
    pub target: PlayerId,
    pub p_hit: f64,
    pub outcome: Outcome,
}

/// Whether the game is over, and why.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Running,
    /// Nobody holds a bullet any more.
    BulletsExhausted,
    /// At most one player is alive, so no legal target exists.
    LoneSurvivor,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::Running
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    alive: BTreeSet<PlayerId>,
    bullets: BTreeMap<PlayerId, u32>,
    curves: BTreeMap<PlayerId, SuccessCurve>,
    pair_set: Option<PairSchedule>,
    tolerance: f64,
    clock_origin: f64,
    global_time: f64,
    shot_log: Vec<ShotEvent>,
}

impl GameState {
    /// Everyone alive and armed; the schedule built from the initial curves.
    pub fn new(spec: &GameSpec) -> Result<Self> {
        let curves = spec.curves();
        let pair_set = PairSchedule::build(&curves, spec.tolerance())?;
        Ok(Self {
            alive: curves.keys().copied().collect(),
            bullets: spec.players().iter().map(|p| (p.id, p.bullets)).collect(),
            curves,
            pair_set: Some(pair_set),
            tolerance: spec.tolerance(),
            clock_origin: 0.0,
            global_time: 0.0,
            shot_log: Vec::new(),
        })
    }

    pub fn alive(&self) -> &BTreeSet<PlayerId> {
        &self.alive
    }

    pub fn is_alive(&self, p: PlayerId) -> bool {
        self.alive.contains(&p)
    }

    pub fn bullets(&self, p: PlayerId) -> u32 {
        self.bullets.get(&p).copied().unwrap_or(0)
    }

    pub fn is_armed(&self, p: PlayerId) -> bool {
        self.is_alive(p) && self.bullets(p) > 0
    }

    /// Alive players holding at least one bullet, ascending.
    pub fn armed(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.alive.iter().copied().filter(|&p| self.bullets(p) > 0)
    }

    /// Current curves of the alive players.
    pub fn curves(&self) -> &BTreeMap<PlayerId, SuccessCurve> {
        &self.curves
    }

    /// Pair schedule over the alive players; `None` once fewer than two
    /// remain.
    pub fn pair_set(&self) -> Option<&PairSchedule> {
        self.pair_set.as_ref()
    }

    pub fn clock_origin(&self) -> f64 {
        self.clock_origin
    }

    pub fn global_time(&self) -> f64 {
        self.global_time
    }

    pub fn shot_log(&self) -> &[ShotEvent] {
        &self.shot_log
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Curve-clock time for a global instant.
    pub fn local_time(&self, global_t: f64) -> Result<f64> {
        if global_t < self.clock_origin || global_t.is_nan() {
            return Err(Error::BeforeClockOrigin {
                t: global_t,
                origin: self.clock_origin,
            });
        }
        Ok(global_t - self.clock_origin)
    }

    pub fn status(&self) -> Status {
        if self.alive.len() <= 1 {
            Status::LoneSurvivor
        } else if self.armed().next().is_none() {
            Status::BulletsExhausted
        } else {
            Status::Running
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.status().is_terminal()
    }

    /// Best battlefield for `player` in the current schedule.
    pub fn plan(&self, player: PlayerId, objective: Objective) -> Result<TargetPlan> {
        let schedule = self.pair_set.as_ref().ok_or(Error::UnknownPlayer(player))?;
        best_battlefield(schedule, &self.curves, player, objective)
    }

    /// `shooter` fires at `target` at global time `at`.
    pub fn apply_shot(
        &self,
        shooter: PlayerId,
        target: PlayerId,
        at: f64,
        outcome: Outcome,
    ) -> Result<Self> {
        if !self.is_alive(shooter) {
            return Err(Error::IllegalShot(format!(
                "shooter {shooter} is not alive"
            )));
        }
        if self.bullets(shooter) == 0 {
            return Err(Error::IllegalShot(format!(
                "shooter {shooter} has no bullet left"
            )));
        }
        if shooter == target {
            return Err(Error::IllegalShot(format!(
                "player {shooter} cannot target itself"
            )));
        }
        if !self.is_alive(target) {
            return Err(Error::IllegalShot(format!("target {target} is not alive")));
        }
        if at < self.global_time || !at.is_finite() {
            return Err(Error::IllegalShot(format!(
                "shot time {at} precedes the current time {}",
                self.global_time
            )));
        }
        let local_time = self.local_time(at)?;
        let p_hit = self.curves[&shooter].prob_at(local_time);

        let mut next = self.clone();
        let left = next
            .bullets
            .get_mut(&shooter)
            .expect("alive players have an entry");
        *left -= 1;
        if *left == 0 {
            let spent = next.curves[&shooter].zeroed();
            next.curves.insert(shooter, spent);
        }
        if outcome == Outcome::Hit {
            next.alive.remove(&target);
            next.bullets.remove(&target);
            next.curves.remove(&target);
        }
        next.pair_set = if next.alive.len() >= 2 {
            Some(PairSchedule::build_allowing_dormant(
                &next.curves,
                next.tolerance,
            )?)
        } else {
            None
        };
        next.global_time = at;
        next.clock_origin = at;
        next.shot_log.push(ShotEvent {
            global_time: at,
            local_time,
            shooter,
            target,
            p_hit,
            outcome,
        });
        Ok(next)
    }
}
