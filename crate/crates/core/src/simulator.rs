//! Seeded Monte-Carlo playouts of whole games.
//!
//! Each armed player acts at the epochs of their own renewal process on the
//! global clock. Epoch processes keep running across status changes; only
//! the curve clock resets. At each epoch the owner checks their current plan
//! and either fires or waits. Plans are recomputed after every shot.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::battlefield::Objective;
use crate::config::GameSpec;
use crate::engine::{GameState, Outcome, ShotEvent, Status};
use crate::error::{Error, Result};
use crate::fluctuation::{batch_rng, recommend_shot, Epoch};
use crate::PlayerId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Fire at the first own epoch at or past the best battlefield's time.
    Threshold,
    /// Like `Threshold`, but fires one epoch early when the expected hit
    /// chance at the pre-exit epoch is at least the one at the exit epoch.
    Versatile,
    /// Baseline: wait until the own curve reaches 1.
    NaiveMax,
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Threshold => "threshold",
            PolicyKind::Versatile => "versatile",
            PolicyKind::NaiveMax => "naive_max",
        })
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "threshold" => Ok(PolicyKind::Threshold),
            "versatile" => Ok(PolicyKind::Versatile),
            "naive_max" | "naive-max" => Ok(PolicyKind::NaiveMax),
            other => Err(Error::InvalidParameter(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Policy {
    pub kind: PolicyKind,
    pub objective: Objective,
    /// Samples behind each pre-exit comparison of the versatile policy.
    pub mc_samples: u64,
    pub mc_seed: u64,
}

impl Policy {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            objective: Objective::Max,
            mc_samples: 2000,
            mc_seed: 0,
        }
    }

    pub fn threshold() -> Self {
        Self::new(PolicyKind::Threshold)
    }

    pub fn versatile() -> Self {
        Self::new(PolicyKind::Versatile)
    }

    pub fn naive_max() -> Self {
        Self::new(PolicyKind::NaiveMax)
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayoutResult {
    pub survivors: BTreeSet<PlayerId>,
    pub shot_log: Vec<ShotEvent>,
    /// Global time of the last shot, 0 if nobody fired.
    pub duration: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy)]
struct Decision {
    target: PlayerId,
    planned_local: f64,
    epoch: Epoch,
}

fn decide(
    spec: &GameSpec,
    state: &GameState,
    policy: &Policy,
    player: PlayerId,
) -> Result<Decision> {
    let plan = state.plan(player, policy.objective)?;
    let me = spec.player(player).ok_or(Error::UnknownPlayer(player))?;
    match policy.kind {
        PolicyKind::Threshold => Ok(Decision {
            target: plan.target,
            planned_local: plan.t_star,
            epoch: Epoch::Exit,
        }),
        PolicyKind::NaiveMax => Ok(Decision {
            target: plan.target,
            planned_local: me.curve.t_max(),
            epoch: Epoch::Exit,
        }),
        PolicyKind::Versatile => {
            let epoch = if plan.t_star > 0.0 {
                let opp = spec
                    .player(plan.target)
                    .ok_or(Error::UnknownPlayer(plan.target))?;
                recommend_shot(
                    &me.renewal,
                    &opp.renewal,
                    &state.curves()[&player],
                    plan.t_star,
                    policy.mc_samples,
                    policy.mc_seed,
                )?
                .epoch
            } else {
                Epoch::Exit
            };
            Ok(Decision {
                target: plan.target,
                planned_local: plan.t_star,
                epoch,
            })
        }
    }
}

fn decide_all(
    spec: &GameSpec,
    state: &GameState,
    policy: &Policy,
) -> Result<BTreeMap<PlayerId, Decision>> {
    if state.is_terminal() {
        return Ok(BTreeMap::new());
    }
    state
        .armed()
        .map(|p| Ok((p, decide(spec, state, policy, p)?)))
        .collect()
}

/// Plays one game to the end.
pub fn playout<R: Rng>(spec: &GameSpec, policy: &Policy, rng: &mut R) -> Result<PlayoutResult> {
    let mut state = GameState::new(spec)?;
    let mut next_epoch: BTreeMap<PlayerId, f64> = spec
        .players()
        .iter()
        .map(|p| (p.id, p.renewal.sample(rng)))
        .collect();
    let mut decisions = decide_all(spec, &state, policy)?;

    while !state.is_terminal() {
        // earliest epoch among armed players; BTreeMap order breaks ties by id
        let (player, now) = state
            .armed()
            .map(|p| (p, next_epoch[&p]))
            .fold(None, |best: Option<(PlayerId, f64)>, (p, t)| match best {
                Some((_, bt)) if bt <= t => best,
                _ => Some((p, t)),
            })
            .expect("a running game has an armed player");
        let renewal = &spec.player(player).expect("spec player").renewal;
        let following = now + renewal.sample(rng);
        next_epoch.insert(player, following);

        let decision = decisions[&player];
        let local = state.local_time(now)?;
        let fire = match decision.epoch {
            Epoch::Exit => local >= decision.planned_local,
            Epoch::PreExit => {
                local >= decision.planned_local
                    || following - state.clock_origin() >= decision.planned_local
            }
        };
        if !fire {
            continue;
        }
        let p_hit = state.curves()[&player].prob_at(local);
        let outcome = if rng.random::<f64>() < p_hit {
            Outcome::Hit
        } else {
            Outcome::Miss
        };
        state = state.apply_shot(player, decision.target, now, outcome)?;
        decisions = decide_all(spec, &state, policy)?;
    }

    Ok(PlayoutResult {
        survivors: state.alive().clone(),
        shot_log: state.shot_log().to_vec(),
        duration: state.shot_log().last().map_or(0.0, |e| e.global_time),
        status: state.status(),
    })
}

/// Per-player rates with binomial standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayerEstimate {
    pub player: PlayerId,
    pub survival_rate: f64,
    pub survival_stderr: f64,
    /// Fraction of runs in which the player landed at least one hit.
    pub hit_rate: f64,
    pub hit_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub runs: u64,
    pub seed: u64,
    pub policy: Policy,
    pub players: Vec<PlayerEstimate>,
    pub mean_duration: f64,
    pub mean_shots: f64,
}

fn binomial(successes: u64, runs: u64) -> (f64, f64) {
    let p = successes as f64 / runs as f64;
    (p, (p * (1.0 - p) / runs as f64).sqrt())
}

/// Runs `runs` playouts, run `k` on stream `k` of `seed`, in run order.
pub fn playouts(
    spec: &GameSpec,
    policy: &Policy,
    runs: u64,
    seed: u64,
) -> Result<Vec<PlayoutResult>> {
    (0..runs)
        .into_par_iter()
        .map(|k| playout(spec, policy, &mut batch_rng(seed, k)))
        .collect()
}

/// Survival and hit rates over independent playouts.
pub fn estimate(spec: &GameSpec, policy: &Policy, runs: u64, seed: u64) -> Result<Estimate> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    let ids: Vec<PlayerId> = spec.players().iter().map(|p| p.id).collect();
    let summaries: Vec<(Vec<bool>, Vec<bool>, f64, usize)> = (0..runs)
        .into_par_iter()
        .map(|k| {
            let r = playout(spec, policy, &mut batch_rng(seed, k))?;
            let survived = ids.iter().map(|p| r.survivors.contains(p)).collect();
            let hit = ids
                .iter()
                .map(|p| {
                    r.shot_log
                        .iter()
                        .any(|e| e.shooter == *p && e.outcome == Outcome::Hit)
                })
                .collect();
            Ok((survived, hit, r.duration, r.shot_log.len()))
        })
        .collect::<Result<_>>()?;

    let mut survive = vec![0u64; ids.len()];
    let mut hits = vec![0u64; ids.len()];
    let mut duration = 0.0;
    let mut shots = 0usize;
    for (s, h, d, n) in &summaries {
        for (idx, (&sv, &hv)) in s.iter().zip(h).enumerate() {
            survive[idx] += sv as u64;
            hits[idx] += hv as u64;
        }
        duration += d;
        shots += n;
    }
    let players = ids
        .iter()
        .enumerate()
        .map(|(idx, &player)| {
            let (survival_rate, survival_stderr) = binomial(survive[idx], runs);
            let (hit_rate, hit_stderr) = binomial(hits[idx], runs);
            PlayerEstimate {
                player,
                survival_rate,
                survival_stderr,
                hit_rate,
                hit_stderr,
            }
        })
        .collect();
    Ok(Estimate {
        runs,
        seed,
        policy: *policy,
        players,
        mean_duration: duration / runs as f64,
        mean_shots: shots as f64 / runs as f64,
    })
}
