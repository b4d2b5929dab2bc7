//! Actual success probabilities, the battlefield indicator, and target
//! selection.
//!
//! A player's raw curve overstates their chance on a late battlefield: the
//! opponent may already have had earlier engagements. The actual success
//! probability discounts by the opponent's curve at every earlier battlefield
//! the opponent takes part in, and the indicator `q` compares the two
//! directed probabilities of one battlefield.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::SuccessCurve;
use crate::error::{Error, Result};
use crate::schedule::PairSchedule;
use crate::PlayerId;

/// How a player ranks their battlefields by indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Prefer the battlefield with the largest advantage ratio.
    #[default]
    Max,
    /// Literal argmin ranking.
    Min,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Max => "max",
            Objective::Min => "min",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "max_q" => Ok(Objective::Max),
            "min" | "min_q" => Ok(Objective::Min),
            other => Err(Error::InvalidParameter(format!(
                "unknown objective {other:?}"
            ))),
        }
    }
}

/// Directed score of one battlefield from the shooter's side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BattlefieldScore {
    pub m: usize,
    pub shooter: PlayerId,
    pub opponent: PlayerId,
    pub time: f64,
    pub p_shoot: f64,
    /// `p_shoot` over the opponent's directed probability. Infinite when only
    /// the opponent's side is zero; 1 when both are.
    pub q: f64,
}

/// A chosen battlefield, target, and shooting time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetPlan {
    pub m_star: usize,
    pub target: PlayerId,
    pub t_star: f64,
    pub p_shoot: f64,
    pub q: f64,
}

impl From<&BattlefieldScore> for TargetPlan {
    fn from(s: &BattlefieldScore) -> Self {
        Self {
            m_star: s.m,
            target: s.opponent,
            t_star: s.time,
            p_shoot: s.p_shoot,
            q: s.q,
        }
    }
}

fn curve_of(curves: &BTreeMap<PlayerId, SuccessCurve>, p: PlayerId) -> Result<&SuccessCurve> {
    curves.get(&p).ok_or(Error::UnknownPlayer(p))
}

/// `1 - P_j(t^m) * prod_{h<m, j in battlefield h} P_j(t^h)` where `j` is
/// the opponent of `shooter` in battlefield `m`.
pub fn success_prob(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    shooter: PlayerId,
    m: usize,
) -> Result<f64> {
    let bf = schedule.get(m)?;
    let opponent = bf
        .pair
        .opponent_of(shooter)
        .ok_or(Error::NotInBattlefield { player: shooter, m })?;
    let curve = curve_of(curves, opponent)?;
    let history: f64 = schedule.battlefields()[..m - 1]
        .iter()
        .filter(|h| h.pair.contains(opponent))
        .map(|h| curve.prob_at(h.time))
        .product();
    Ok(1.0 - curve.prob_at(bf.time) * history)
}

/// `q = P_shooter / P_opponent` on battlefield `m`.
pub fn indicator(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    shooter: PlayerId,
    m: usize,
) -> Result<f64> {
    Ok(score(schedule, curves, shooter, m)?.q)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

fn score(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    shooter: PlayerId,
    m: usize,
) -> Result<BattlefieldScore> {
    let bf = schedule.get(m)?;
    let opponent = bf
        .pair
        .opponent_of(shooter)
        .ok_or(Error::NotInBattlefield { player: shooter, m })?;
    let forward = success_prob(schedule, curves, shooter, m)?;
    let backward = success_prob(schedule, curves, opponent, m)?;
    Ok(BattlefieldScore {
        m,
        shooter,
        opponent,
        time: bf.time,
        p_shoot: forward,
        q: ratio(forward, backward),
    })
}

/// Scores of every battlefield `player` takes part in, in schedule order.
pub fn player_scores(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    player: PlayerId,
) -> Result<Vec<BattlefieldScore>> {
    schedule
        .player_schedule(player)?
        .iter()
        .map(|bf| score(schedule, curves, player, bf.m))
        .collect()
}

/// Orders scores best-first under `objective`; equal indicators keep the
/// smaller battlefield index first.
pub fn rank(scores: &[BattlefieldScore], objective: Objective) -> Vec<BattlefieldScore> {
    let mut ranked = scores.to_vec();
    ranked.sort_by(|a, b| {
        let by_q = match objective {
            Objective::Max => b.q.total_cmp(&a.q),
            Objective::Min => a.q.total_cmp(&b.q),
        };
        if by_q == Ordering::Equal {
            a.m.cmp(&b.m)
        } else {
            by_q
        }
    });
    ranked
}

/// The battlefield, target, and time `player` should commit to.
pub fn best_battlefield(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    player: PlayerId,
    objective: Objective,
) -> Result<TargetPlan> {
    let scores = player_scores(schedule, curves, player)?;
    rank(&scores, objective)
        .first()
        .map(TargetPlan::from)
        .ok_or(Error::UnknownPlayer(player))
}

/// Up to `bullets` battlefields for a player holding several bullets, best
/// first. With at least `n - 1` bullets every battlefield is returned.
pub fn multi_bullet_battlefields(
    schedule: &PairSchedule,
    curves: &BTreeMap<PlayerId, SuccessCurve>,
    player: PlayerId,
    bullets: u32,
    objective: Objective,
) -> Result<Vec<TargetPlan>> {
    if bullets < 1 {
        return Err(Error::NoBullets);
    }
    let scores = player_scores(schedule, curves, player)?;
    Ok(rank(&scores, objective)
        .iter()
        .take(bullets as usize)
        .map(TargetPlan::from)
        .collect())
}
