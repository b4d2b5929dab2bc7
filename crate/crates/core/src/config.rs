//! Game-spec files.
//!
//! ```json
//! {"players":[{"id":1,"curve":{"type":"linear","t_max":20},"bullets":1,
//!              "renewal":{"dist":"exponential","rate":1.0}}, ...],
//!  "tolerance":1e-9}
//! ```
//!
//! Parsing is two-staged: serde checks the JSON shape (syntax errors), then
//! every descriptor goes through its validated constructor (semantic errors,
//! reported with the offending field path).

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

use crate::curve::SuccessCurve;
use crate::fluctuation::RenewalProcess;
use crate::schedule::DEFAULT_TOLERANCE;
use crate::PlayerId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("spec syntax error: {0}")]
    Syntax(String),
    #[error("spec error at {path}: {message}")]
    Semantic { path: String, message: String },
}

impl SpecError {
    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        SpecError::Semantic {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

/// One validated player entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerSpec {
    pub id: PlayerId,
    pub curve: SuccessCurve,
    pub bullets: u32,
    pub renewal: RenewalProcess,
}

impl PlayerSpec {
    /// A player with one bullet and unit-rate exponential epochs.
    pub fn new(id: u32, curve: SuccessCurve) -> Self {
        Self {
            id: PlayerId(id),
            curve,
            bullets: 1,
            renewal: RenewalProcess::Exponential { rate: 1.0 },
        }
    }

    pub fn with_bullets(mut self, bullets: u32) -> Self {
        self.bullets = bullets;
        self
    }

    pub fn with_renewal(mut self, renewal: RenewalProcess) -> Self {
        self.renewal = renewal;
        self
    }
}

/// A validated game: at least two players with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    players: Vec<PlayerSpec>,
    tolerance: f64,
}

impl GameSpec {
    pub fn new(mut players: Vec<PlayerSpec>, tolerance: f64) -> Result<Self, SpecError> {
        if players.len() < 2 {
            return Err(SpecError::at(
                "players",
                format!("at least two players required, got {}", players.len()),
            ));
        }
        let mut seen = BTreeSet::new();
        for (idx, p) in players.iter().enumerate() {
            if p.id.0 == 0 {
                return Err(SpecError::at(
                    format!("players[{idx}].id"),
                    "ids must be positive",
                ));
            }
            if !seen.insert(p.id) {
                return Err(SpecError::at(
                    format!("players[{idx}].id"),
                    format!("duplicate player id {}", p.id),
                ));
            }
            if p.bullets < 1 {
                return Err(SpecError::at(
                    format!("players[{idx}].bullets"),
                    "every player needs at least one bullet",
                ));
            }
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(SpecError::at("tolerance", "must be positive and finite"));
        }
        players.sort_by_key(|p| p.id);
        Ok(Self { players, tolerance })
    }

    /// Players sorted by id.
    pub fn players(&self) -> &[PlayerSpec] {
        &self.players
    }

    pub fn player(&self, id: PlayerId) -> Option<&PlayerSpec> {
        self.players.iter().find(|p| p.id == id)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn curves(&self) -> BTreeMap<PlayerId, SuccessCurve> {
        self.players
            .iter()
            .map(|p| (p.id, p.curve.clone()))
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    players: Vec<RawPlayer>,
    tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlayer {
    id: u32,
    curve: RawCurve,
    bullets: Option<u32>,
    renewal: Option<RawRenewal>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    #[serde(rename = "type")]
    kind: String,
    t_max: Option<f64>,
    k: Option<f64>,
    rate: Option<f64>,
    knots: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRenewal {
    dist: String,
    rate: Option<f64>,
    period: Option<f64>,
    lo: Option<f64>,
    hi: Option<f64>,
    shape: Option<f64>,
    scale: Option<f64>,
}

fn need(v: Option<f64>, path: &str, field: &str) -> Result<f64, SpecError> {
    v.ok_or_else(|| SpecError::at(format!("{path}.{field}"), "missing required field"))
}

fn build_curve(raw: RawCurve, path: &str) -> Result<SuccessCurve, SpecError> {
    let invalid = |e: crate::Error| SpecError::at(path, e);
    match raw.kind.as_str() {
        "linear" => SuccessCurve::linear(need(raw.t_max, path, "t_max")?).map_err(invalid),
        "power" => SuccessCurve::power(need(raw.t_max, path, "t_max")?, need(raw.k, path, "k")?)
            .map_err(invalid),
        "expsat" => SuccessCurve::exp_saturating(
            need(raw.t_max, path, "t_max")?,
            need(raw.rate, path, "rate")?,
        )
        .map_err(invalid),
        "table" => {
            let knots = raw
                .knots
                .ok_or_else(|| SpecError::at(format!("{path}.knots"), "missing required field"))?;
            let curve = SuccessCurve::table(knots.into_iter().map(|[t, p]| (t, p)).collect())
                .map_err(|e| SpecError::at(format!("{path}.knots"), e))?;
            if let Some(t_max) = raw.t_max {
                if t_max != curve.t_max() {
                    return Err(SpecError::at(
                        format!("{path}.t_max"),
                        format!(
                            "t_max {t_max} differs from the last knot time {}",
                            curve.t_max()
                        ),
                    ));
                }
            }
            Ok(curve)
        }
        other => Err(SpecError::at(
            format!("{path}.type"),
            format!("unknown curve type {other:?}"),
        )),
    }
}

fn build_renewal(raw: RawRenewal, path: &str) -> Result<RenewalProcess, SpecError> {
    let invalid = |e: crate::Error| SpecError::at(path, e);
    match raw.dist.as_str() {
        "exponential" => {
            RenewalProcess::exponential(need(raw.rate, path, "rate")?).map_err(invalid)
        }
        "deterministic" => {
            RenewalProcess::deterministic(need(raw.period, path, "period")?).map_err(invalid)
        }
        "uniform" => RenewalProcess::uniform(need(raw.lo, path, "lo")?, need(raw.hi, path, "hi")?)
            .map_err(invalid),
        "gamma" => RenewalProcess::gamma(
            need(raw.shape, path, "shape")?,
            need(raw.scale, path, "scale")?,
        )
        .map_err(invalid),
        other => Err(SpecError::at(
            format!("{path}.dist"),
            format!("unknown renewal law {other:?}"),
        )),
    }
}

/// Parses and validates a JSON game spec.
pub fn parse_spec(text: &str) -> Result<GameSpec, SpecError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| SpecError::Syntax(e.to_string()))?;
    let mut players = Vec::with_capacity(raw.players.len());
    for (idx, rp) in raw.players.into_iter().enumerate() {
        let base = format!("players[{idx}]");
        let curve = build_curve(rp.curve, &format!("{base}.curve"))?;
        let renewal = match rp.renewal {
            Some(r) => build_renewal(r, &format!("{base}.renewal"))?,
            None => RenewalProcess::Exponential { rate: 1.0 },
        };
        players.push(PlayerSpec {
            id: PlayerId(rp.id),
            curve,
            bullets: rp.bullets.unwrap_or(1),
            renewal,
        });
    }
    GameSpec::new(players, raw.tolerance.unwrap_or(DEFAULT_TOLERANCE))
}
