//! Cumulative success-probability curves.
//!
//! A [`SuccessCurve`] maps elapsed time to the probability that a shot fired
//! at that moment hits. Every curve is monotone nondecreasing on
//! `[0, t_max]`, reaches exactly 1 at `t_max`, and saturates at 1 beyond it.
//! The one exception is the zero curve, which is what a shooter holds once
//! their last bullet is spent.

use std::fmt;
use std::sync::Arc;

use crate::bisect::first_true;
use crate::error::{Error, Result};

/// Slack allowed on the final table knot before it is rejected as
/// unnormalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Linear,
    Power,
    ExpSaturating,
    Table,
    Zero,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurveKind::Linear => "linear",
            CurveKind::Power => "power",
            CurveKind::ExpSaturating => "expsat",
            CurveKind::Table => "table",
            CurveKind::Zero => "zero",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Linear,
    Power { k: f64 },
    ExpSaturating { rate: f64 },
    Table { knots: Arc<[(f64, f64)]> },
    Zero,
}

/// A normalized, monotone success-probability curve `P(t)`.
///
/// Curves are immutable values; the game engine handles probability resets
/// by shifting the clock it evaluates them with.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve {
    t_max: f64,
    shape: Shape,
}

fn check_horizon(t_max: f64) -> Result<()> {
    if t_max.is_finite() && t_max > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCurve(format!(
            "t_max must be positive and finite, got {t_max}"
        )))
    }
}

impl SuccessCurve {
    /// `P(t) = t / t_max`.
    pub fn linear(t_max: f64) -> Result<Self> {
        check_horizon(t_max)?;
        Ok(Self {
            t_max,
            shape: Shape::Linear,
        })
    }

    /// `P(t) = (t / t_max)^k`.
    pub fn power(t_max: f64, k: f64) -> Result<Self> {
        check_horizon(t_max)?;
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "power exponent k must be positive, got {k}"
            )));
        }
        Ok(Self {
            t_max,
            shape: Shape::Power { k },
        })
    }

    /// `P(t) = (1 - e^{-rt}) / (1 - e^{-r t_max})`.
    pub fn exp_saturating(t_max: f64, rate: f64) -> Result<Self> {
        check_horizon(t_max)?;
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "saturation rate must be positive, got {rate}"
            )));
        }
        Ok(Self {
            t_max,
            shape: Shape::ExpSaturating { rate },
        })
    }

    /// Piecewise-linear curve through `(time, probability)` knots.
    ///
    /// Knot times must be strictly increasing and probabilities
    /// nondecreasing within `[0, 1]`. The last knot fixes `t_max` and must
    /// carry probability 1. Before the first knot the curve holds the first
    /// knot's probability.
    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        let Some(&(t_last, p_last)) = knots.last() else {
            return Err(Error::InvalidCurve("table needs at least one knot".into()));
        };
        for (idx, &(t, p)) in knots.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "knot {idx}: time must be finite and nonnegative, got {t}"
                )));
            }
            if !(0.0..=1.0 + NORMALIZATION_TOL).contains(&p) {
                return Err(Error::InvalidCurve(format!(
                    "knot {idx}: probability {p} outside [0, 1]"
                )));
            }
        }
        for (idx, pair) in knots.windows(2).enumerate() {
            let ((t0, p0), (t1, p1)) = (pair[0], pair[1]);
            if t1 <= t0 {
                return Err(Error::InvalidCurve(format!(
                    "knot {}: times must be strictly increasing ({t0} then {t1})",
                    idx + 1
                )));
            }
            if p1 < p0 {
                return Err(Error::InvalidCurve(format!(
                    "knot {}: probabilities must be nondecreasing ({p0} then {p1})",
                    idx + 1
                )));
            }
        }
        if (p_last - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidCurve(format!(
                "last knot must reach probability 1 (normalization), got {p_last}"
            )));
        }
        check_horizon(t_last)?;
        let mut knots = knots;
        if let Some(last) = knots.last_mut() {
            last.1 = 1.0;
        }
        Ok(Self {
            t_max: t_last,
            shape: Shape::Table {
                knots: knots.into(),
            },
        })
    }

    /// The identically-zero curve of a spent shooter.
    pub fn zero(t_max: f64) -> Result<Self> {
        check_horizon(t_max)?;
        Ok(Self {
            t_max,
            shape: Shape::Zero,
        })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn kind(&self) -> CurveKind {
        match self.shape {
            Shape::Linear => CurveKind::Linear,
            Shape::Power { .. } => CurveKind::Power,
            Shape::ExpSaturating { .. } => CurveKind::ExpSaturating,
            Shape::Table { .. } => CurveKind::Table,
            Shape::Zero => CurveKind::Zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, Shape::Zero)
    }

    /// Table knots, if this is a table curve.
    pub fn knots(&self) -> Option<&[(f64, f64)]> {
        match &self.shape {
            Shape::Table { knots } => Some(knots),
            _ => None,
        }
    }

    /// `P(t)`; rejects negative times.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.prob_at(t))
    }

    /// Infallible evaluation for callers that already hold a valid time.
    /// Negative inputs are treated as 0.
    pub fn prob_at(&self, t: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if t >= self.t_max {
            return 1.0;
        }
        let t = t.max(0.0);
        let p = match &self.shape {
            Shape::Linear => t / self.t_max,
            Shape::Power { k } => (t / self.t_max).powf(*k),
            Shape::ExpSaturating { rate } => (-rate * t).exp_m1() / (-rate * self.t_max).exp_m1(),
            Shape::Table { knots } => interpolate(knots, t),
            Shape::Zero => 0.0,
        };
        p.clamp(0.0, 1.0)
    }

    /// Smallest `t` in `[0, t_max]` with `P(t) >= p`, located to within `tol`.
    pub fn find_level(&self, p: f64, tol: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidLevel(p));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        if self.is_zero() {
            return Err(Error::LevelUnreachable(p));
        }
        Ok(first_true(0.0, self.t_max, tol, |t| self.prob_at(t) >= p))
    }

    /// The zero curve over the same horizon.
    pub fn zeroed(&self) -> Self {
        Self {
            t_max: self.t_max,
            shape: Shape::Zero,
        }
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> f64 {
    let first = knots[0];
    if t <= first.0 {
        return first.1;
    }
    // index of the first knot strictly after t
    let hi = knots.partition_point(|&(kt, _)| kt <= t);
    if hi >= knots.len() {
        return knots[knots.len() - 1].1;
    }
    let (t0, p0) = knots[hi - 1];
    let (t1, p1) = knots[hi];
    p0 + (p1 - p0) * (t - t0) / (t1 - t0)
}
