//! Renewal decision epochs and their first passage over a threshold.
//!
//! Each player acts only at the epochs `T_k = tau_1 + ... + tau_k` of a
//! renewal process. For a threshold `U` (the crossing time of a
//! battlefield) the exit index is `nu = min{k >= 1 : T_k >= U}`; `T_nu` is
//! the exit time and `T_{nu-1}` the pre-exit time, with `T_0 = 0`.
//!
//! Exponential inter-arrivals have closed-form exit statistics. Every other
//! law goes through the Monte-Carlo estimators here, which split the sample
//! range into fixed batches, each with its own ChaCha stream derived from
//! the master seed. Batches run in parallel and are merged in index order,
//! so estimates are bit-identical for a fixed seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma};
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::SuccessCurve;
use crate::error::{Error, Result};

/// Samples per independent random stream.
pub const BATCH_SIZE: u64 = 4096;

/// Inter-arrival law of a player's decision epochs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum RenewalProcess {
    Exponential { rate: f64 },
    Deterministic { period: f64 },
    Uniform { lo: f64, hi: f64 },
    Gamma { shape: f64, scale: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRenewal(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold.is_finite() && threshold > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "threshold must be positive and finite, got {threshold}"
        )))
    }
}

impl RenewalProcess {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Self::Exponential { rate })
    }

    pub fn deterministic(period: f64) -> Result<Self> {
        positive("period", period)?;
        Ok(Self::Deterministic { period })
    }

    /// Uniform on `[lo, hi)`; `lo` must be strictly positive.
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        positive("lo", lo)?;
        if !(hi.is_finite() && hi > lo) {
            return Err(Error::InvalidRenewal(format!(
                "hi must exceed lo, got lo={lo} hi={hi}"
            )));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("scale", scale)?;
        Ok(Self::Gamma { shape, scale })
    }

    /// Mean inter-arrival time.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Deterministic { period } => period,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Gamma { shape, scale } => shape * scale,
        }
    }

    /// Laplace-Stieltjes transform `E[exp(-theta * tau)]`.
    pub fn lst(&self, theta: f64) -> Result<f64> {
        if theta.is_nan() || theta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "transform variable must be nonnegative, got {theta}"
            )));
        }
        Ok(match *self {
            Self::Exponential { rate } => rate / (rate + theta),
            Self::Deterministic { period } => (-theta * period).exp(),
            Self::Uniform { lo, hi } => {
                if theta == 0.0 {
                    1.0
                } else {
                    ((-theta * lo).exp() - (-theta * hi).exp()) / (theta * (hi - lo))
                }
            }
            Self::Gamma { shape, scale } => (1.0 + scale * theta).powf(-shape),
        })
    }

    /// Draws one strictly positive inter-arrival time.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let x = match *self {
                Self::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
                Self::Deterministic { period } => period,
                Self::Uniform { lo, hi } => rng.random_range(lo..hi),
                Self::Gamma { shape, scale } => Gamma::new(shape, scale)
                    .expect("validated parameters")
                    .sample(rng),
            };
            if x > 0.0 {
                return x;
            }
        }
    }
}

/// One first passage over a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitSample {
    /// Exit index, at least 1.
    pub nu: u64,
    /// `T_{nu-1}`, which is 0 when the first epoch already exits.
    pub t_pre: f64,
    /// `T_nu`.
    pub t_exit: f64,
}

/// Means of exit time, pre-exit time, and exit index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitStats {
    pub mean_exit: f64,
    pub mean_pre_exit: f64,
    pub mean_nu: f64,
    pub stderr_exit: f64,
    pub stderr_pre_exit: f64,
    pub stderr_nu: f64,
    /// `ceil(E[T_nu] / E[tau])`, the usual approximation of `E[nu]`.
    pub nu_ceiling_approx: f64,
    /// Monte-Carlo sample count; `None` for closed forms.
    pub samples: Option<u64>,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Closed-form exit statistics for exponential epochs with rate `lambda`.
///
/// By memorylessness the overshoot past the threshold is again
/// exponential, and the age at the threshold is exponential truncated at the
/// threshold itself.
pub fn exit_stats_exponential(lambda: f64, threshold: f64) -> Result<ExitStats> {
    positive("rate", lambda)?;
    check_threshold(threshold)?;
    let mean_exit = threshold + 1.0 / lambda;
    Ok(ExitStats {
        mean_exit,
        mean_pre_exit: threshold + (-lambda * threshold).exp_m1() / lambda,
        mean_nu: 1.0 + lambda * threshold,
        stderr_exit: 0.0,
        stderr_pre_exit: 0.0,
        stderr_nu: 0.0,
        nu_ceiling_approx: (mean_exit * lambda).ceil(),
        samples: None,
    })
}

fn exit_of(process: &RenewalProcess, threshold: f64, rng: &mut impl Rng) -> ExitSample {
    if let RenewalProcess::Deterministic { period } = *process {
        // lattice crossing computed directly; no accumulated rounding
        let mut k = ((threshold / period).ceil() as u64).max(1);
        while (k as f64) * period < threshold {
            k += 1;
        }
        while k > 1 && ((k - 1) as f64) * period >= threshold {
            k -= 1;
        }
        return ExitSample {
            nu: k,
            t_pre: (k - 1) as f64 * period,
            t_exit: k as f64 * period,
        };
    }
    let mut nu = 0u64;
    let mut t_pre = 0.0;
    let mut t = 0.0;
    while nu == 0 || t < threshold {
        t_pre = t;
        t += process.sample(rng);
        nu += 1;
    }
    ExitSample {
        nu,
        t_pre,
        t_exit: t,
    }
}

/// Runs the epochs of `process` until they first reach `threshold`.
pub fn sample_exit<R: Rng>(
    process: &RenewalProcess,
    threshold: f64,
    rng: &mut R,
) -> Result<ExitSample> {
    check_threshold(threshold)?;
    Ok(exit_of(process, threshold, rng))
}

/// The random stream for batch `batch` under `seed`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64) * (other.n as f64) / n as f64,
        }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        }
    }

    fn estimate(&self) -> MeanEstimate {
        MeanEstimate {
            mean: self.mean,
            stderr: self.stderr(),
            samples: self.n,
        }
    }
}

/// Moments of `K` statistics over `n` draws of `draw`, batch-parallel.
fn moments<const K: usize, F>(n: u64, seed: u64, draw: F) -> [Moments; K]
where
    F: Fn(&mut ChaCha8Rng) -> [f64; K] + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    let parts: Vec<[Moments; K]> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(seed, b);
            let count = BATCH_SIZE.min(n - b * BATCH_SIZE);
            let mut acc = [Moments::default(); K];
            for _ in 0..count {
                let xs = draw(&mut rng);
                for (m, x) in acc.iter_mut().zip(xs) {
                    m.push(x);
                }
            }
            acc
        })
        .collect();
    parts
        .into_iter()
        .fold([Moments::default(); K], |mut tot, part| {
            for (t, p) in tot.iter_mut().zip(part) {
                *t = t.merge(p);
            }
            tot
        })
}

fn check_samples(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// Monte-Carlo exit statistics for any renewal law.
pub fn mc_exit_stats(
    process: &RenewalProcess,
    threshold: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ExitStats> {
    check_threshold(threshold)?;
    check_samples(n_samples)?;
    let [exit, pre, nu] = moments(n_samples, seed, |rng| {
        let s = exit_of(process, threshold, rng);
        [s.t_exit, s.t_pre, s.nu as f64]
    });
    Ok(ExitStats {
        mean_exit: exit.mean,
        mean_pre_exit: pre.mean,
        mean_nu: nu.mean,
        stderr_exit: exit.stderr(),
        stderr_pre_exit: pre.stderr(),
        stderr_nu: nu.stderr(),
        nu_ceiling_approx: (exit.mean / process.mean()).ceil(),
        samples: Some(n_samples),
    })
}

/// Monte-Carlo mean of `weight(sample_i)` on the event that player `i`
/// exits no later than player `j`, both facing the same threshold.
///
/// Each draw samples `i` then `j` from the same stream, so two calls with
/// the same seed see the same paired samples (common random numbers).
pub fn mc_confined_mean<W>(
    process_i: &RenewalProcess,
    process_j: &RenewalProcess,
    threshold: f64,
    n_samples: u64,
    seed: u64,
    weight: W,
) -> Result<MeanEstimate>
where
    W: Fn(&ExitSample) -> f64 + Sync,
{
    check_threshold(threshold)?;
    check_samples(n_samples)?;
    let [m] = moments(n_samples, seed, |rng| {
        let si = exit_of(process_i, threshold, rng);
        let sj = exit_of(process_j, threshold, rng);
        [if si.t_exit <= sj.t_exit {
            weight(&si)
        } else {
            0.0
        }]
    });
    Ok(m.estimate())
}

/// Confined functional
/// `E[exp(-theta0 * T_{nu-1} - theta1 * T_nu) ; T_nu^i <= T_nu^j]`.
pub fn mc_functional(
    process_i: &RenewalProcess,
    process_j: &RenewalProcess,
    threshold: f64,
    theta0: f64,
    theta1: f64,
    n_samples: u64,
    seed: u64,
) -> Result<MeanEstimate> {
    if !(theta0 >= 0.0 && theta1 >= 0.0 && theta0.is_finite() && theta1.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "transform variables must be nonnegative, got ({theta0}, {theta1})"
        )));
    }
    mc_confined_mean(process_i, process_j, threshold, n_samples, seed, |s| {
        (-theta0 * s.t_pre - theta1 * s.t_exit).exp()
    })
}

/// Which of a player's epochs to fire at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Epoch {
    /// The first epoch at or past the threshold.
    Exit,
    /// The last epoch before it.
    PreExit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotPlan {
    pub epoch: Epoch,
    pub est_time: f64,
    pub expected_p_exit: f64,
    pub expected_p_pre_exit: f64,
    pub stats: ExitStats,
}

/// Compares the expected hit chance at the exit epoch with the one at the
/// pre-exit epoch. Fires at the exit epoch unless the pre-exit epoch is at
/// least as good.
///
/// `_process_j` is accepted for the pairwise signature; the comparison only
/// involves player `i`'s own epochs.
pub fn recommend_shot(
    process_i: &RenewalProcess,
    _process_j: &RenewalProcess,
    curve_i: &SuccessCurve,
    threshold: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ShotPlan> {
    check_threshold(threshold)?;
    check_samples(n_samples)?;
    let [exit, pre, nu, p_exit, p_pre] = moments(n_samples, seed, |rng| {
        let s = exit_of(process_i, threshold, rng);
        [
            s.t_exit,
            s.t_pre,
            s.nu as f64,
            curve_i.prob_at(s.t_exit),
            curve_i.prob_at(s.t_pre),
        ]
    });
    let stats = ExitStats {
        mean_exit: exit.mean,
        mean_pre_exit: pre.mean,
        mean_nu: nu.mean,
        stderr_exit: exit.stderr(),
        stderr_pre_exit: pre.stderr(),
        stderr_nu: nu.stderr(),
        nu_ceiling_approx: (exit.mean / process_i.mean()).ceil(),
        samples: Some(n_samples),
    };
    let (epoch, est_time) = if p_pre.mean < p_exit.mean {
        (Epoch::Exit, exit.mean)
    } else {
        (Epoch::PreExit, pre.mean)
    };
    Ok(ShotPlan {
        epoch,
        est_time,
        expected_p_exit: p_exit.mean,
        expected_p_pre_exit: p_pre.mean,
        stats,
    })
}
