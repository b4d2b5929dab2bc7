//! Checks against oracles that share no code path with the library:
//! closed-form crossings, a hand-rolled exponential sampler, and hand
//! evaluation of the battlefield formulas.

mod common;

use std::collections::BTreeMap;

use pairwise_duel::battlefield::{best_battlefield, success_prob, Objective};
use pairwise_duel::config::{GameSpec, PlayerSpec};
use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::fluctuation::{
    exit_stats_exponential, mc_confined_mean, mc_exit_stats, mc_functional, recommend_shot, Epoch,
    RenewalProcess,
};
use pairwise_duel::schedule::{pairwise_time, PairSchedule};
use pairwise_duel::simulator::{playouts, Policy};
use pairwise_duel::PlayerId;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn power_pairs_match_closed_form() {
    // (t/a)^k + (t/b)^k = 1  =>  t = (a^-k + b^-k)^(-1/k)
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..500 {
        let a: f64 = rng.random_range(1.0..60.0);
        let b: f64 = rng.random_range(1.0..60.0);
        let k: f64 = rng.random_range(0.5..3.0);
        let oracle = (a.powf(-k) + b.powf(-k)).powf(-1.0 / k);
        let got = pairwise_time(
            &SuccessCurve::power(a, k).unwrap(),
            &SuccessCurve::power(b, k).unwrap(),
            1e-11,
        )
        .unwrap();
        assert!(
            (got - oracle).abs() <= 1e-9,
            "a={a} b={b} k={k}: {got} vs {oracle}"
        );
    }
}

/// Independent first-passage sampler: inverse-CDF exponentials from StdRng.
fn naive_exponential_exit(rng: &mut StdRng, rate: f64, threshold: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut t = 0.0;
    let mut k = 0u64;
    while k == 0 || t < threshold {
        prev = t;
        let u: f64 = rng.random();
        t += -(1.0 - u).ln() / rate;
        k += 1;
    }
    (t, prev, k as f64)
}

#[test]
fn exponential_closed_forms_against_naive_sampler() {
    let mut rng = StdRng::seed_from_u64(2024);
    for (rate, threshold) in [(1.0, 10.0), (2.0, 3.0), (0.5, 7.0)] {
        let n = 200_000;
        let mut sums = [0.0f64; 3];
        let mut sq = [0.0f64; 3];
        for _ in 0..n {
            let (e, p, k) = naive_exponential_exit(&mut rng, rate, threshold);
            for (idx, x) in [e, p, k].into_iter().enumerate() {
                sums[idx] += x;
                sq[idx] += x * x;
            }
        }
        let cf = exit_stats_exponential(rate, threshold).unwrap();
        let expect = [cf.mean_exit, cf.mean_pre_exit, cf.mean_nu];
        for idx in 0..3 {
            let mean = sums[idx] / n as f64;
            let var = sq[idx] / n as f64 - mean * mean;
            let se = (var / n as f64).sqrt();
            assert!(
                (mean - expect[idx]).abs() <= 4.0 * se,
                "rate={rate} t={threshold} stat {idx}: {mean} vs {}",
                expect[idx]
            );
        }
    }
}

#[test]
fn uniform_exit_index_near_ceiling_approximation() {
    let u = RenewalProcess::uniform(0.5, 1.5).unwrap();
    let s = mc_exit_stats(&u, 10.0, 1_000_000, 77).unwrap();
    // Wald: E[T_nu] = E[nu] E[tau]
    assert!((s.mean_exit - s.mean_nu * u.mean()).abs() <= 6.0 * s.stderr_exit + 1e-3);
    let ceiling = (s.mean_exit / u.mean()).ceil();
    assert_eq!(s.nu_ceiling_approx, ceiling);
    assert!((s.mean_nu - ceiling).abs() <= 1.0);
}

#[test]
fn functional_symmetric_processes_split_evenly() {
    let e = RenewalProcess::exponential(1.3).unwrap();
    let phi = mc_functional(&e, &e, 6.0, 0.0, 0.0, 400_000, 3).unwrap();
    assert!((phi.mean - 0.5).abs() <= 3.0 * phi.stderr, "{phi:?}");
    let g = RenewalProcess::gamma(2.0, 0.7).unwrap();
    let phi = mc_functional(&g, &g, 9.0, 0.0, 0.0, 400_000, 4).unwrap();
    assert!((phi.mean - 0.5).abs() <= 3.0 * phi.stderr, "{phi:?}");
}

#[test]
fn functional_against_absent_opponent() {
    let e = RenewalProcess::exponential(1.0).unwrap();
    let never = RenewalProcess::deterministic(1e9).unwrap();
    let phi = mc_functional(&e, &never, 10.0, 0.0, 0.0, 50_000, 1).unwrap();
    assert_eq!(phi.mean, 1.0);
    // with theta1 > 0 it is the plain transform of T_nu: e^{-th t} * rate/(rate+th)
    let th = 0.05;
    let phi = mc_functional(&e, &never, 10.0, 0.0, th, 400_000, 2).unwrap();
    let oracle = (-th * 10.0f64).exp() * 1.0 / (1.0 + th);
    assert!(
        (phi.mean - oracle).abs() <= 4.0 * phi.stderr,
        "{} vs {oracle}",
        phi.mean
    );
}

#[test]
fn functional_nonincreasing_on_grid() {
    let a = RenewalProcess::uniform(0.3, 1.1).unwrap();
    let b = RenewalProcess::exponential(1.5).unwrap();
    let grid = [0.0, 0.01, 0.05, 0.1, 0.3];
    for &t0 in &grid {
        let mut last = f64::INFINITY;
        for &t1 in &grid {
            let v = mc_functional(&a, &b, 5.0, t0, t1, 20_000, 8).unwrap().mean;
            assert!(v <= last, "theta=({t0},{t1})");
            last = v;
        }
    }
    for &t1 in &grid {
        let mut last = f64::INFINITY;
        for &t0 in &grid {
            let v = mc_functional(&a, &b, 5.0, t0, t1, 20_000, 8).unwrap().mean;
            assert!(v <= last, "theta=({t0},{t1})");
            last = v;
        }
    }
}

#[test]
fn functional_derivative_in_pre_exit_direction() {
    let a = RenewalProcess::exponential(1.0).unwrap();
    let b = RenewalProcess::gamma(3.0, 0.4).unwrap();
    let (n, seed, h) = (200_000, 12, 1e-4);
    let f = |t0| mc_functional(&a, &b, 8.0, t0, 0.0, n, seed).unwrap().mean;
    let slope = (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
    let direct = mc_confined_mean(&a, &b, 8.0, n, seed, |s| s.t_pre)
        .unwrap()
        .mean;
    assert!(
        (-slope - direct).abs() <= 0.01 * direct,
        "{slope} vs {direct}"
    );
}

#[test]
fn recommend_shot_linear_exponential() {
    let e = RenewalProcess::exponential(1.0).unwrap();
    let c = SuccessCurve::linear(20.0).unwrap();
    let plan = recommend_shot(&e, &e, &c, 10.0, 400_000, 5).unwrap();
    assert_eq!(plan.epoch, Epoch::Exit);
    // P is linear below 20 and T_nu exceeds 20 with probability e^-10
    let cf = exit_stats_exponential(1.0, 10.0).unwrap();
    assert!((plan.est_time - cf.mean_exit).abs() <= 4.0 * plan.stats.stderr_exit);
    assert!((plan.expected_p_exit - cf.mean_exit / 20.0).abs() < 2e-3);
    assert!((plan.expected_p_pre_exit - cf.mean_pre_exit / 20.0).abs() < 2e-3);
    assert!(plan.expected_p_pre_exit < plan.expected_p_exit);
}

#[test]
fn recommend_shot_curve_saturating_at_threshold() {
    let e = RenewalProcess::exponential(0.7).unwrap();
    let c = SuccessCurve::power(10.0, 1.5).unwrap();
    let plan = recommend_shot(&e, &e, &c, 10.0, 100_000, 6).unwrap();
    assert_eq!(plan.expected_p_exit, 1.0);
    assert_eq!(plan.epoch, Epoch::Exit);
}

#[test]
fn success_prob_against_literal_product() {
    // 4 players; evaluate the discount product by hand from the schedule rows.
    let curves: BTreeMap<_, _> = [(1, 18.0), (2, 25.0), (3, 31.0), (4, 44.0)]
        .into_iter()
        .map(|(id, t)| (PlayerId(id), SuccessCurve::linear(t).unwrap()))
        .collect();
    let sched = PairSchedule::build(&curves, 1e-12).unwrap();
    let horizon = |p: PlayerId| match p.0 {
        1 => 18.0,
        2 => 25.0,
        3 => 31.0,
        _ => 44.0,
    };
    let rows: Vec<_> = sched.battlefields().to_vec();
    for bf in &rows {
        for shooter in [bf.pair.low(), bf.pair.high()] {
            let opp = bf.pair.opponent_of(shooter).unwrap();
            let mut prod = (bf.time / horizon(opp)).min(1.0);
            for h in rows.iter().take(bf.m - 1) {
                if h.pair.low() == opp || h.pair.high() == opp {
                    prod *= (h.time / horizon(opp)).min(1.0);
                }
            }
            let got = success_prob(&sched, &curves, shooter, bf.m).unwrap();
            assert!(
                (got - (1.0 - prod)).abs() < 1e-12,
                "m={} shooter={shooter}",
                bf.m
            );
        }
    }
    let plan = best_battlefield(&sched, &curves, PlayerId(4), Objective::Max).unwrap();
    assert_eq!(
        plan.m_star,
        sched.player_schedule(PlayerId(4)).unwrap()[0].m
    );
}

#[test]
fn first_shot_time_matches_exit_time() {
    // Opponent never reaches an epoch, so player 1's first shot is T_nu.
    let spec = GameSpec::new(
        vec![
            PlayerSpec::new(1, SuccessCurve::linear(20.0).unwrap())
                .with_renewal(RenewalProcess::exponential(1.0).unwrap()),
            PlayerSpec::new(2, SuccessCurve::linear(20.0).unwrap())
                .with_renewal(RenewalProcess::deterministic(1e9).unwrap()),
        ],
        1e-9,
    )
    .unwrap();
    let runs = 100_000;
    let results = playouts(&spec, &Policy::threshold(), runs, 31).unwrap();
    let times: Vec<f64> = results.iter().map(|r| r.shot_log[0].global_time).collect();
    assert!(results.iter().all(|r| r.shot_log[0].shooter == PlayerId(1)));
    let mean = times.iter().sum::<f64>() / runs as f64;
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    let se = (var / runs as f64).sqrt();
    let t_star = 10.0; // 20*20/(20+20)
    let cf = exit_stats_exponential(1.0, t_star).unwrap();
    assert!(
        (mean - cf.mean_exit).abs() <= 3.0 * se,
        "{mean} vs {}",
        cf.mean_exit
    );
}
