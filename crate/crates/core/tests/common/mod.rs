#![allow(dead_code)]

use std::collections::BTreeMap;

use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::PlayerId;
use proptest::prelude::*;
use rand::Rng;

/// A random valid non-zero curve.
pub fn random_curve<R: Rng>(rng: &mut R) -> SuccessCurve {
    let t_max = rng.random_range(1.0..50.0);
    match rng.random_range(0..4) {
        0 => SuccessCurve::linear(t_max).unwrap(),
        1 => SuccessCurve::power(t_max, rng.random_range(0.3..4.0)).unwrap(),
        2 => SuccessCurve::exp_saturating(t_max, rng.random_range(0.01..2.0)).unwrap(),
        _ => {
            let n = rng.random_range(1..6);
            let mut t = 0.0;
            let mut p: f64 = 0.0;
            let mut knots = vec![(0.0, rng.random_range(0.0..0.3))];
            for _ in 0..n {
                t += rng.random_range(0.5..10.0);
                p = rng.random_range(p.max(knots.last().unwrap().1)..1.0);
                knots.push((t, p));
            }
            knots.last_mut().unwrap().1 = 1.0;
            SuccessCurve::table(knots).unwrap()
        }
    }
}

pub fn random_curves<R: Rng>(rng: &mut R, n: u32) -> BTreeMap<PlayerId, SuccessCurve> {
    (1..=n)
        .map(|id| (PlayerId(id), random_curve(rng)))
        .collect()
}

/// Proptest strategy over the same family of curves.
pub fn curve_strategy() -> impl Strategy<Value = SuccessCurve> {
    let linear = (1.0..50.0f64).prop_map(|t| SuccessCurve::linear(t).unwrap());
    let power = (1.0..50.0f64, 0.3..4.0f64).prop_map(|(t, k)| SuccessCurve::power(t, k).unwrap());
    let expsat =
        (1.0..50.0f64, 0.01..2.0f64).prop_map(|(t, r)| SuccessCurve::exp_saturating(t, r).unwrap());
    let table = prop::collection::vec((0.5..10.0f64, 0.0..1.0f64), 1..6).prop_map(|steps| {
        let mut t = 0.0;
        let mut ps: Vec<f64> = steps.iter().map(|s| s.1).collect();
        ps.sort_by(f64::total_cmp);
        let mut knots = vec![(0.0, 0.0)];
        for ((dt, _), p) in steps.iter().zip(ps) {
            t += dt;
            knots.push((t, p));
        }
        knots.last_mut().unwrap().1 = 1.0;
        SuccessCurve::table(knots).unwrap()
    });
    prop_oneof![linear, power, expsat, table]
}

pub fn curves_strategy(
    max_players: usize,
) -> impl Strategy<Value = BTreeMap<PlayerId, SuccessCurve>> {
    prop::collection::vec(curve_strategy(), 2..=max_players).prop_map(|cs| {
        cs.into_iter()
            .enumerate()
            .map(|(i, c)| (PlayerId(i as u32 + 1), c))
            .collect()
    })
}
