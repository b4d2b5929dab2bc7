mod common;

use std::collections::BTreeSet;

use common::{curve_strategy, curves_strategy};
use pairwise_duel::battlefield::{
    best_battlefield, indicator, multi_bullet_battlefields, player_scores, rank, success_prob,
    Objective,
};
use pairwise_duel::config::{GameSpec, PlayerSpec};
use pairwise_duel::engine::{GameState, Outcome};
use pairwise_duel::fluctuation::{batch_rng, sample_exit, RenewalProcess};
use pairwise_duel::schedule::{pairwise_time, PairSchedule};
use pairwise_duel::simulator::{playout, Policy, PolicyKind};
use pairwise_duel::PlayerId;
use proptest::prelude::*;

fn renewal_strategy() -> impl Strategy<Value = RenewalProcess> {
    prop_oneof![
        (0.2..3.0f64).prop_map(|r| RenewalProcess::exponential(r).unwrap()),
        (0.1..4.0f64).prop_map(|p| RenewalProcess::deterministic(p).unwrap()),
        (0.05..1.0f64, 0.1..2.0f64)
            .prop_map(|(lo, w)| RenewalProcess::uniform(lo, lo + w).unwrap()),
        (0.3..4.0f64, 0.1..1.5f64).prop_map(|(k, s)| RenewalProcess::gamma(k, s).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn curves_are_monotone(c in curve_strategy(), a in 0.0..1.2f64, b in 0.0..1.2f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (t, t2) = (lo * c.t_max(), hi * c.t_max());
        prop_assert!(c.eval(t).unwrap() <= c.eval(t2).unwrap());
        let p = c.eval(t).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn curves_are_normalized(c in curve_strategy()) {
        prop_assert!((c.eval(c.t_max()).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn find_level_round_trip(c in curve_strategy(), p in 0.0..=1.0f64) {
        let t = c.find_level(p, 1e-10).unwrap();
        prop_assert!(c.eval(t).unwrap() >= p - 1e-9);
        prop_assert!(t <= c.t_max());
    }

    #[test]
    fn zeroed_idempotent(c in curve_strategy(), t in 0.0..100.0f64) {
        let z = c.zeroed();
        prop_assert_eq!(z.zeroed(), z.clone());
        prop_assert_eq!(z.eval(t).unwrap(), 0.0);
    }

    #[test]
    fn crossing_is_first_and_bounded(a in curve_strategy(), b in curve_strategy()) {
        let tol = 1e-9;
        let t = pairwise_time(&a, &b, tol).unwrap();
        prop_assert!(a.prob_at(t) + b.prob_at(t) >= 1.0 - 1e-9);
        if t > 10.0 * tol {
            let before = t - 10.0 * tol;
            prop_assert!(a.prob_at(before) + b.prob_at(before) <= 1.0 + 1e-9);
        }
        prop_assert!(t <= a.t_max().min(b.t_max()));
    }

    #[test]
    fn zero_partner_crosses_at_horizon(a in curve_strategy(), b in curve_strategy()) {
        let t = pairwise_time(&a.zeroed(), &b, 1e-10).unwrap();
        // the live curve has to reach 1 on its own; tables may get there early
        prop_assert!(b.prob_at(t) >= 1.0 - 1e-12);
        prop_assert!(t <= b.t_max());
        prop_assert!(t >= b.find_level(1.0, 1e-10).unwrap() - 2e-10);
    }

    #[test]
    fn schedule_combinatorics(curves in curves_strategy(8)) {
        let n = curves.len();
        let s = PairSchedule::build(&curves, 1e-9).unwrap();
        prop_assert_eq!(s.len(), n * (n - 1) / 2);
        for w in s.battlefields().windows(2) {
            prop_assert!(w[0].time <= w[1].time);
        }
        for (idx, bf) in s.battlefields().iter().enumerate() {
            prop_assert_eq!(bf.m, idx + 1);
        }
        for &p in curves.keys() {
            prop_assert_eq!(s.player_schedule(p).unwrap().len(), n - 1);
        }
        prop_assert_eq!(PairSchedule::build(&curves, 1e-9).unwrap(), s);
    }

    #[test]
    fn battlefield_reciprocity(curves in curves_strategy(6)) {
        let s = PairSchedule::build(&curves, 1e-9).unwrap();
        for bf in s.battlefields() {
            let (i, j) = (bf.pair.low(), bf.pair.high());
            let pij = success_prob(&s, &curves, i, bf.m).unwrap();
            let pji = success_prob(&s, &curves, j, bf.m).unwrap();
            if pij > 0.0 && pji > 0.0 {
                let q = indicator(&s, &curves, i, bf.m).unwrap() * indicator(&s, &curves, j, bf.m).unwrap();
                prop_assert!((q - 1.0).abs() <= 1e-12);
            }
            // history only ever lowers the opponent's product
            let no_history = 1.0 - curves[&j].prob_at(bf.time);
            prop_assert!(pij >= no_history);
            prop_assert!((0.0..=1.0).contains(&pij));
        }
        let first = s.battlefields()[0];
        let opp = first.pair.high();
        prop_assert_eq!(
            success_prob(&s, &curves, first.pair.low(), 1).unwrap(),
            1.0 - curves[&opp].prob_at(first.time)
        );
    }

    #[test]
    fn ranking_depends_only_on_order(curves in curves_strategy(6)) {
        let s = PairSchedule::build(&curves, 1e-9).unwrap();
        for &p in curves.keys() {
            let scores = player_scores(&s, &curves, p).unwrap();
            let mapped: Vec<_> = scores
                .iter()
                .map(|sc| { let mut sc = *sc; sc.q = sc.q.ln() * 3.0 + 7.0; sc })
                .collect();
            for obj in [Objective::Max, Objective::Min] {
                let a: Vec<_> = rank(&scores, obj).iter().map(|x| x.m).collect();
                let b: Vec<_> = rank(&mapped, obj).iter().map(|x| x.m).collect();
                prop_assert_eq!(a, b);
                let best = best_battlefield(&s, &curves, p, obj).unwrap();
                let one = multi_bullet_battlefields(&s, &curves, p, 1, obj).unwrap();
                prop_assert_eq!(one, vec![best]);
            }
        }
    }

    #[test]
    fn exit_samples_straddle_threshold(law in renewal_strategy(), threshold in 0.1..30.0f64, seed in any::<u64>()) {
        let mut rng = batch_rng(seed, 0);
        for _ in 0..200 {
            let s = sample_exit(&law, threshold, &mut rng).unwrap();
            prop_assert!(s.nu >= 1);
            prop_assert!(s.t_pre < threshold && threshold <= s.t_exit);
            prop_assert!(s.t_pre < s.t_exit);
        }
    }

    #[test]
    fn forced_games_keep_invariants(
        curves in curves_strategy(5),
        bullets in prop::collection::vec(1u32..3, 5),
        moves in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<bool>(), 0.0..5.0f64), 1..30),
    ) {
        let players: Vec<_> = curves
            .iter()
            .zip(&bullets)
            .map(|((id, c), &b)| PlayerSpec::new(id.0, c.clone()).with_bullets(b))
            .collect();
        let total: u32 = players.iter().map(|p| p.bullets).sum();
        let spec = GameSpec::new(players, 1e-9).unwrap();
        let mut state = GameState::new(&spec).unwrap();
        let mut t = 0.0;
        let mut was_terminal = false;
        for (si, ti, hit, dt) in moves {
            if state.is_terminal() {
                was_terminal = true;
                break;
            }
            let armed: Vec<PlayerId> = state.armed().collect();
            let shooter = *si.get(&armed);
            let targets: Vec<PlayerId> = state.alive().iter().copied().filter(|&p| p != shooter).collect();
            let target = *ti.get(&targets);
            t += dt;
            let outcome = if hit { Outcome::Hit } else { Outcome::Miss };
            let next = state.apply_shot(shooter, target, t, outcome).unwrap();

            prop_assert!(next.alive().is_subset(state.alive()));
            let n = next.alive().len();
            match next.pair_set() {
                Some(s) => {
                    prop_assert_eq!(s.len(), n * (n - 1) / 2);
                    let in_pairs: BTreeSet<_> = s.battlefields().iter().flat_map(|b| [b.pair.low(), b.pair.high()]).collect();
                    prop_assert_eq!(&in_pairs, next.alive());
                }
                None => prop_assert!(n <= 1),
            }
            for p in next.alive() {
                prop_assert_eq!(next.curves()[p].is_zero(), next.bullets(*p) == 0);
            }
            prop_assert!(next.clock_origin() <= next.global_time());
            state = next;
        }
        prop_assert!(state.shot_log().len() as u32 <= total);
        if was_terminal {
            prop_assert!(state.is_terminal());
        }
    }

    #[test]
    fn playouts_conserve_bullets(
        curves in curves_strategy(5),
        laws in prop::collection::vec(renewal_strategy(), 5),
        bullets in prop::collection::vec(1u32..3, 5),
        seed in any::<u64>(),
        kind in prop_oneof![Just(PolicyKind::Threshold), Just(PolicyKind::NaiveMax), Just(PolicyKind::Versatile)],
    ) {
        let players: Vec<_> = curves
            .iter()
            .zip(laws.iter().zip(&bullets))
            .map(|((id, c), (law, &b))| PlayerSpec::new(id.0, c.clone()).with_renewal(*law).with_bullets(b))
            .collect();
        let spec = GameSpec::new(players, 1e-9).unwrap();
        let mut policy = Policy::new(kind);
        policy.mc_samples = 200;
        let r = playout(&spec, &policy, &mut batch_rng(seed, 0)).unwrap();
        let total: u32 = spec.players().iter().map(|p| p.bullets).sum();
        prop_assert!(r.shot_log.len() as u32 <= total);
        let hits = r.shot_log.iter().filter(|e| e.outcome == Outcome::Hit).count();
        let misses = r.shot_log.len() - hits;
        prop_assert_eq!(hits + misses, r.shot_log.len());
        prop_assert_eq!(r.survivors.len(), spec.players().len() - hits);
        for e in &r.shot_log {
            prop_assert!((0.0..=1.0).contains(&e.p_hit));
            prop_assert!(e.local_time <= e.global_time);
        }
        for w in r.shot_log.windows(2) {
            prop_assert!(w[0].global_time <= w[1].global_time);
        }
        prop_assert!(r.status.is_terminal());
    }
}
