//! Actual success probabilities, indicators and target choice.
//!
//! `cargo run --example targets`

use std::collections::BTreeMap;

use pairwise_duel::battlefield::{
    best_battlefield, multi_bullet_battlefields, player_scores, Objective,
};
use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::schedule::PairSchedule;
use pairwise_duel::PlayerId;

fn main() -> pairwise_duel::Result<()> {
    let curves: BTreeMap<_, _> = [(1, 20.0), (2, 30.0), (3, 40.0), (4, 35.0)]
        .into_iter()
        .map(|(id, t_max)| Ok((PlayerId(id), SuccessCurve::linear(t_max)?)))
        .collect::<pairwise_duel::Result<_>>()?;
    let schedule = PairSchedule::build(&curves, 1e-9)?;

    for &p in curves.keys() {
        println!("player {p}");
        for s in player_scores(&schedule, &curves, p)? {
            println!(
                "  m={} vs {}  t={:8.4}  P(shoot)={:.4}  q={:.4}",
                s.m, s.opponent, s.time, s.p_shoot, s.q
            );
        }
        for objective in [Objective::Max, Objective::Min] {
            let plan = best_battlefield(&schedule, &curves, p, objective)?;
            println!(
                "  {objective}: aim at {} at t = {:.4} (m = {})",
                plan.target, plan.t_star, plan.m_star
            );
        }
    }

    let two = multi_bullet_battlefields(&schedule, &curves, PlayerId(4), 2, Objective::Max)?;
    let targets: Vec<_> = two.iter().map(|t| (t.target.0, t.m_star)).collect();
    println!("\nplayer 4 with two bullets: (target, m) = {targets:?}");
    Ok(())
}
