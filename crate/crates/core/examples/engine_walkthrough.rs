//! Drives the game-state machine by hand with forced outcomes.
//!
//! `cargo run --example engine_walkthrough`

use pairwise_duel::battlefield::Objective;
use pairwise_duel::config::{GameSpec, PlayerSpec};
use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::engine::{GameState, Outcome};
use pairwise_duel::PlayerId;

fn show(state: &GameState) {
    println!(
        "  alive {:?}, armed {:?}, status {:?}",
        state.alive(),
        state.armed().collect::<Vec<_>>(),
        state.status()
    );
    if let Some(s) = state.pair_set() {
        for bf in s.battlefields() {
            println!(
                "    m={} ({},{}) t={:.4}",
                bf.m,
                bf.pair.low(),
                bf.pair.high(),
                bf.time
            );
        }
    }
}

fn main() -> pairwise_duel::Result<()> {
    let spec = GameSpec::new(
        vec![
            PlayerSpec::new(1, SuccessCurve::linear(20.0)?),
            PlayerSpec::new(2, SuccessCurve::linear(30.0)?).with_bullets(2),
            PlayerSpec::new(3, SuccessCurve::linear(40.0)?),
        ],
        1e-9,
    )
    .expect("valid spec");
    let mut state = GameState::new(&spec)?;
    println!("start");
    show(&state);

    let script = [(1, Outcome::Miss), (2, Outcome::Hit), (2, Outcome::Miss)];
    for (shooter, outcome) in script {
        let shooter = PlayerId(shooter);
        let plan = state.plan(shooter, Objective::Max)?;
        let at = state.clock_origin() + plan.t_star;
        println!(
            "\nplayer {shooter} fires at {} at global t = {at:.4}: {outcome:?}",
            plan.target
        );
        state = state.apply_shot(shooter, plan.target, at, outcome)?;
        show(&state);
        if state.is_terminal() {
            break;
        }
    }

    println!("\nshot log:");
    for e in state.shot_log() {
        println!(
            "  t={:.4} (local {:.4}) {} -> {} p={:.4} {:?}",
            e.global_time, e.local_time, e.shooter, e.target, e.p_hit, e.outcome
        );
    }
    Ok(())
}
