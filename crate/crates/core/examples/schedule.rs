//! Pairwise crossing times and the sorted battlefield schedule.
//!
//! `cargo run --example schedule`

use std::collections::BTreeMap;

use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::schedule::{pairwise_time, PairSchedule, DEFAULT_TOLERANCE};
use pairwise_duel::PlayerId;

fn main() -> pairwise_duel::Result<()> {
    let curves: BTreeMap<_, _> = [
        (1, SuccessCurve::linear(20.0)?),
        (2, SuccessCurve::linear(30.0)?),
        (3, SuccessCurve::linear(40.0)?),
        (4, SuccessCurve::power(25.0, 0.5)?),
    ]
    .into_iter()
    .map(|(id, c)| (PlayerId(id), c))
    .collect();

    // two linear curves cross at ab/(a+b)
    let t = pairwise_time(&curves[&PlayerId(1)], &curves[&PlayerId(2)], 1e-12)?;
    println!("t(1,2) = {t:.10}, expected 12\n");

    let schedule = PairSchedule::build(&curves, DEFAULT_TOLERANCE)?;
    println!("{:>3} {:>4} {:>4} {:>12}", "m", "i", "j", "time");
    for bf in schedule.battlefields() {
        println!(
            "{:>3} {:>4} {:>4} {:>12.6}",
            bf.m,
            bf.pair.low(),
            bf.pair.high(),
            bf.time
        );
    }

    println!();
    for &p in curves.keys() {
        let ms: Vec<usize> = schedule.player_schedule(p)?.iter().map(|b| b.m).collect();
        println!("player {p} fights in battlefields {ms:?}");
    }
    Ok(())
}
