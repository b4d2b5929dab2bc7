//! Monte-Carlo survival estimates for the three shooting policies.
//!
//! `cargo run --release --example simulate [runs]`

use pairwise_duel::config::parse_spec;
use pairwise_duel::fluctuation::batch_rng;
use pairwise_duel::simulator::{estimate, playout, Policy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let runs: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(2000);
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/five_player.json"
    ))?;
    let spec = parse_spec(&text)?;

    let one = playout(&spec, &Policy::threshold(), &mut batch_rng(7, 0))?;
    println!(
        "one threshold playout ({:?}, {:.3} time units):",
        one.status, one.duration
    );
    for e in &one.shot_log {
        println!(
            "  t={:7.3} {} -> {} p={:.3} {:?}",
            e.global_time, e.shooter, e.target, e.p_hit, e.outcome
        );
    }
    println!("  survivors {:?}\n", one.survivors);

    for policy in [
        Policy::threshold(),
        Policy::versatile(),
        Policy::naive_max(),
    ] {
        let est = estimate(&spec, &policy, runs, 42)?;
        println!(
            "{} over {runs} runs: mean shots {:.3}, mean duration {:.3}",
            policy.kind, est.mean_shots, est.mean_duration
        );
        for p in &est.players {
            println!(
                "  player {}: survives {:.3} +- {:.3}, hits {:.3} +- {:.3}",
                p.player, p.survival_rate, p.survival_stderr, p.hit_rate, p.hit_stderr
            );
        }
    }
    Ok(())
}
