//! Exit and pre-exit epochs of renewal processes, the confined functional,
//! and the shoot-at-exit-or-before rule.
//!
//! `cargo run --release --example exit_times`

use pairwise_duel::curve::SuccessCurve;
use pairwise_duel::fluctuation::{
    exit_stats_exponential, mc_exit_stats, mc_functional, recommend_shot, RenewalProcess,
};

fn main() -> pairwise_duel::Result<()> {
    let threshold = 10.0;
    let cf = exit_stats_exponential(1.0, threshold)?;
    let mc = mc_exit_stats(&RenewalProcess::exponential(1.0)?, threshold, 500_000, 1)?;
    println!("exponential(1) past t = {threshold}");
    println!(
        "  E[T_nu]   closed {:.4}  mc {:.4} +- {:.4}",
        cf.mean_exit, mc.mean_exit, mc.stderr_exit
    );
    println!(
        "  E[T_nu-1] closed {:.4}  mc {:.4} +- {:.4}",
        cf.mean_pre_exit, mc.mean_pre_exit, mc.stderr_pre_exit
    );
    println!(
        "  E[nu]     closed {:.4}  mc {:.4} +- {:.4}",
        cf.mean_nu, mc.mean_nu, mc.stderr_nu
    );

    let laws = [
        RenewalProcess::deterministic(1.5)?,
        RenewalProcess::uniform(0.5, 1.5)?,
        RenewalProcess::gamma(3.0, 0.4)?,
    ];
    for law in &laws {
        let s = mc_exit_stats(law, threshold, 200_000, 2)?;
        println!(
            "{law:?}: E[T_nu] {:.4}, E[T_nu-1] {:.4}, E[nu] {:.3}, ceil approx {}",
            s.mean_exit, s.mean_pre_exit, s.mean_nu, s.nu_ceiling_approx
        );
    }

    let (a, b) = (
        RenewalProcess::exponential(1.0)?,
        RenewalProcess::uniform(0.5, 1.5)?,
    );
    println!("\nPhi(theta0, theta1) for exponential(1) against uniform(0.5, 1.5):");
    for (t0, t1) in [(0.0, 0.0), (0.05, 0.0), (0.0, 0.05), (0.05, 0.05)] {
        let phi = mc_functional(&a, &b, threshold, t0, t1, 200_000, 3)?;
        println!(
            "  ({t0:.2}, {t1:.2}) -> {:.5} +- {:.5}",
            phi.mean, phi.stderr
        );
    }

    // a curve that flattens out early makes the earlier epoch just as good
    let curves = [
        ("linear(20)", SuccessCurve::linear(20.0)?),
        (
            "table saturating at 9",
            SuccessCurve::table(vec![(0.0, 0.0), (6.0, 0.8), (9.0, 1.0)])?,
        ),
    ];
    let law = RenewalProcess::deterministic(3.0)?;
    for (name, curve) in &curves {
        let plan = recommend_shot(&law, &law, curve, threshold, 10_000, 4)?;
        println!(
            "\n{name}: E[P(T_nu-1)] = {:.4}, E[P(T_nu)] = {:.4} -> fire at {:?} (t ~ {:.2})",
            plan.expected_p_pre_exit, plan.expected_p_exit, plan.epoch, plan.est_time
        );
    }
    Ok(())
}
