//! Evaluates each curve family on a coarse grid and inverts one of them.
//!
//! `cargo run --example curves`

use pairwise_duel::curve::SuccessCurve;

fn main() -> pairwise_duel::Result<()> {
    let curves = [
        SuccessCurve::linear(20.0)?,
        SuccessCurve::power(20.0, 2.0)?,
        SuccessCurve::exp_saturating(20.0, 0.15)?,
        SuccessCurve::table(vec![(0.0, 0.0), (5.0, 0.1), (12.0, 0.6), (20.0, 1.0)])?,
        SuccessCurve::linear(20.0)?.zeroed(),
    ];

    print!("{:>6}", "t");
    for c in &curves {
        print!("{:>10}", c.kind().to_string());
    }
    println!();
    for step in 0..=10 {
        let t = 2.5 * step as f64;
        print!("{t:>6.1}");
        for c in &curves {
            print!("{:>10.4}", c.eval(t)?);
        }
        println!();
    }

    let power = &curves[1];
    let t_half = power.find_level(0.5, 1e-12)?;
    println!(
        "\npower curve reaches 0.5 at t = {t_half:.9} (sqrt(0.5)*20 = {:.9})",
        0.5f64.sqrt() * 20.0
    );
    Ok(())
}
