//! Parsing and validating game spec files, including the error paths.
//!
//! `cargo run --example game_spec`

use pairwise_duel::config::parse_spec;

fn main() {
    let good = r#"{
        "tolerance": 1e-10,
        "players": [
            {"id": 7, "curve": {"type": "linear", "t_max": 12}, "bullets": 2},
            {"id": 3, "curve": {"type": "expsat", "t_max": 18, "rate": 0.2},
             "renewal": {"dist": "gamma", "shape": 2, "scale": 0.5}}
        ]
    }"#;
    let spec = parse_spec(good).expect("valid");
    for p in spec.players() {
        println!(
            "player {}: {} curve, t_max {}, {} bullet(s), {:?}",
            p.id,
            p.curve.kind(),
            p.curve.t_max(),
            p.bullets,
            p.renewal
        );
    }

    let bad = [
        r#"{"players": [{"id": 1, "curve": {"type": "linear", "t_max": 5}}]}"#,
        r#"{"players": [{"id": 1, "curve": {"type": "linear", "t_max": 5}},
                        {"id": 2, "curve": {"type": "table", "knots": [[0, 0], [3, 0.8]]}}]}"#,
        r#"{"players": [{"id": 1, "curve": {"type": "linear", "t_max": 5}},
                        {"id": 2, "curve": {"type": "linear", "t_max": 5}, "renewal": {"dist": "uniform", "lo": 0, "hi": 1}}]}"#,
        r#"{"players": [{"id": 1, "curve": {"type": "linear", "t_max": 5}, "colour": "red"}]}"#,
        r#"{"players": ["#,
    ];
    for text in bad {
        println!("rejected: {}", parse_spec(text).unwrap_err());
    }
}
