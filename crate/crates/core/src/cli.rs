//! Command-line front end.
//!
//! Every command reads one game-spec file and writes a report to standard
//! output (JSON by default, CSV for `curves`). Exit codes: 0 success,
//! 1 usage error, 2 spec syntax error, 3 spec semantic error, 4 numeric
//! failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::battlefield::{multi_bullet_battlefields, player_scores, Objective};
use crate::config::{parse_spec, GameSpec, SpecError};
use crate::fluctuation::{exit_stats_exponential, mc_exit_stats, ExitStats, RenewalProcess};
use crate::schedule::PairSchedule;
use crate::simulator::{estimate, playouts, Estimate, Policy, PolicyKind};
use crate::PlayerId;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "duel",
    version,
    about = "Pairwise n-person stochastic duel solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a spec file.
    Validate { spec: PathBuf },
    /// Sorted battlefield schedule: rows (m, i, j, time).
    Schedule {
        spec: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Battlefield scores and chosen targets for one player.
    Targets {
        spec: PathBuf,
        #[arg(long)]
        player: u32,
        #[arg(long, default_value_t = 1)]
        bullets: u32,
        #[arg(long, default_value = "max")]
        objective: Objective,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Exit and pre-exit time statistics for one player's epochs.
    ExitTimes {
        spec: PathBuf,
        #[arg(long)]
        player: u32,
        #[arg(long)]
        threshold: f64,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Monte-Carlo survival and hit rates under a policy.
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "threshold")]
        policy: PolicyKind,
        #[arg(long, default_value = "max")]
        objective: Objective,
        /// Also dump every run's shot log.
        #[arg(long)]
        log: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Success curves sampled on a uniform grid.
    Curves {
        spec: PathBuf,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug)]
enum Failure {
    Spec(SpecError),
    Io(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Spec(SpecError::Syntax(_)) | Failure::Io(_) => EXIT_SYNTAX,
            Failure::Spec(SpecError::Semantic { .. }) => EXIT_SEMANTIC,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Spec(e) => e.to_string(),
            Failure::Io(m) | Failure::Numeric(m) => m.clone(),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Spec(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(path: &PathBuf) -> Outcome<GameSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_spec(&text)?)
}

fn player_of(spec: &GameSpec, id: u32) -> Outcome<&crate::config::PlayerSpec> {
    spec.player(PlayerId(id)).ok_or_else(|| {
        Failure::Spec(SpecError::Semantic {
            path: "--player".into(),
            message: format!("no player with id {id} in the spec"),
        })
    })
}

fn json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Failure::Numeric(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Numeric(e.to_string()))
}

#[derive(Debug, Serialize)]
struct ScheduleRow {
    m: usize,
    i: PlayerId,
    j: PlayerId,
    time: f64,
}

#[derive(Debug, Serialize)]
struct Rows<T> {
    rows: Vec<T>,
}

fn cmd_schedule(spec: &GameSpec, format: Format) -> Outcome<String> {
    let schedule = PairSchedule::build(&spec.curves(), spec.tolerance())?;
    let rows: Vec<ScheduleRow> = schedule
        .battlefields()
        .iter()
        .map(|b| ScheduleRow {
            m: b.m,
            i: b.pair.low(),
            j: b.pair.high(),
            time: b.time,
        })
        .collect();
    match format {
        Format::Json => json(&Rows { rows }),
        Format::Csv => csv_rows(&rows),
    }
}

#[derive(Debug, Serialize)]
struct TargetRow {
    m: usize,
    opponent: PlayerId,
    time: f64,
    p_shoot: f64,
    /// `null` in JSON when unbounded.
    q: f64,
    chosen: bool,
}

#[derive(Debug, Serialize)]
struct TargetsReport {
    player: PlayerId,
    bullets: u32,
    objective: Objective,
    rows: Vec<TargetRow>,
}

fn cmd_targets(
    spec: &GameSpec,
    player: u32,
    bullets: u32,
    objective: Objective,
    format: Format,
) -> Outcome<String> {
    let who = player_of(spec, player)?.id;
    let curves = spec.curves();
    let schedule = PairSchedule::build(&curves, spec.tolerance())?;
    let chosen: Vec<usize> =
        multi_bullet_battlefields(&schedule, &curves, who, bullets, objective)?
            .iter()
            .map(|p| p.m_star)
            .collect();
    let rows: Vec<TargetRow> = player_scores(&schedule, &curves, who)?
        .into_iter()
        .map(|s| TargetRow {
            m: s.m,
            opponent: s.opponent,
            time: s.time,
            p_shoot: s.p_shoot,
            q: s.q,
            chosen: chosen.contains(&s.m),
        })
        .collect();
    match format {
        Format::Json => json(&TargetsReport {
            player: who,
            bullets,
            objective,
            rows,
        }),
        Format::Csv => csv_rows(&rows),
    }
}

#[derive(Debug, Serialize)]
struct ExitReport {
    player: PlayerId,
    threshold: f64,
    renewal: RenewalProcess,
    closed_form: Option<ExitStats>,
    monte_carlo: ExitStats,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct ExitRow {
    method: &'static str,
    mean_exit: f64,
    stderr_exit: f64,
    mean_pre_exit: f64,
    stderr_pre_exit: f64,
    mean_nu: f64,
    stderr_nu: f64,
    nu_ceiling_approx: f64,
    samples: u64,
}

impl ExitRow {
    fn new(method: &'static str, s: &ExitStats) -> Self {
        Self {
            method,
            mean_exit: s.mean_exit,
            stderr_exit: s.stderr_exit,
            mean_pre_exit: s.mean_pre_exit,
            stderr_pre_exit: s.stderr_pre_exit,
            mean_nu: s.mean_nu,
            stderr_nu: s.stderr_nu,
            nu_ceiling_approx: s.nu_ceiling_approx,
            samples: s.samples.unwrap_or(0),
        }
    }
}

fn cmd_exit_times(
    spec: &GameSpec,
    player: u32,
    threshold: f64,
    mc_samples: u64,
    seed: u64,
    format: Format,
) -> Outcome<String> {
    let p = player_of(spec, player)?;
    let closed_form = match p.renewal {
        RenewalProcess::Exponential { rate } => Some(exit_stats_exponential(rate, threshold)?),
        _ => None,
    };
    let monte_carlo = mc_exit_stats(&p.renewal, threshold, mc_samples, seed)?;
    match format {
        Format::Json => json(&ExitReport {
            player: p.id,
            threshold,
            renewal: p.renewal,
            closed_form,
            monte_carlo,
            seed,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            if let Some(cf) = &closed_form {
                rows.push(ExitRow::new("closed_form", cf));
            }
            rows.push(ExitRow::new("monte_carlo", &monte_carlo));
            csv_rows(&rows)
        }
    }
}

#[derive(Debug, Serialize)]
struct LogRow {
    run: u64,
    global_time: f64,
    local_time: f64,
    shooter: PlayerId,
    target: PlayerId,
    p_hit: f64,
    outcome: crate::engine::Outcome,
}

#[derive(Debug, Serialize)]
struct SimulateReport {
    #[serde(flatten)]
    estimate: Estimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    log: Option<Vec<LogRow>>,
}

#[derive(Debug, Serialize)]
struct RateRow {
    player: PlayerId,
    survival_rate: f64,
    survival_stderr: f64,
    hit_rate: f64,
    hit_stderr: f64,
}

fn cmd_simulate(
    spec: &GameSpec,
    runs: u64,
    seed: u64,
    policy: Policy,
    log: bool,
    format: Format,
) -> Outcome<String> {
    let est = estimate(spec, &policy, runs, seed)?;
    let log = if log {
        let results = playouts(spec, &policy, runs, seed)?;
        Some(
            results
                .iter()
                .enumerate()
                .flat_map(|(run, r)| {
                    r.shot_log.iter().map(move |e| LogRow {
                        run: run as u64,
                        global_time: e.global_time,
                        local_time: e.local_time,
                        shooter: e.shooter,
                        target: e.target,
                        p_hit: e.p_hit,
                        outcome: e.outcome,
                    })
                })
                .collect(),
        )
    } else {
        None
    };
    match format {
        Format::Json => json(&SimulateReport { estimate: est, log }),
        Format::Csv => {
            let rates: Vec<RateRow> = est
                .players
                .iter()
                .map(|p| RateRow {
                    player: p.player,
                    survival_rate: p.survival_rate,
                    survival_stderr: p.survival_stderr,
                    hit_rate: p.hit_rate,
                    hit_stderr: p.hit_stderr,
                })
                .collect();
            let mut out = csv_rows(&rates)?;
            if let Some(log) = log {
                out.push('\n');
                out.push_str(&csv_rows(&log)?);
            }
            Ok(out)
        }
    }
}

fn cmd_curves(spec: &GameSpec, step: Option<f64>, format: Format) -> Outcome<String> {
    let horizon = spec
        .players()
        .iter()
        .map(|p| p.curve.t_max())
        .fold(0.0, f64::max);
    let step = step.unwrap_or(horizon / 500.0);
    if !(step.is_finite() && step > 0.0) {
        return Err(Failure::Numeric(format!(
            "step must be positive, got {step}"
        )));
    }
    let last = (horizon / step - 1e-9).ceil() as u64;
    let grid: Vec<f64> = (0..=last).map(|k| (k as f64 * step).min(horizon)).collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["t".to_string()];
            header.extend(spec.players().iter().map(|p| format!("P_{}", p.id)));
            let err = |e: csv::Error| Failure::Numeric(e.to_string());
            w.write_record(&header).map_err(err)?;
            for &t in &grid {
                let mut rec = vec![t.to_string()];
                rec.extend(
                    spec.players()
                        .iter()
                        .map(|p| p.curve.prob_at(t).to_string()),
                );
                w.write_record(&rec).map_err(err)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Numeric(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Failure::Numeric(e.to_string()))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Point {
                t: f64,
                p: Vec<f64>,
            }
            #[derive(Serialize)]
            struct CurvesReport {
                players: Vec<PlayerId>,
                rows: Vec<Point>,
            }
            json(&CurvesReport {
                players: spec.players().iter().map(|p| p.id).collect(),
                rows: grid
                    .iter()
                    .map(|&t| Point {
                        t,
                        p: spec.players().iter().map(|p| p.curve.prob_at(t)).collect(),
                    })
                    .collect(),
            })
        }
    }
}

fn dispatch(command: Command) -> Outcome<String> {
    match command {
        Command::Validate { spec } => {
            load(&spec)?;
            Ok(String::new())
        }
        Command::Schedule { spec, format } => {
            cmd_schedule(&load(&spec)?, format.unwrap_or(Format::Json))
        }
        Command::Targets {
            spec,
            player,
            bullets,
            objective,
            format,
        } => cmd_targets(
            &load(&spec)?,
            player,
            bullets,
            objective,
            format.unwrap_or(Format::Json),
        ),
        Command::ExitTimes {
            spec,
            player,
            threshold,
            mc_samples,
            seed,
            format,
        } => cmd_exit_times(
            &load(&spec)?,
            player,
            threshold,
            mc_samples,
            seed,
            format.unwrap_or(Format::Json),
        ),
        Command::Simulate {
            spec,
            runs,
            seed,
            policy,
            objective,
            log,
            format,
        } => cmd_simulate(
            &load(&spec)?,
            runs,
            seed,
            Policy::new(policy).with_objective(objective),
            log,
            format.unwrap_or(Format::Json),
        ),
        Command::Curves { spec, step, format } => {
            cmd_curves(&load(&spec)?, step, format.unwrap_or(Format::Csv))
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            if out.write_all(report.as_bytes()).is_err() {
                return EXIT_NUMERIC;
            }
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}
