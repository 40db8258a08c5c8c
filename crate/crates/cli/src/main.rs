//! Command-line entry point: every verification and simulation as a seeded,
//! reproducible run with machine-readable output.
//!
//! Exit codes: 0 on success, 1 when a check fails or a simulation errors,
//! 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vaidman::games::{
    classical_bound_bruteforce, hidden_variable_check, play_frame_free_detailed, referee_draw,
    run_game, AdversaryMode, StrategyKind, TrialRecord,
};
use vaidman::protocols::{decision_tree, z_classification};
use vaidman::states::{
    phi_zzxx_expansion, psi_sequential_expansion, verify_constants, verify_decompositions,
    verify_decompositions_corrupted, verify_psi12_invariance, verify_u4_invariance,
    IdentityCheck, StateName,
};
use vaidman::tasks::{
    apples_classical_bound, apples_frame_free, apples_quantum, secret_share, AppleAllotment,
    AppleTrial, Eavesdropper, SecretShareReport,
};
use vaidman::{state, RngStream};

#[derive(Parser)]
#[command(name = "vaidman", version, about = "Quantum game simulations with seeded, reproducible reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Root seed; every trial runs on a substream derived from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of trials / rounds (defaults depend on the command).
    #[arg(long)]
    trials: Option<usize>,
    /// Output format. CSV is only available for per-trial data.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    ClassicalBest,
    Ghz,
    FrameFree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryArg {
    None,
    ScrambleOne,
    ScrambleAll,
}

impl From<AdversaryArg> for AdversaryMode {
    fn from(a: AdversaryArg) -> Self {
        match a {
            AdversaryArg::None => AdversaryMode::None,
            AdversaryArg::ScrambleOne => AdversaryMode::ScrambleOne,
            AdversaryArg::ScrambleAll => AdversaryMode::ScrambleAll,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EveArg {
    Off,
    InterceptResend,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GameArg {
    Vaidman,
    Apples,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Apples,
    ApplesFrameFree,
    SecretShare,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity, invariance and constants checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Deliberately flip one sign to prove the checker can fail.
        #[arg(long)]
        corrupt: bool,
        /// Export the generated measurement tables as JSON to this path.
        #[arg(long)]
        export_tables: Option<PathBuf>,
    },
    /// Play full game rounds and report the win rate.
    Play {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = AdversaryArg::None)]
        adversary: AdversaryArg,
        /// Write a per-measurement transcript CSV (frame-free strategy only).
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Exact brute-force classical bounds.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        game: GameArg,
    },
    /// Hidden-variable assignment check for the six logical observables.
    Bell {
        #[command(flatten)]
        common: Common,
        /// Also report the satisfying count with this constraint (0-3) dropped.
        #[arg(long)]
        drop_constraint: Option<usize>,
    },
    /// Run the application protocols.
    Tasks {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long, value_enum, default_value_t = AdversaryArg::None)]
        adversary: AdversaryArg,
        #[arg(long, value_enum, default_value_t = EveArg::Off)]
        eve: EveArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

const USAGE_FAILURE: u8 = 2;
const CHECK_FAILURE: u8 = 1;

fn usage_error(message: &str) -> anyhow::Result<ExitCode> {
    eprintln!("error: {message}");
    Ok(ExitCode::from(USAGE_FAILURE))
}

fn emit(common: &Common, content: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Verify {
            common,
            corrupt,
            export_tables,
        } => cmd_verify(common, corrupt, export_tables),
        Command::Play {
            common,
            strategy,
            adversary,
            transcripts,
        } => cmd_play(common, strategy, adversary.into(), transcripts),
        Command::Bound { common, game } => cmd_bound(common, game),
        Command::Bell {
            common,
            drop_constraint,
        } => cmd_bell(common, drop_constraint),
        Command::Tasks {
            common,
            task,
            adversary,
            eve,
        } => cmd_tasks(common, task, adversary.into(), eve),
    }
}

fn cmd_verify(
    common: Common,
    corrupt: bool,
    export_tables: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    if common.format == Format::Csv {
        return usage_error("verify has no per-trial data; use --format json or human");
    }
    let invariance_trials = common.trials.unwrap_or(100);

    if let Some(path) = &export_tables {
        let tables = json!({
            "adaptive_protocol": decision_tree().to_json(),
            "fixed_protocol": {
                "bases": ["z", "z", "x", "x"],
                "answer0_transcripts": z_classification()
                    .support(0)
                    .iter()
                    .map(|t| format!("{t:04b}"))
                    .collect::<Vec<_>>(),
                "answer1_transcripts": z_classification()
                    .support(1)
                    .iter()
                    .map(|t| format!("{t:04b}"))
                    .collect::<Vec<_>>(),
            },
        });
        std::fs::write(path, render_json(&tables))
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let decompositions = if corrupt {
        verify_decompositions_corrupted()
    } else {
        verify_decompositions()
    };

    // alternative product-basis expansions of the logical states
    let expansion_checks: Vec<IdentityCheck> = [
        ("phi0_zzxx", phi_zzxx_expansion(0), StateName::Phi0, 1e-12),
        ("phi1_zzxx", phi_zzxx_expansion(1), StateName::Phi1, 1e-12),
        ("psi0_sequential", psi_sequential_expansion(0), StateName::Psi0, 1e-10),
        ("psi1_sequential", psi_sequential_expansion(1), StateName::Psi1, 1e-10),
    ]
    .into_iter()
    .map(|(name, expansion, target, tol)| {
        let fidelity = expansion.fidelity(&state(target)).expect("same size");
        IdentityCheck {
            name: name.to_string(),
            fidelity,
            pass: fidelity >= 1.0 - tol,
        }
    })
    .collect();

    let mut invariance = vec![verify_psi12_invariance(
        invariance_trials,
        &mut RngStream::new(common.seed),
    )];
    for name in [StateName::Phi0, StateName::Phi1, StateName::Psi0, StateName::Psi1] {
        invariance.push(verify_u4_invariance(
            name,
            invariance_trials,
            &mut RngStream::new(vaidman::derive_seed(common.seed, name as u64 + 1)),
        )?);
    }

    let constants = verify_constants();
    let all_pass = decompositions.all_pass
        && expansion_checks.iter().all(|c| c.pass)
        && invariance.iter().all(|r| r.all_pass)
        && constants.all_pass;

    let report = json!({
        "command": "verify",
        "seed": common.seed,
        "rng_algorithm": RngStream::ALGORITHM,
        "invariance_trials": invariance_trials,
        "corrupt_self_test": corrupt,
        "identities": decompositions.identities,
        "expansions": expansion_checks,
        "invariance": invariance,
        "constants": constants,
        "all_pass": all_pass,
    });

    let content = match common.format {
        Format::Json => render_json(&report),
        Format::Human => {
            let mut s = String::new();
            writeln!(s, "verification (seed {})", common.seed)?;
            for check in report["identities"].as_array().unwrap() {
                writeln!(
                    s,
                    "  identity {:<18} fidelity {:.12}  {}",
                    check["name"].as_str().unwrap(),
                    check["fidelity"].as_f64().unwrap(),
                    if check["pass"].as_bool().unwrap() { "ok" } else { "FAIL" }
                )?;
            }
            for check in report["expansions"].as_array().unwrap() {
                writeln!(
                    s,
                    "  expansion {:<17} fidelity {:.12}  {}",
                    check["name"].as_str().unwrap(),
                    check["fidelity"].as_f64().unwrap(),
                    if check["pass"].as_bool().unwrap() { "ok" } else { "FAIL" }
                )?;
            }
            for inv in report["invariance"].as_array().unwrap() {
                writeln!(
                    s,
                    "  invariance {:<9} {} trials, min fidelity {:.12}  {}",
                    inv["state"].as_str().unwrap(),
                    inv["trials"].as_u64().unwrap(),
                    inv["min_fidelity"].as_f64().unwrap(),
                    if inv["all_pass"].as_bool().unwrap() { "ok" } else { "FAIL" }
                )?;
            }
            writeln!(
                s,
                "  constants: 4(a^2+b^2) = {:.15}  {}",
                constants.four_alpha_beta,
                if constants.all_pass { "ok" } else { "FAIL" }
            )?;
            writeln!(s, "result: {}", if all_pass { "all checks passed" } else { "FAILED" })?;
            s
        }
        Format::Csv => unreachable!(),
    };
    emit(&common, &content)?;
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(CHECK_FAILURE))
    }
}

fn trial_csv(records: &[TrialRecord]) -> String {
    let mut s = String::from("trial,seed,questions,answer1,answer2,answer3,win\n");
    for (i, r) in records.iter().enumerate() {
        writeln!(
            s,
            "{i},{},{},{},{},{},{}",
            r.seed,
            r.questions.label(),
            r.answers[0],
            r.answers[1],
            r.answers[2],
            r.win
        )
        .unwrap();
    }
    s
}

fn cmd_play(
    common: Common,
    strategy: StrategyArg,
    adversary: AdversaryMode,
    transcripts: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let n_trials = common.trials.unwrap_or(10_000);
    let kind = match strategy {
        StrategyArg::ClassicalBest => StrategyKind::ClassicalBest,
        StrategyArg::Ghz => StrategyKind::Ghz,
        StrategyArg::FrameFree => StrategyKind::FrameFree,
    };
    if transcripts.is_some() && kind != StrategyKind::FrameFree {
        return usage_error("--transcripts requires --strategy frame-free");
    }

    let (report, records) = if let Some(path) = &transcripts {
        // detailed run: same seed schedule as the plain one, plus the
        // per-measurement log
        let root = RngStream::new(common.seed);
        let mut records = Vec::with_capacity(n_trials);
        let mut log = String::from("trial,block,qubit,basis,outcome\n");
        for i in 0..n_trials {
            let mut trial_rng = root.substream(i as u64);
            let questions = referee_draw(&mut trial_rng);
            let (record, outcomes) =
                play_frame_free_detailed(questions, &mut trial_rng, adversary)?;
            for (player, outcome) in outcomes.iter().enumerate() {
                for m in &outcome.transcript {
                    writeln!(log, "{i},{player},{},{},{}", m.qubit, m.basis.name(), m.outcome)
                        .unwrap();
                }
            }
            records.push(record);
        }
        std::fs::write(path, log).with_context(|| format!("writing {}", path.display()))?;
        let wins = records.iter().filter(|r| r.win).count();
        (
            vaidman::games::PlayReport {
                strategy: kind.label().to_string(),
                adversary,
                n_trials,
                wins,
                win_rate: wins as f64 / n_trials as f64,
                seed: common.seed,
                rng_algorithm: RngStream::ALGORITHM,
            },
            records,
        )
    } else {
        run_game(kind, adversary, n_trials, common.seed)?
    };

    let content = match common.format {
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            value["command"] = json!("play");
            render_json(&value)
        }
        Format::Csv => trial_csv(&records),
        Format::Human => format!(
            "strategy {} vs adversary {}: {} wins / {} trials (rate {:.4}), seed {}\n",
            report.strategy, report.adversary.label(), report.wins, report.n_trials,
            report.win_rate, report.seed
        ),
    };
    emit(&common, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(common: Common, game: GameArg) -> anyhow::Result<ExitCode> {
    if common.format == Format::Csv {
        return usage_error("bound has no per-trial data; use --format json or human");
    }
    let (report, human) = match game {
        GameArg::Vaidman => {
            let bound = classical_bound_bruteforce();
            let human = format!(
                "game bound: {}/{} over 64 deterministic strategies ({} maximizers)\n",
                bound.max_wins,
                bound.question_count,
                bound.maximizers.len()
            );
            (
                json!({
                    "command": "bound",
                    "game": "vaidman",
                    "max_wins": bound.max_wins,
                    "question_count": bound.question_count,
                    "bound": format!("{}/{}", bound.max_wins, bound.question_count),
                    "maximizer_count": bound.maximizers.len(),
                    "maximizers": bound.maximizers,
                }),
                human,
            )
        }
        GameArg::Apples => {
            let bound = apples_classical_bound();
            let human = format!(
                "apples bound: {}/{} over both 1-bit message functions\n",
                bound.max_correct, bound.total_allotments
            );
            (
                json!({
                    "command": "bound",
                    "game": "apples",
                    "max_correct": bound.max_correct,
                    "total_allotments": bound.total_allotments,
                    "bound": format!("{}/{}", bound.max_correct, bound.total_allotments),
                    "optimal_message_pairs": bound.optimal_message_pairs,
                }),
                human,
            )
        }
    };
    let content = match common.format {
        Format::Json => render_json(&report),
        Format::Human => human,
        Format::Csv => unreachable!(),
    };
    emit(&common, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bell(common: Common, drop_constraint: Option<usize>) -> anyhow::Result<ExitCode> {
    if common.format == Format::Csv {
        return usage_error("bell has no per-trial data; use --format json or human");
    }
    if let Some(k) = drop_constraint {
        if k > 3 {
            return usage_error("--drop-constraint takes an index from 0 to 3");
        }
    }
    let report = hidden_variable_check();
    let mut value = json!({
        "command": "bell",
        "assignment_count": report.assignment_count,
        "satisfying_all": report.satisfying_all,
        "per_constraint_satisfied": report.per_constraint_satisfied,
        "drop_one_satisfying": report.drop_one_satisfying,
        "satisfaction_matrix": report.satisfaction_matrix,
    });
    if let Some(k) = drop_constraint {
        value["dropped_constraint"] = json!(k);
        value["satisfying_without_it"] = json!(report.drop_one_satisfying[k]);
    }
    let content = match common.format {
        Format::Json => render_json(&value),
        Format::Human => {
            let mut s = format!(
                "{} of {} assignments satisfy all four parity constraints\n",
                report.satisfying_all, report.assignment_count
            );
            writeln!(s, "per-constraint counts: {:?}", report.per_constraint_satisfied)?;
            writeln!(s, "drop-one counts: {:?}", report.drop_one_satisfying)?;
            if let Some(k) = drop_constraint {
                writeln!(
                    s,
                    "without constraint {k}: {} satisfying assignments",
                    report.drop_one_satisfying[k]
                )?;
            }
            s
        }
        Format::Csv => unreachable!(),
    };
    emit(&common, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn apples_csv(trials: &[AppleTrial]) -> String {
    let mut s = String::from("trial,allotment,outcome1,outcome2,outcome3,guessed_even,correct\n");
    for (i, t) in trials.iter().enumerate() {
        writeln!(
            s,
            "{i},\"{}\",{},{},{},{},{}",
            t.allotment.label(),
            t.outcomes[0],
            t.outcomes[1],
            t.outcomes[2],
            t.guessed_even,
            t.correct
        )
        .unwrap();
    }
    s
}

fn secret_share_csv(report: &SecretShareReport) -> String {
    let mut s = String::from("round,basis1,basis2,basis3,answer1,answer2,answer3,kept,disclosed\n");
    for r in &report.rounds {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.round,
            r.bases[0].label(),
            r.bases[1].label(),
            r.bases[2].label(),
            r.answers[0],
            r.answers[1],
            r.answers[2],
            r.kept,
            r.disclosed
        )
        .unwrap();
    }
    s
}

fn cmd_tasks(
    common: Common,
    task: TaskArg,
    adversary: AdversaryMode,
    eve: EveArg,
) -> anyhow::Result<ExitCode> {
    match task {
        TaskArg::Apples | TaskArg::ApplesFrameFree => {
            let frame_free = task == TaskArg::ApplesFrameFree;
            let n_trials = common.trials.unwrap_or(3_200);
            let allotments = AppleAllotment::enumerate();
            let root = RngStream::new(common.seed);
            let mut trials = Vec::with_capacity(n_trials);
            // cycle through the 32 allotments so every one is exercised
            for i in 0..n_trials {
                let allotment = allotments[i % allotments.len()];
                let mut rng = root.substream(i as u64);
                let trial = if frame_free {
                    apples_frame_free(allotment, &mut rng, adversary)?
                } else {
                    apples_quantum(allotment, &mut rng)
                };
                trials.push(trial);
            }
            let correct = trials.iter().filter(|t| t.correct).count();
            let task_name = if frame_free { "apples-frame-free" } else { "apples" };
            let report = json!({
                "command": "tasks",
                "task": task_name,
                "adversary": adversary.label(),
                "n_trials": n_trials,
                "allotments": allotments.len(),
                "correct": correct,
                "success_rate": correct as f64 / n_trials as f64,
                "seed": common.seed,
                "rng_algorithm": RngStream::ALGORITHM,
            });
            let content = match common.format {
                Format::Json => render_json(&report),
                Format::Csv => apples_csv(&trials),
                Format::Human => format!(
                    "{task_name} vs adversary {}: {correct}/{n_trials} correct over {} allotments, seed {}\n",
                    adversary.label(),
                    allotments.len(),
                    common.seed
                ),
            };
            emit(&common, &content)?;
        }
        TaskArg::SecretShare => {
            let n_rounds = common.trials.unwrap_or(10_000);
            let eavesdropper = match eve {
                EveArg::Off => Eavesdropper::Off,
                EveArg::InterceptResend => Eavesdropper::InterceptResend,
            };
            let mut rng = RngStream::new(common.seed);
            let report = secret_share(n_rounds, &mut rng, adversary, eavesdropper)?;
            let value = json!({
                "command": "tasks",
                "task": "secret-share",
                "adversary": adversary.label(),
                "eavesdropper": eavesdropper.label(),
                "n_rounds": report.n_rounds,
                "kept": report.kept,
                "sift_rate": report.sift_rate,
                "disclosed": report.disclosed,
                "disclosed_errors": report.disclosed_errors,
                "qber": report.qber,
                "key_bits": report.alice_key.len(),
                "alice_key_hex": report.alice_key_hex(),
                "bob_charlie_key_hex": report.bob_charlie_key_hex(),
                "seed": report.seed,
                "rng_algorithm": report.rng_algorithm,
            });
            let content = match common.format {
                Format::Json => render_json(&value),
                Format::Csv => secret_share_csv(&report),
                Format::Human => format!(
                    "secret sharing over {} rounds (eve {}): kept {} (rate {:.4}), QBER {:.4}, {} key bits, seed {}\n",
                    report.n_rounds,
                    eavesdropper.label(),
                    report.kept,
                    report.sift_rate,
                    report.qber,
                    report.alice_key.len(),
                    report.seed
                ),
            };
            emit(&common, &content)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
