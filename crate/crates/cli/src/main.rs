//! Command-line harness for the measurement-game experiments.
//!
//! Six subcommands cover the library surface: `weights` (axiom-driven weight
//! derivations), `simulate` (seeded repeated trials vs the exact law),
//! `ledger` (branch-class combinatorics), `channel` (angle-estimation
//! signaling), `classical` (ball and breeding analogs), and `neutrality`
//! (refinement-invariance checks, classical or quantum).
//!
//! Exit codes: 0 success, 2 usage, 3 configuration, 4 size limits.

mod parse;
mod record;

use borngames::channel::{decode_symbol, run_channel, ChannelConfig, DecodeReport};
use borngames::classical::{
    ball_game_process, neutrality_check, rabbit_process, BallGameMode, DrawTime, RabbitMode,
    RabbitScenario, SelectionRule, TwoStageProcess,
};
use borngames::games::{
    derive_weight_function, derive_weights_rational, game_value, AxiomSet, DerivationStep,
    RewardSchedule,
};
use borngames::ledger::{enumerate_branch_classes, typicality_report, LedgerRow, LedgerSummary};
use borngames::quantum::{AncillaSpec, MeasurementSetup};
use borngames::sampling::{
    neutrality_gap, outcome_distribution, randomizer_scenario, run_experiment, Seed, Semantics,
};
use borngames::weights::{format_ratio, Scalar};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use record::{emit, ExperimentManifest, ResultRecord};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "borngames",
    version,
    about = "Measurement games: Born weights, branch counting, and where they part ways"
)]
struct Cli {
    /// Write the result record to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Record the current time in the manifest (off by default so identical
    /// invocations stay byte-identical).
    #[arg(long, global = true)]
    stamp_time: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive outcome weights from an axiom set, exactly at rational points.
    Weights(WeightsArgs),
    /// Run seeded repeated trials and compare against the exact law.
    Simulate(SimulateArgs),
    /// Tabulate the branch classes after N measurements.
    Ledger(LedgerArgs),
    /// Run the angle-estimation signaling channel from a JSON config.
    Channel(ChannelArgs),
    /// Evaluate the classical analog games.
    Classical(ClassicalArgs),
    /// Check whether a refinement stage changes the coarse statistics.
    Neutrality(NeutralityArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["theta", "ratio", "randomizer"])))]
struct WeightsArgs {
    /// Magnet angle: decimal radians or a pi form like "pi/3".
    #[arg(long)]
    theta: Option<String>,

    /// Exact plus-channel weight as a rational "p/q" (or a decimal).
    #[arg(long)]
    ratio: Option<String>,

    /// Randomizer scenario: the plus channel splits into this many branches.
    #[arg(long, conflicts_with_all = ["neutrality", "branch_count", "ancilla"])]
    randomizer: Option<u64>,

    /// Derive under measurement neutrality.
    #[arg(long)]
    neutrality: bool,

    /// Derive under branch counting.
    #[arg(long)]
    branch_count: bool,

    /// Refinement multiplicities "K+,K-".
    #[arg(long)]
    ancilla: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Magnet angle: decimal radians or a pi form like "pi/3".
    #[arg(long)]
    theta: String,

    #[arg(long, value_enum)]
    semantics: SemanticsArg,

    /// Number of trials.
    #[arg(long)]
    n: u64,

    /// Rewards "x+,x-" paid on the two outcomes.
    #[arg(long, default_value = "1,0")]
    rewards: String,

    /// Refinement multiplicities "K+,K-".
    #[arg(long)]
    ancilla: Option<String>,

    /// RNG seed; required, there is no implicit time-based seeding.
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct LedgerArgs {
    /// Number of measurements.
    #[arg(long)]
    n: u32,

    /// Plus-channel weight c^2: a rational "p/q" or a decimal (converted
    /// exactly).
    #[arg(long)]
    c2: String,

    /// Typicality window half-width, in Born standard deviations.
    #[arg(long)]
    k: Option<f64>,

    /// Also write the class table as CSV.
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct ChannelArgs {
    /// JSON config file (see README for the schema).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Also write per-symbol decoding rows as CSV.
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct ClassicalArgs {
    #[arg(long, value_enum)]
    game: GameArg,

    /// Insert the splitter box (ball games only).
    #[arg(long)]
    with_box: bool,

    /// Litter sizes "black,white" (rabbit games only).
    #[arg(long, default_value = "3,1")]
    litters: String,

    /// When the draw happens (rabbit games only).
    #[arg(long, value_enum, default_value = "before")]
    draw: DrawArg,

    /// Rewards "x_black,x_white" (rabbit games only).
    #[arg(long, default_value = "1,0")]
    rewards: String,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["process", "stage1", "theta"])))]
struct NeutralityArgs {
    /// A named process: the ball games or the breeding games.
    #[arg(long, value_enum)]
    process: Option<ProcessArg>,

    /// Custom stage-1 distribution as rationals "p1,p2,...".
    #[arg(long, requires = "refinement", requires = "rule")]
    stage1: Option<String>,

    /// Custom per-label refinement "k1,k2,...".
    #[arg(long)]
    refinement: Option<String>,

    /// Custom selection rule.
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,

    /// Quantum check: magnet angle (requires --semantics and --ancilla).
    #[arg(long, requires = "semantics", requires = "ancilla")]
    theta: Option<String>,

    #[arg(long, value_enum)]
    semantics: Option<SemanticsArg>,

    /// Refinement multiplicities "K+,K-" for the quantum check.
    #[arg(long)]
    ancilla: Option<String>,

    /// Litter sizes for the breeding processes.
    #[arg(long, default_value = "3,1")]
    litters: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SemanticsArg {
    Copenhagen,
    EverettCount,
    BornWeighted,
}

impl From<SemanticsArg> for Semantics {
    fn from(arg: SemanticsArg) -> Self {
        match arg {
            SemanticsArg::Copenhagen => Semantics::CopenhagenBorn,
            SemanticsArg::EverettCount => Semantics::EverettBranchCount,
            SemanticsArg::BornWeighted => Semantics::BornWeightedBranch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GameArg {
    CBall,
    EBall,
    RabbitCopenhagen,
    RabbitEverett,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DrawArg {
    Before,
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ProcessArg {
    CBall,
    EBall,
    RabbitCopenhagen,
    RabbitEverett,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RuleArg {
    Follow,
    Draw,
}

/// Errors mapped onto the exit-code contract.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(String),
    Size(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Size(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Size(m) => write!(f, "size error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<borngames::Error> for CliError {
    fn from(err: borngames::Error) -> Self {
        match err {
            borngames::Error::SizeLimit(_) => CliError::Size(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

fn usage<T>(result: Result<T, String>) -> Result<T, CliError> {
    result.map_err(CliError::Usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (mut manifest, payload) = match &cli.command {
        Command::Weights(args) => cmd_weights(args)?,
        Command::Simulate(args) => cmd_simulate(args)?,
        Command::Ledger(args) => cmd_ledger(args)?,
        Command::Channel(args) => cmd_channel(args)?,
        Command::Classical(args) => cmd_classical(args)?,
        Command::Neutrality(args) => cmd_neutrality(args)?,
    };
    if cli.stamp_time {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        manifest.timestamp = Some(now);
    }
    let record = ResultRecord::new(manifest, payload);
    emit(&record.to_json(), cli.out.as_deref())?;
    Ok(())
}

fn parse_optional_ancilla(arg: &Option<String>) -> Result<Option<AncillaSpec>, CliError> {
    match arg {
        None => Ok(None),
        Some(s) => {
            let (k_plus, k_minus) = usage(parse::parse_u32_pair(s))?;
            Ok(Some(AncillaSpec::new(k_plus, k_minus)?))
        }
    }
}

fn axioms_from_flags(neutrality: bool, branch_count: bool) -> AxiomSet {
    AxiomSet {
        phase_invariance: true,
        permutation_symmetry: true,
        ancilla_composition: true,
        measurement_neutrality: neutrality,
        continuity: true,
        branch_counting: branch_count,
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DerivationPayload {
    ancilla: Option<AncillaSpec>,
    steps: Vec<DerivationStep>,
    checks_passed: bool,
}

fn cmd_weights(args: &WeightsArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let params = json!({
        "theta": args.theta,
        "ratio": args.ratio,
        "randomizer": args.randomizer,
        "neutrality": args.neutrality,
        "branchCount": args.branch_count,
        "ancilla": args.ancilla,
    });
    let manifest = ExperimentManifest::new("weights", params, None);

    if let Some(multiplier) = args.randomizer {
        let weights = randomizer_scenario(multiplier)?;
        let payload = json!({
            "rule": "branch-counting",
            "weights": weights,
            "randomizerMultiplier": multiplier,
        });
        return Ok((manifest, payload));
    }

    let ancilla = parse_optional_ancilla(&args.ancilla)?;
    let axioms = axioms_from_flags(args.neutrality, args.branch_count);
    let rule_name = |axioms: &AxiomSet| {
        if axioms.measurement_neutrality { "measurement-neutrality" } else { "branch-counting" }
    };

    if let Some(ratio_str) = &args.ratio {
        let c_squared = usage(parse::parse_ratio(ratio_str))?;
        let derivation = derive_weights_rational(&c_squared, &axioms, ancilla.as_ref())?;
        let payload = json!({
            "rule": rule_name(&axioms),
            "cSquared": format_ratio(&c_squared),
            "weights": derivation.weights,
            "derivation": DerivationPayload {
                ancilla: derivation.ancilla,
                steps: derivation.steps,
                checks_passed: true,
            },
        });
        return Ok((manifest, payload));
    }

    let theta = usage(parse::parse_angle(args.theta.as_ref().expect("clap group")))?;
    let weights = derive_weight_function(theta, &axioms, ancilla.as_ref())?;
    let payload = json!({
        "rule": rule_name(&axioms),
        "thetaRadians": theta.radians(),
        "weights": weights,
        "derivation": DerivationPayload { ancilla, steps: vec![], checks_passed: true },
    });
    Ok((manifest, payload))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let params = json!({
        "theta": args.theta,
        "semantics": args.semantics,
        "n": args.n,
        "rewards": args.rewards,
        "ancilla": args.ancilla,
        "seed": args.seed,
    });
    let manifest = ExperimentManifest::new("simulate", params, Some(args.seed));

    let theta = usage(parse::parse_angle(&args.theta))?;
    let ancilla = parse_optional_ancilla(&args.ancilla)?;
    let (x_plus, x_minus) = usage(parse::parse_f64_pair(&args.rewards))?;
    let rewards = RewardSchedule::pair(x_plus, x_minus)?;
    let setup = MeasurementSetup { angle: theta, ancilla };
    let semantics = Semantics::from(args.semantics);

    let stats = run_experiment(&setup, semantics, args.n, &rewards, Seed::new(args.seed))?;
    let exact = outcome_distribution(&setup, semantics);
    let exact_fraction = exact.get_f64(0);
    let payload = json!({
        "stats": stats,
        "exact": {
            "distribution": exact,
            "fractionPlus": exact_fraction,
            "absError": (stats.empirical_fraction_plus - exact_fraction).abs(),
        },
    });
    Ok((manifest, payload))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SummaryPayload {
    n_trials: u32,
    c_squared: String,
    c_squared_approx: f64,
    born_mode: u32,
    born_mode_tied: bool,
    born_std: f64,
    count_mode: u32,
    count_mode_tied: bool,
    typicality: Option<TypicalityPayload>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TypicalityPayload {
    k: f64,
    window: Option<(u32, u32)>,
    born_mass_in_window: String,
    born_mass_approx: f64,
    count_fraction_in_window: String,
    count_fraction_approx: f64,
}

impl From<&LedgerSummary> for SummaryPayload {
    fn from(summary: &LedgerSummary) -> Self {
        SummaryPayload {
            n_trials: summary.n_trials,
            c_squared: format_ratio(&summary.c_squared),
            c_squared_approx: summary.c_squared.to_f64().unwrap_or(f64::NAN),
            born_mode: summary.born_mode,
            born_mode_tied: summary.born_mode_tied,
            born_std: summary.born_std,
            count_mode: summary.count_mode,
            count_mode_tied: summary.count_mode_tied,
            typicality: summary.typicality.as_ref().map(|t| TypicalityPayload {
                k: t.k,
                window: t.window,
                born_mass_in_window: format_ratio(&t.born_mass_in_window),
                born_mass_approx: t.born_mass_in_window.to_f64().unwrap_or(f64::NAN),
                count_fraction_in_window: format_ratio(&t.count_fraction_in_window),
                count_fraction_approx: t.count_fraction_in_window.to_f64().unwrap_or(f64::NAN),
            }),
        }
    }
}

fn cmd_ledger(args: &LedgerArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let params = json!({
        "n": args.n,
        "c2": args.c2,
        "k": args.k,
        "table": args.table.as_ref().map(|p| p.display().to_string()),
    });
    let manifest = ExperimentManifest::new("ledger", params, None);

    let c_squared = usage(parse::parse_ratio(&args.c2))?;
    let classes = enumerate_branch_classes(args.n, &c_squared)?;
    let summary = match args.k {
        Some(k) => typicality_report(args.n, &c_squared, k)?,
        None => borngames::ledger::born_summary(args.n, &c_squared)?,
    };

    let rows: Vec<LedgerRow> = classes.iter().map(LedgerRow::from).collect();
    if let Some(path) = &args.table {
        let mut csv = String::from("m,count,perBranchWeight,classWeight\n");
        for row in &rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                row.m, row.count, row.per_branch_weight, row.class_weight
            ));
        }
        std::fs::write(path, csv)?;
    }

    let payload = json!({
        "summary": SummaryPayload::from(&summary),
        "classes": rows,
    });
    Ok((manifest, payload))
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ChannelConfigFile {
    alphabet: Vec<String>,
    particles_per_symbol: u64,
    message_length: usize,
    semantics: SemanticsArg,
    seed: u64,
    #[serde(default)]
    message: Option<Vec<usize>>,
}

fn cmd_channel(args: &ChannelArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let file: ChannelConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;

    let params = json!({
        "configPath": args.config.display().to_string(),
        "config": file,
        "table": args.table.as_ref().map(|p| p.display().to_string()),
    });
    let manifest = ExperimentManifest::new("channel", params, Some(file.seed));

    let mut alphabet = Vec::with_capacity(file.alphabet.len());
    for entry in &file.alphabet {
        alphabet.push(parse::parse_angle(entry).map_err(CliError::Config)?);
    }
    let config = ChannelConfig::new(
        alphabet,
        file.particles_per_symbol,
        file.message_length,
        Semantics::from(file.semantics),
        Seed::new(file.seed),
    )?;
    let message = match &file.message {
        Some(m) => m.clone(),
        None => config.default_message(),
    };
    let report = run_channel(&config, &message)?;

    if let Some(path) = &args.table {
        std::fs::write(path, channel_table(&config, &message, &report)?)?;
    }

    let payload = json!({
        "alphabetRadians": config.alphabet.iter().map(|a| a.radians()).collect::<Vec<_>>(),
        "message": message,
        "report": report,
    });
    Ok((manifest, payload))
}

fn channel_table(
    config: &ChannelConfig,
    message: &[usize],
    report: &DecodeReport,
) -> Result<String, CliError> {
    let mut csv = String::from("symbolIndex,sentIndex,sentThetaRadians,m,n,thetaHat,decodedIndex,correct\n");
    for (i, (&sent, estimate)) in message.iter().zip(&report.per_symbol_estimates).enumerate() {
        let decoded = decode_symbol(estimate, &config.alphabet)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            i,
            sent,
            config.alphabet[sent].radians(),
            estimate.m,
            estimate.n,
            estimate.theta_hat,
            decoded,
            decoded == sent
        ));
    }
    Ok(csv)
}

fn cmd_classical(args: &ClassicalArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let params = json!({
        "game": args.game,
        "withBox": args.with_box,
        "litters": args.litters,
        "draw": args.draw,
        "rewards": args.rewards,
    });
    let manifest = ExperimentManifest::new("classical", params, None);

    let payload = match args.game {
        GameArg::CBall | GameArg::EBall => {
            let mode = if args.game == GameArg::CBall {
                BallGameMode::Copenhagen
            } else {
                BallGameMode::Everett
            };
            let distribution = ball_game_process(mode, args.with_box).coarse_distribution();
            json!({
                "game": args.game,
                "withBox": args.with_box,
                "outcomes": ["black/upper", "white/lower"],
                "distribution": distribution,
            })
        }
        GameArg::RabbitCopenhagen | GameArg::RabbitEverett => {
            let (black, white) = usage(parse::parse_u32_pair(&args.litters))?;
            let (x_black, x_white) = usage(parse::parse_f64_pair(&args.rewards))?;
            let mode = if args.game == GameArg::RabbitCopenhagen {
                RabbitMode::Copenhagen
            } else {
                RabbitMode::Everett
            };
            let draw = match args.draw {
                DrawArg::Before => DrawTime::BeforeBirth,
                DrawArg::After => DrawTime::AfterBirth,
            };
            let scenario = RabbitScenario::new(black, white, draw, mode)?;
            let distribution = rabbit_process(&scenario).coarse_distribution();
            let rewards = RewardSchedule::pair(x_black, x_white)?;
            let value = game_value(&distribution, &rewards)?;
            json!({
                "game": args.game,
                "scenario": scenario,
                "outcomes": ["black", "white"],
                "distribution": distribution,
                "rewards": [x_black, x_white],
                "value": value.value(),
            })
        }
    };
    Ok((manifest, payload))
}

fn named_process(process: ProcessArg, litters: &str) -> Result<TwoStageProcess, CliError> {
    Ok(match process {
        ProcessArg::CBall => ball_game_process(BallGameMode::Copenhagen, true),
        ProcessArg::EBall => ball_game_process(BallGameMode::Everett, true),
        ProcessArg::RabbitCopenhagen => {
            let (black, white) = usage(parse::parse_u32_pair(litters))?;
            rabbit_process(&RabbitScenario::new(
                black,
                white,
                DrawTime::AfterBirth,
                RabbitMode::Copenhagen,
            )?)
        }
        ProcessArg::RabbitEverett => {
            let (black, white) = usage(parse::parse_u32_pair(litters))?;
            rabbit_process(&RabbitScenario::new(
                black,
                white,
                DrawTime::AfterBirth,
                RabbitMode::Everett,
            )?)
        }
    })
}

fn cmd_neutrality(args: &NeutralityArgs) -> Result<(ExperimentManifest, serde_json::Value), CliError> {
    let params = json!({
        "process": args.process,
        "stage1": args.stage1,
        "refinement": args.refinement,
        "rule": args.rule,
        "theta": args.theta,
        "semantics": args.semantics,
        "ancilla": args.ancilla,
        "litters": args.litters,
    });
    let manifest = ExperimentManifest::new("neutrality", params, None);

    // Quantum mode: compare the coarse distribution with and without the
    // refinement under the chosen semantics.
    if let Some(theta_str) = &args.theta {
        let theta = usage(parse::parse_angle(theta_str))?;
        let semantics = Semantics::from(args.semantics.expect("clap requires"));
        let ancilla = parse_optional_ancilla(&args.ancilla)?.expect("clap requires");
        let setup = MeasurementSetup::new(theta);
        let gap = neutrality_gap(&setup, &ancilla, semantics)?;
        let refined = MeasurementSetup::with_ancilla(theta, ancilla);
        let payload = json!({
            "target": "quantum-setup",
            "thetaRadians": theta.radians(),
            "semantics": args.semantics,
            "ancilla": ancilla,
            "holds": gap.is_zero(),
            "gap": gap,
            "withRefinement": outcome_distribution(&refined, semantics),
            "withoutRefinement": outcome_distribution(&setup, semantics),
        });
        return Ok((manifest, payload));
    }

    let (target, process) = if let Some(named) = args.process {
        (json!(named), named_process(named, &args.litters)?)
    } else {
        let stage1 = usage(parse::parse_ratio_list(args.stage1.as_ref().expect("clap group")))?;
        let refinement =
            usage(parse::parse_u32_list(args.refinement.as_ref().expect("clap requires")))?;
        let rule = match args.rule.expect("clap requires") {
            RuleArg::Follow => SelectionRule::FollowOneBall,
            RuleArg::Draw => SelectionRule::DrawFromReceptacle,
        };
        (json!("custom-process"), TwoStageProcess::new(stage1, refinement, rule)?)
    };

    let report = neutrality_check(&process);
    let flattened = TwoStageProcess::new(
        process.stage1().to_vec(),
        vec![1; process.refinement().len()],
        process.selection_rule(),
    )?;
    let payload = json!({
        "target": target,
        "selectionRule": process.selection_rule(),
        "refinement": process.refinement(),
        "holds": report.holds,
        "gap": Scalar::Exact(report.gap),
        "withRefinement": process.coarse_distribution(),
        "withoutRefinement": flattened.coarse_distribution(),
    });
    Ok((manifest, payload))
}
