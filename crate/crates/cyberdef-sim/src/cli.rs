//! Command-line front end.
//!
//! Subcommands: `gen` (topology files), `train` (Q-learning curves and
//! checkpoints), `eval` (frozen-policy statistics), `sweep` (detection
//! settings vs. return), `compare` (baseline vs. detector encoding
//! learning curves) and `replay` (verify and render a trace). Every
//! command writes a manifest sufficient to rerun it exactly, and
//! identical inputs produce byte-identical outputs.
//!
//! Exit codes: 0 success, 1 usage, 2 configuration, 3 trace
//! divergence/verification failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::agents::{
    self, ActionCatalog, EvalStats, GreedyQPolicy, HeuristicPolicy, NoopPolicy, QLearner, QTable,
    RandomPolicy,
};
use crate::canon;
use crate::detection::{self, DetectorConfig};
use crate::engine::{self, Engine, Policy, ReplayError};
use crate::reward::{self, RewardConfig};
use crate::scenario::{load_scenario, ScenarioConfig};
use crate::trace::EpisodeTrace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// One experiment invocation, straight from the command line.
#[derive(Debug, Parser)]
#[command(name = "cyberdef-sim", version, about = "Turn-based cyber-defense simulator")]
pub struct ExperimentSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a topology file from a scenario.
    Gen(GenArgs),
    /// Train a tabular Q-learner; writes curve.csv and qtable.json.
    Train(TrainArgs),
    /// Evaluate a frozen policy; writes stats.csv.
    Eval(EvalArgs),
    /// Evaluate one policy under several detection settings.
    Sweep(SweepArgs),
    /// Train under both observation encodings with identical seeds.
    Compare(CompareArgs),
    /// Verify a recorded trace and render it turn by turn.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Experiment seed. CYBERDEF_SIM_SEED overrides the default only;
    /// an explicit --seed always wins.
    #[arg(long, env = "CYBERDEF_SIM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Detector preset name or config path; overrides the scenario.
    #[arg(long)]
    pub detector_preset: Option<String>,
    /// Reward preset name or config path; overrides the scenario.
    #[arg(long)]
    pub reward_preset: Option<String>,
    /// Observation encoding; overrides the scenario.
    #[arg(long, value_parser = parse_encoding)]
    pub encoding: Option<crate::detection::ObservationEncoding>,
}

fn parse_encoding(s: &str) -> Result<crate::detection::ObservationEncoding, String> {
    match s {
        "baseline" => Ok(crate::detection::ObservationEncoding::Baseline),
        "detector" => Ok(crate::detection::ObservationEncoding::Detector),
        other => Err(format!("unknown encoding {other:?} (expected baseline|detector)")),
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1000)]
    pub episodes: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 100)]
    pub episodes: u32,
    /// Policy: noop | random | heuristic | qtable:<checkpoint path>.
    #[arg(long, default_value = "heuristic")]
    pub policy: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated detection settings (preset names or paths).
    #[arg(long, default_value = "perfect,realistic", value_delimiter = ',')]
    pub settings: Vec<String>,
    #[arg(long, default_value = "heuristic")]
    pub policy: String,
    #[arg(long, default_value_t = 500)]
    pub episodes: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1000)]
    pub episodes: u32,
    /// Final window (episodes) for the summary means.
    #[arg(long, default_value_t = 1000)]
    pub window: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Trace file (JSON Lines) to verify and render.
    #[arg(long)]
    pub trace: PathBuf,
    /// Render only this turn.
    #[arg(long)]
    pub turn: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

fn io_err(context: &str, path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{context} {}: {err}", path.display()))
}

/// Parses argv and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match ExperimentSpec::try_parse_from(args) {
        Ok(spec) => spec,
        Err(err) => {
            // clap renders its own help/version output through the error.
            let _ = err.print();
            return if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(spec) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(spec: ExperimentSpec) -> Result<(), CliError> {
    match spec.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Train(args) => cmd_train(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Replay(args) => cmd_replay(&args),
    }
}

// ============================================================================
// Shared plumbing
// ============================================================================

/// Scenario with CLI overrides applied; this effective config is what
/// gets hashed into manifests and trace headers.
fn load_effective_scenario(common: &CommonArgs) -> Result<ScenarioConfig, CliError> {
    let mut scenario =
        load_scenario(&common.scenario).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(preset) = &common.detector_preset {
        scenario.detector_config_ref = preset.clone();
    }
    if let Some(preset) = &common.reward_preset {
        scenario.reward_config_ref = preset.clone();
    }
    if let Some(encoding) = common.encoding {
        scenario.encoding = encoding;
    }
    Ok(scenario)
}

fn resolve_configs(
    scenario: &ScenarioConfig,
) -> Result<(DetectorConfig, RewardConfig), CliError> {
    let detectors = detection::resolve_detector_ref(&scenario.detector_config_ref)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let reward_config = reward::resolve_reward_ref(&scenario.reward_config_ref)
        .map_err(|e| CliError::Config(e.to_string()))?;
    for warning in reward_config.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok((detectors, reward_config))
}

fn build_policy(
    name: &str,
    seed: u64,
    catalog: &ActionCatalog,
) -> Result<Box<dyn Policy>, CliError> {
    match name {
        "noop" => Ok(Box::new(NoopPolicy)),
        "random" => Ok(Box::new(RandomPolicy::new(seed))),
        "heuristic" => Ok(Box::new(HeuristicPolicy)),
        other => {
            if let Some(path) = other.strip_prefix("qtable:") {
                let table = QTable::load(path).map_err(|e| CliError::Config(e.to_string()))?;
                if table.actions != catalog.len() {
                    return Err(CliError::Config(format!(
                        "checkpoint has {} actions but the scenario catalog has {}",
                        table.actions,
                        catalog.len()
                    )));
                }
                Ok(Box::new(GreedyQPolicy { table }))
            } else {
                Err(CliError::Config(format!(
                    "unknown policy {other:?} (expected noop|random|heuristic|qtable:<path>)"
                )))
            }
        }
    }
}

fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| io_err("cannot create output directory", out, e))
}

fn fmt_float(x: f64) -> String {
    format!("{}", canon::round6(x))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| io_err("cannot write", path, e))
}

fn write_csv(
    path: &Path,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<(), CliError> {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    write_file(path, &out)
}

/// Writes manifest.json: the exact inputs (paths, refs, hashes, seed,
/// sizes) plus the produced files, enough to rerun the command.
#[allow(clippy::too_many_arguments)]
fn write_manifest(
    out: &Path,
    command: &str,
    common: &CommonArgs,
    scenario: &ScenarioConfig,
    detectors: Option<&DetectorConfig>,
    reward_config: Option<&RewardConfig>,
    extra: BTreeMap<String, serde_json::Value>,
    outputs: &[&str],
) -> Result<(), CliError> {
    let mut manifest = BTreeMap::new();
    manifest.insert("format_version".to_string(), serde_json::json!("manifest/1"));
    manifest.insert("command".to_string(), serde_json::json!(command));
    manifest.insert(
        "scenario_path".to_string(),
        serde_json::json!(common.scenario.display().to_string()),
    );
    manifest.insert(
        "scenario_hash".to_string(),
        serde_json::json!(canon::hash_hex(scenario)),
    );
    manifest.insert("scenario_seed".to_string(), serde_json::json!(scenario.seed));
    manifest.insert("seed".to_string(), serde_json::json!(common.seed));
    manifest.insert(
        "detector_ref".to_string(),
        serde_json::json!(scenario.detector_config_ref),
    );
    manifest.insert(
        "reward_ref".to_string(),
        serde_json::json!(scenario.reward_config_ref),
    );
    manifest.insert(
        "encoding".to_string(),
        serde_json::json!(scenario.encoding.to_string()),
    );
    if let Some(d) = detectors {
        manifest.insert("detector_hash".to_string(), serde_json::json!(canon::hash_hex(d)));
    }
    if let Some(r) = reward_config {
        manifest.insert("reward_hash".to_string(), serde_json::json!(canon::hash_hex(r)));
    }
    for (k, v) in extra {
        manifest.insert(k, v);
    }
    manifest.insert("outputs".to_string(), serde_json::json!(outputs));
    let text = canon::to_canonical_string(&manifest)
        .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
    write_file(&out.join("manifest.json"), &(text + "\n"))
}

// ============================================================================
// Commands
// ============================================================================

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let scenario = load_effective_scenario(&args.common)?;
    // gen respects an explicit experiment seed, else the scenario seed,
    // so the file matches what reset() will build.
    let seed = if args.common.seed != 0 {
        args.common.seed
    } else {
        scenario.seed
    };
    let topology = crate::scenario::generate_topology(&scenario, seed)
        .map_err(|e| CliError::Config(e.to_string()))?;
    ensure_out_dir(&args.out)?;
    let text = canon::to_canonical_string(&topology)
        .map_err(|e| CliError::Io(format!("topology serialization: {e}")))?;
    write_file(&args.out.join("topology.json"), &(text + "\n"))?;
    let mut extra = BTreeMap::new();
    extra.insert("topology_seed".to_string(), serde_json::json!(seed));
    write_manifest(
        &args.out,
        "gen",
        &args.common,
        &scenario,
        None,
        None,
        extra,
        &["topology.json"],
    )?;
    println!(
        "wrote topology.json: {} subnets, {} hosts, critical host {}",
        topology.subnet_count(),
        topology.host_count(),
        topology.critical_host
    );
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<(), CliError> {
    let scenario = load_effective_scenario(&args.common)?;
    let (detectors, reward_config) = resolve_configs(&scenario)?;
    let mut engine =
        Engine::with_configs(&scenario, detectors.clone(), reward_config.clone(), 0)
            .map_err(|e| CliError::Config(e.to_string()))?;
    let catalog = ActionCatalog::for_engine(&engine);
    let mut learner = QLearner::new(catalog.len(), args.common.seed);
    let curve = agents::train_with(&mut engine, &mut learner, args.episodes, args.common.seed)
        .map_err(|e| CliError::Config(e.to_string()))?;
    ensure_out_dir(&args.out)?;
    write_csv(
        &args.out.join("curve.csv"),
        "episode,return",
        curve
            .iter()
            .enumerate()
            .map(|(i, r)| format!("{i},{}", fmt_float(*r))),
    )?;
    learner
        .table
        .save(args.out.join("qtable.json"))
        .map_err(|e| io_err("cannot write", &args.out.join("qtable.json"), e))?;
    let mut extra = BTreeMap::new();
    extra.insert("episodes".to_string(), serde_json::json!(args.episodes));
    write_manifest(
        &args.out,
        "train",
        &args.common,
        &scenario,
        Some(&detectors),
        Some(&reward_config),
        extra,
        &["curve.csv", "qtable.json"],
    )?;
    let tail = &curve[curve.len().saturating_sub(100)..];
    println!(
        "trained {} episodes; final-100 mean return {}",
        args.episodes,
        fmt_float(agents::mean(tail))
    );
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let scenario = load_effective_scenario(&args.common)?;
    let (detectors, reward_config) = resolve_configs(&scenario)?;
    let mut engine =
        Engine::with_configs(&scenario, detectors.clone(), reward_config.clone(), 0)
            .map_err(|e| CliError::Config(e.to_string()))?;
    let catalog = ActionCatalog::for_engine(&engine);
    let mut policy = build_policy(&args.policy, args.common.seed, &catalog)?;
    let stats =
        agents::evaluate_with(&mut engine, policy.as_mut(), args.episodes, args.common.seed)
            .map_err(|e| CliError::Config(e.to_string()))?;
    ensure_out_dir(&args.out)?;
    write_stats_csv(&args.out.join("stats.csv"), &stats)?;
    let mut extra = BTreeMap::new();
    extra.insert("episodes".to_string(), serde_json::json!(args.episodes));
    extra.insert("policy".to_string(), serde_json::json!(args.policy));
    extra.insert(
        "mean_return".to_string(),
        serde_json::json!(canon::round6(stats.mean)),
    );
    extra.insert(
        "std_return".to_string(),
        serde_json::json!(canon::round6(stats.std)),
    );
    write_manifest(
        &args.out,
        "eval",
        &args.common,
        &scenario,
        Some(&detectors),
        Some(&reward_config),
        extra,
        &["stats.csv"],
    )?;
    println!(
        "{} over {} episodes: mean return {}, std {}",
        args.policy,
        args.episodes,
        fmt_float(stats.mean),
        fmt_float(stats.std)
    );
    Ok(())
}

fn write_stats_csv(path: &Path, stats: &EvalStats) -> Result<(), CliError> {
    write_csv(
        path,
        "episode,return",
        stats
            .returns
            .iter()
            .enumerate()
            .map(|(i, r)| format!("{i},{}", fmt_float(*r))),
    )
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.settings.len() < 2 {
        return Err(CliError::Config(
            "sweep needs at least 2 detection settings (--settings a,b,...)".to_string(),
        ));
    }
    let scenario = load_effective_scenario(&args.common)?;
    let (_, reward_config) = resolve_configs(&scenario)?;
    let mut rows = Vec::new();
    for setting in &args.settings {
        let detectors = detection::resolve_detector_ref(setting)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let mut engine =
            Engine::with_configs(&scenario, detectors, reward_config.clone(), 0)
                .map_err(|e| CliError::Config(e.to_string()))?;
        let catalog = ActionCatalog::for_engine(&engine);
        let mut policy = build_policy(&args.policy, args.common.seed, &catalog)?;
        let stats =
            agents::evaluate_with(&mut engine, policy.as_mut(), args.episodes, args.common.seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
        rows.push(format!(
            "{},{},{},{}",
            setting,
            args.policy,
            fmt_float(stats.mean),
            fmt_float(stats.std)
        ));
        println!(
            "setting {}: mean return {} (std {})",
            setting,
            fmt_float(stats.mean),
            fmt_float(stats.std)
        );
    }
    ensure_out_dir(&args.out)?;
    write_csv(
        &args.out.join("sweep.csv"),
        "setting,policy,mean_return,std_return",
        rows,
    )?;
    let mut extra = BTreeMap::new();
    extra.insert("episodes".to_string(), serde_json::json!(args.episodes));
    extra.insert("policy".to_string(), serde_json::json!(args.policy));
    extra.insert("settings".to_string(), serde_json::json!(args.settings));
    write_manifest(
        &args.out,
        "sweep",
        &args.common,
        &scenario,
        None,
        Some(&reward_config),
        extra,
        &["sweep.csv"],
    )?;
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let mut scenario = load_effective_scenario(&args.common)?;
    // The comparison is between encodings; a perfect detector is the
    // default unless the caller picked one explicitly.
    if args.common.detector_preset.is_none() {
        scenario.detector_config_ref = "perfect".to_string();
    }
    let (detectors, reward_config) = resolve_configs(&scenario)?;
    let result = agents::compare_encodings(
        &scenario,
        detectors.clone(),
        reward_config.clone(),
        args.episodes,
        args.common.seed,
        args.window,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    ensure_out_dir(&args.out)?;
    write_csv(
        &args.out.join("compare.csv"),
        "episode,baseline_return,detector_return",
        result
            .baseline_curve
            .iter()
            .zip(result.detector_curve.iter())
            .enumerate()
            .map(|(i, (b, d))| format!("{i},{},{}", fmt_float(*b), fmt_float(*d))),
    )?;
    write_csv(
        &args.out.join("summary.csv"),
        "encoding,final_window_mean,window",
        [
            format!(
                "baseline,{},{}",
                fmt_float(result.baseline_final_mean),
                result.window
            ),
            format!(
                "detector,{},{}",
                fmt_float(result.detector_final_mean),
                result.window
            ),
        ],
    )?;
    let mut extra = BTreeMap::new();
    extra.insert("episodes".to_string(), serde_json::json!(args.episodes));
    extra.insert("window".to_string(), serde_json::json!(result.window));
    write_manifest(
        &args.out,
        "compare",
        &args.common,
        &scenario,
        Some(&detectors),
        Some(&reward_config),
        extra,
        &["compare.csv", "summary.csv"],
    )?;
    println!(
        "final-{} means: baseline {}, detector {}",
        result.window,
        fmt_float(result.baseline_final_mean),
        fmt_float(result.detector_final_mean)
    );
    Ok(())
}

fn cmd_replay(args: &ReplayArgs) -> Result<(), CliError> {
    let scenario = load_effective_scenario(&args.common)?;
    let content = std::fs::read_to_string(&args.trace)
        .map_err(|e| io_err("cannot read trace", &args.trace, e))?;
    let report = match engine::replay_str(&content, &scenario) {
        Ok(report) => report,
        Err(ReplayError::Divergence { turn, fields }) => {
            return Err(CliError::Verification(format!(
                "trace diverges at turn {turn} (fields: {}); refusing to render",
                fields.join(", ")
            )));
        }
        Err(err @ ReplayError::Engine(_)) => {
            return Err(CliError::Config(err.to_string()));
        }
        Err(err) => return Err(CliError::Verification(err.to_string())),
    };
    let trace = EpisodeTrace::from_jsonl(&content)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    render_trace(&trace, args.turn);
    println!(
        "verified {} turns, trace hash {}",
        report.turns_verified, report.trace_hash
    );
    Ok(())
}

fn render_trace(trace: &EpisodeTrace, only_turn: Option<u32>) {
    for record in &trace.records {
        if let Some(turn) = only_turn {
            if record.turn != turn {
                continue;
            }
        }
        println!("turn {}", record.turn);
        let degraded = if record.blue_degraded {
            " [illegal, degraded to monitor]"
        } else {
            ""
        };
        println!("  blue: {}{degraded}", render_blue(&record.blue_action));
        match (&record.red_action, &record.action_outcome) {
            (Some(action), Some(outcome)) => {
                let status = if outcome.success { "succeeded" } else { "failed" };
                println!("  red: {} ({status})", render_red(action));
            }
            _ => println!("  red: stalled"),
        }
        if record.alerts.is_empty() {
            println!("  alerts: none");
        } else {
            let rendered: Vec<String> = record
                .alerts
                .iter()
                .map(|a| {
                    format!(
                        "h{} {} ({})",
                        a.host.0,
                        a.component.id(),
                        if a.genuine { "genuine" } else { "false" }
                    )
                })
                .collect();
            println!("  alerts: {}", rendered.join(", "));
        }
        let c = &record.reward_components;
        println!(
            "  reward: {} (C={} I={} A={} H={})",
            fmt_float(record.reward),
            fmt_float(c.confidentiality),
            fmt_float(c.integrity),
            fmt_float(c.availability),
            fmt_float(c.honeypot)
        );
    }
    println!(
        "return {} over {} turns, trace hash {}",
        fmt_float(trace.footer.episode_return),
        trace.footer.terminal_turn,
        trace.footer.trace_hash
    );
}

fn render_blue(action: &crate::engine::BlueAction) -> String {
    use crate::engine::BlueAction as B;
    match action {
        B::Monitor => "monitor".to_string(),
        B::Analyze { host } => format!("analyze h{}", host.0),
        B::Remove { host } => format!("remove h{}", host.0),
        B::Restore { host } => format!("restore h{}", host.0),
        B::DeployDecoy { subnet } => format!("deploy decoy in s{}", subnet.0),
        B::BlockSubnetPair { a, b } => format!("block s{}-s{}", a.0, b.0),
        B::IsolateHost { host } => format!("isolate h{}", host.0),
        B::UnisolateHost { host } => format!("unisolate h{}", host.0),
    }
}

fn render_red(action: &crate::red::RedAction) -> String {
    use crate::red::RedAction as R;
    match action {
        R::DiscoverSubnet { subnet } => format!("discover s{}", subnet.0),
        R::ScanHost { host } => format!("scan h{}", host.0),
        R::Exploit { host } => format!("exploit h{}", host.0),
        R::PrivilegeEscalate { host } => format!("escalate h{}", host.0),
        R::Impact { host } => format!("impact h{}", host.0),
    }
}
