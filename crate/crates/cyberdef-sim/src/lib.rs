//! cyberdef-sim: a seeded, turn-based cyber-defense game for training
//! and evaluating autonomous blue agents against scripted attackers.
//!
//! The pieces, bottom up:
//!
//! - [`scenario`]: declarative game setup and seeded topology generation;
//! - [`red`]: scripted attacker strategies over red's partial knowledge;
//! - [`detection`]: detector coin flips, false positives, and the
//!   baseline/detector observation encodings;
//! - [`reward`]: CIA-weighted per-turn reward with organization presets;
//! - [`engine`]: ground-truth state, the reset/step turn loop, episode
//!   traces and replay verification;
//! - [`agents`]: the policy contract, baselines, tabular Q-learning,
//!   training and evaluation loops;
//! - [`cli`]: the `cyberdef-sim` command-line front end.
//!
//! Everything is deterministic given a scenario and seeds; see the
//! `examples/` directory for one runnable walkthrough per capability.

pub mod agents;
pub mod canon;
pub mod cli;
pub mod detection;
pub mod engine;
pub mod red;
pub mod reward;
pub mod rng;
pub mod scenario;
pub mod trace;

pub use agents::{
    evaluate, obs_key, train, ActionCatalog, EvalStats, GreedyQPolicy, HeuristicPolicy,
    NoopPolicy, QLearner, QTable, RandomPolicy,
};
pub use detection::{
    Alert, DataComponent, Detector, DetectorConfig, ObservationEncoding, ObservationVector,
};
pub use engine::{
    replay_str, run_episode, ActionOutcome, BlueAction, Engine, EngineError, GameState, Policy,
    ReplayError, ReplayReport, StepOutput,
};
pub use red::{RedAction, RedKnowledge, RedStrategy, RedStrategyKind};
pub use reward::{CIAWeights, RewardComponents, RewardConfig};
pub use scenario::{
    generate_topology, load_scenario, HostId, NetworkTopology, ScenarioConfig, SubnetId, Tier,
};
pub use trace::{EpisodeTrace, TraceError};
