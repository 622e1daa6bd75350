//! Blue policies and training/evaluation loops.
//!
//! Policies see only the observation vector and a fixed action catalog,
//! so anything from a scripted heuristic to an external learner can
//! plug in. Shipped baselines: no-op, seeded random, a scripted
//! heuristic, and tabular Q-learning with epsilon-greedy exploration.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::canon;
use crate::detection::{ActivityState, CompromisedState, ObservationVector};
use crate::engine::{BlueAction, Engine, EngineError, Policy};
use crate::rng::{self, DetRng};
use crate::scenario::{HostId, ScenarioConfig, SubnetId};

// ============================================================================
// Action catalog
// ============================================================================

/// The fixed, ordered list of blue actions for a scenario: Monitor,
/// then per-slot Analyze/Remove/Restore/Isolate/Unisolate, decoy
/// deployments per subnet (when the scenario allows decoys), and one
/// block per reachability edge. Learners index into this list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCatalog {
    pub actions: Vec<BlueAction>,
}

impl ActionCatalog {
    pub fn for_engine(engine: &Engine) -> Self {
        Self::build(engine.scenario(), engine.topology(), engine.slot_count())
    }

    pub fn build(
        scenario: &ScenarioConfig,
        topology: &crate::scenario::NetworkTopology,
        slot_count: usize,
    ) -> Self {
        let mut actions = vec![BlueAction::Monitor];
        let slots: Vec<HostId> = (0..slot_count as u16).map(HostId).collect();
        for &host in &slots {
            actions.push(BlueAction::Analyze { host });
        }
        for &host in &slots {
            actions.push(BlueAction::Remove { host });
        }
        for &host in &slots {
            actions.push(BlueAction::Restore { host });
        }
        for &host in &slots {
            actions.push(BlueAction::IsolateHost { host });
        }
        for &host in &slots {
            actions.push(BlueAction::UnisolateHost { host });
        }
        if scenario.max_decoys > 0 {
            for s in 0..scenario.subnet_count {
                actions.push(BlueAction::DeployDecoy {
                    subnet: SubnetId(s),
                });
            }
        }
        for &(a, b) in &topology.reachability {
            actions.push(BlueAction::BlockSubnetPair { a, b });
        }
        Self { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

// ============================================================================
// Observation keys
// ============================================================================

/// Stable feature hash of an observation, identical across processes.
///
/// Byte encoding, hashed with FNV-1a 64: one tag byte (0 baseline,
/// 1 detector), then per slot either (activity, compromised) as bytes,
/// or the five per-component counts quantized to {0, 1, 2+} followed by
/// the compromised byte. Quantization keeps the tabular state space
/// bounded.
pub fn obs_key(obs: &ObservationVector) -> u64 {
    let mut bytes: Vec<u8> = Vec::with_capacity(2 + obs.len() * 6);
    match obs {
        ObservationVector::Baseline { hosts } => {
            bytes.push(0);
            for h in hosts {
                bytes.push(match h.activity {
                    ActivityState::None => 0,
                    ActivityState::Scan => 1,
                    ActivityState::Exploit => 2,
                });
                bytes.push(compromised_byte(h.compromised));
            }
        }
        ObservationVector::Detector { counts, compromised } => {
            bytes.push(1);
            for (row, &c) in counts.iter().zip(compromised.iter()) {
                for &count in row {
                    bytes.push(count.min(2) as u8);
                }
                bytes.push(compromised_byte(c));
            }
        }
    }
    canon::fnv1a64(&bytes)
}

fn compromised_byte(c: CompromisedState) -> u8 {
    match c {
        CompromisedState::No => 0,
        CompromisedState::Unknown => 1,
        CompromisedState::User => 2,
        CompromisedState::Privileged => 3,
    }
}

// ============================================================================
// Baseline policies
// ============================================================================

/// Always monitors.
#[derive(Debug, Default, Clone)]
pub struct NoopPolicy;

impl Policy for NoopPolicy {
    fn name(&self) -> &str {
        "noop"
    }

    fn act(&mut self, _obs: &ObservationVector, _catalog: &ActionCatalog) -> BlueAction {
        BlueAction::Monitor
    }
}

/// Uniform random over the catalog, reseeded per episode so paired
/// evaluations across configurations share the same draws.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    seed: u64,
    rng: DetRng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: rng::seeded(seed),
        }
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> &str {
        "random"
    }

    fn begin_episode(&mut self, episode_seed: u64) {
        self.rng = rng::stream(self.seed, episode_seed, "random-policy");
    }

    fn act(&mut self, _obs: &ObservationVector, catalog: &ActionCatalog) -> BlueAction {
        catalog.actions[self.rng.gen_range(0..catalog.len())]
    }
}

/// Scripted reference defender. Priority ladder:
/// 1. Restore the lowest-id host believed Privileged;
/// 2. Remove the lowest-id host believed User (baseline also treats
///    Exploit activity as removable);
/// 3. Analyze the host with the most alerts this turn (ties to the
///    lowest id);
/// 4. Monitor.
#[derive(Debug, Default, Clone)]
pub struct HeuristicPolicy;

impl Policy for HeuristicPolicy {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn act(&mut self, obs: &ObservationVector, _catalog: &ActionCatalog) -> BlueAction {
        for slot in 0..obs.len() {
            if obs.compromised_of(slot) == CompromisedState::Privileged {
                return BlueAction::Restore {
                    host: HostId(slot as u16),
                };
            }
        }
        for slot in 0..obs.len() {
            let removable = match obs {
                ObservationVector::Baseline { hosts } => {
                    hosts[slot].compromised == CompromisedState::User
                        || hosts[slot].activity == ActivityState::Exploit
                }
                ObservationVector::Detector { .. } => {
                    obs.compromised_of(slot) == CompromisedState::User
                }
            };
            if removable {
                return BlueAction::Remove {
                    host: HostId(slot as u16),
                };
            }
        }
        let mut best: Option<(usize, u32)> = None;
        for slot in 0..obs.len() {
            let count = match obs {
                ObservationVector::Baseline { hosts } => {
                    u32::from(hosts[slot].activity != ActivityState::None)
                }
                ObservationVector::Detector { counts, .. } => counts[slot].iter().sum(),
            };
            if count > 0 && best.map(|(_, c)| count > c).unwrap_or(true) {
                best = Some((slot, count));
            }
        }
        if let Some((slot, _)) = best {
            return BlueAction::Analyze {
                host: HostId(slot as u16),
            };
        }
        BlueAction::Monitor
    }
}

// ============================================================================
// Tabular Q-learning
// ============================================================================

/// Versioned Q-table: observation key -> one value per catalog action.
/// Unseen keys read as the zero vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    pub entries: HashMap<u64, Vec<f64>>,
    pub actions: usize,
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum QTableError {
    #[error("reward is not finite")]
    NonFiniteReward,
    #[error("failed to read checkpoint {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse checkpoint {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("unsupported checkpoint version {found:?} (supported: {QTABLE_FORMAT_VERSION})")]
    Version { found: String },
}

pub const QTABLE_FORMAT_VERSION: &str = "qtable/1";

#[derive(Serialize, Deserialize)]
struct QTableFile {
    format_version: String,
    actions: usize,
    alpha: f64,
    gamma: f64,
    /// Keys as 16-digit hex so JSON maps sort numerically.
    entries: std::collections::BTreeMap<String, Vec<f64>>,
}

impl QTable {
    pub fn new(actions: usize, alpha: f64, gamma: f64) -> Self {
        Self {
            entries: HashMap::new(),
            actions,
            alpha,
            gamma,
        }
    }

    pub fn values(&self, key: u64) -> Vec<f64> {
        self.entries
            .get(&key)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.actions])
    }

    /// Greedy action index for a key; ties break to the lowest index.
    pub fn greedy(&self, key: u64) -> usize {
        let values = self.values(key);
        let mut best = 0usize;
        for (i, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = i;
            }
        }
        best
    }

    /// One-step Q-learning update:
    /// `Q(k,a) += alpha * (r + gamma * max_a' Q(k',a') * (1 - done) - Q(k,a))`.
    /// Touches exactly the one addressed cell.
    pub fn update(
        &mut self,
        key: u64,
        action: usize,
        reward: f64,
        next_key: u64,
        done: bool,
    ) -> Result<(), QTableError> {
        if !reward.is_finite() {
            return Err(QTableError::NonFiniteReward);
        }
        let max_next = if done {
            0.0
        } else {
            self.values(next_key)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let actions = self.actions;
        let row = self
            .entries
            .entry(key)
            .or_insert_with(|| vec![0.0; actions]);
        let target = reward + self.gamma * max_next * if done { 0.0 } else { 1.0 };
        row[action] += self.alpha * (target - row[action]);
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let file = QTableFile {
            format_version: QTABLE_FORMAT_VERSION.to_string(),
            actions: self.actions,
            alpha: self.alpha,
            gamma: self.gamma,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (format!("{k:016x}"), v.iter().map(|x| canon::round6(*x)).collect()))
                .collect(),
        };
        let text = canon::to_canonical_string(&file).expect("serializable table");
        std::fs::write(path, text + "\n")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, QTableError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| QTableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file: QTableFile = serde_json::from_str(&text).map_err(|source| QTableError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        if file.format_version != QTABLE_FORMAT_VERSION {
            return Err(QTableError::Version {
                found: file.format_version,
            });
        }
        let entries = file
            .entries
            .into_iter()
            .map(|(k, v)| {
                let key = u64::from_str_radix(&k, 16).map_err(|_| QTableError::Version {
                    found: format!("bad key {k}"),
                })?;
                Ok((key, v))
            })
            .collect::<Result<HashMap<_, _>, QTableError>>()?;
        Ok(Self {
            entries,
            actions: file.actions,
            alpha: file.alpha,
            gamma: file.gamma,
        })
    }
}

/// Epsilon schedule: `max(0.05, 1.0 * 0.9995^episode)`.
pub fn epsilon_for_episode(episode: u32) -> f64 {
    (0.9995f64.powi(episode as i32)).max(0.05)
}

/// Tabular Q-learner: epsilon-greedy during training, greedy when
/// frozen. Defaults: alpha 0.1, gamma 0.95.
pub struct QLearner {
    pub table: QTable,
    rng: DetRng,
    episode: u32,
    epsilon: f64,
    learning: bool,
    pending: Option<(u64, usize, f64)>,
}

impl QLearner {
    pub fn new(actions: usize, seed: u64) -> Self {
        Self::with_params(actions, 0.1, 0.95, seed)
    }

    pub fn with_params(actions: usize, alpha: f64, gamma: f64, seed: u64) -> Self {
        Self {
            table: QTable::new(actions, alpha, gamma),
            rng: rng::stream(seed, 0, "qlearner"),
            episode: 0,
            epsilon: epsilon_for_episode(0),
            learning: true,
            pending: None,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Frozen greedy policy over the current table.
    pub fn greedy_policy(&self) -> GreedyQPolicy {
        GreedyQPolicy {
            table: self.table.clone(),
        }
    }
}

impl Policy for QLearner {
    fn name(&self) -> &str {
        "q-learner"
    }

    fn act(&mut self, obs: &ObservationVector, catalog: &ActionCatalog) -> BlueAction {
        let key = obs_key(obs);
        if let Some((prev_key, prev_action, reward)) = self.pending.take() {
            self.table
                .update(prev_key, prev_action, reward, key, false)
                .expect("engine rewards are finite");
        }
        let index = if self.learning && self.rng.gen::<f64>() < self.epsilon {
            self.rng.gen_range(0..catalog.len())
        } else {
            self.table.greedy(key)
        };
        self.pending = Some((key, index, 0.0));
        catalog.actions[index]
    }

    fn notify(&mut self, reward: f64, done: bool) {
        if let Some(entry) = self.pending.as_mut() {
            entry.2 = reward;
        }
        if done {
            if let Some((key, action, r)) = self.pending.take() {
                self.table
                    .update(key, action, r, key, true)
                    .expect("engine rewards are finite");
            }
            self.episode += 1;
            self.epsilon = epsilon_for_episode(self.episode);
        }
    }
}

/// Greedy, non-learning policy over a frozen Q-table.
#[derive(Debug, Clone)]
pub struct GreedyQPolicy {
    pub table: QTable,
}

impl Policy for GreedyQPolicy {
    fn name(&self) -> &str {
        "q-greedy"
    }

    fn act(&mut self, obs: &ObservationVector, catalog: &ActionCatalog) -> BlueAction {
        catalog.actions[self.table.greedy(obs_key(obs))]
    }
}

// ============================================================================
// Training and evaluation
// ============================================================================

/// Episode seed used for episode `i` of a run seeded with `seed`.
pub fn episode_seed(seed: u64, index: u32) -> u64 {
    seed.wrapping_add(u64::from(index))
}

/// Trains a learner for `episodes` episodes and returns the full
/// learning curve (per-episode return). Episode `i` uses episode seed
/// `seed + i`, so identical seeds give identical curves.
pub fn train(
    scenario: &ScenarioConfig,
    learner: &mut QLearner,
    episodes: u32,
    seed: u64,
) -> Result<Vec<f64>, EngineError> {
    let mut engine = Engine::new(scenario, 0)?;
    train_with(&mut engine, learner, episodes, seed)
}

/// [`train`] against a prepared engine (custom configs).
pub fn train_with(
    engine: &mut Engine,
    learner: &mut QLearner,
    episodes: u32,
    seed: u64,
) -> Result<Vec<f64>, EngineError> {
    engine.enable_trace(false);
    learner.learning = true;
    let catalog = ActionCatalog::for_engine(engine);
    let mut curve = Vec::with_capacity(episodes as usize);
    for i in 0..episodes {
        engine.set_episode_seed(episode_seed(seed, i));
        let mut obs = engine.reset();
        learner.begin_episode(episode_seed(seed, i));
        loop {
            let action = learner.act(&obs, &catalog);
            let out = engine.step(action)?;
            learner.notify(out.reward, out.done);
            obs = out.observation;
            if out.done {
                break;
            }
        }
        curve.push(engine.episode_return());
    }
    Ok(curve)
}

/// Evaluation statistics over seeded episodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalStats {
    pub returns: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub seeds: Vec<u64>,
}

impl EvalStats {
    pub fn from_returns(returns: Vec<f64>, seeds: Vec<u64>) -> Self {
        let mean = mean(&returns);
        let std = std_sample(&returns);
        Self {
            returns,
            mean,
            std,
            seeds,
        }
    }
}

/// Evaluates a frozen policy over `episodes` episodes with episode
/// seeds `seed..seed+episodes`. No exploration, no learning.
pub fn evaluate(
    scenario: &ScenarioConfig,
    policy: &mut dyn Policy,
    episodes: u32,
    seed: u64,
) -> Result<EvalStats, EngineError> {
    let mut engine = Engine::new(scenario, 0)?;
    evaluate_with(&mut engine, policy, episodes, seed)
}

/// [`evaluate`] against a prepared engine (custom configs).
pub fn evaluate_with(
    engine: &mut Engine,
    policy: &mut dyn Policy,
    episodes: u32,
    seed: u64,
) -> Result<EvalStats, EngineError> {
    engine.enable_trace(false);
    let catalog = ActionCatalog::for_engine(engine);
    let mut returns = Vec::with_capacity(episodes as usize);
    let mut seeds = Vec::with_capacity(episodes as usize);
    for i in 0..episodes {
        let ep_seed = episode_seed(seed, i);
        engine.set_episode_seed(ep_seed);
        let mut obs = engine.reset();
        policy.begin_episode(ep_seed);
        loop {
            let action = policy.act(&obs, &catalog);
            let out = engine.step(action)?;
            obs = out.observation;
            if out.done {
                break;
            }
        }
        returns.push(engine.episode_return());
        seeds.push(ep_seed);
    }
    Ok(EvalStats::from_returns(returns, seeds))
}

// ============================================================================
// Encoding comparison experiment
// ============================================================================

/// Learning curves for the same scenario trained under both encodings
/// with identical seeds and budget.
#[derive(Debug, Clone)]
pub struct CompareResult {
    pub baseline_curve: Vec<f64>,
    pub detector_curve: Vec<f64>,
    /// Mean return over the final `window` episodes of each curve.
    pub baseline_final_mean: f64,
    pub detector_final_mean: f64,
    pub window: usize,
}

/// Trains one fresh Q-learner per observation encoding on the given
/// scenario (same seeds, same detector/reward configs, same budget) and
/// summarizes the final window of each curve.
pub fn compare_encodings(
    scenario: &ScenarioConfig,
    detectors: crate::detection::DetectorConfig,
    reward_config: crate::reward::RewardConfig,
    episodes: u32,
    seed: u64,
    window: usize,
) -> Result<CompareResult, EngineError> {
    let window = window.clamp(1, episodes.max(1) as usize);
    let mut curves = Vec::with_capacity(2);
    for encoding in [
        crate::detection::ObservationEncoding::Baseline,
        crate::detection::ObservationEncoding::Detector,
    ] {
        let mut cfg = scenario.clone();
        cfg.encoding = encoding;
        let mut engine =
            Engine::with_configs(&cfg, detectors.clone(), reward_config.clone(), 0)?;
        let catalog = ActionCatalog::for_engine(&engine);
        let mut learner = QLearner::new(catalog.len(), seed);
        let curve = train_with(&mut engine, &mut learner, episodes, seed)?;
        curves.push(curve);
    }
    let detector_curve = curves.pop().expect("two curves");
    let baseline_curve = curves.pop().expect("two curves");
    let baseline_final_mean = mean(&baseline_curve[baseline_curve.len() - window..]);
    let detector_final_mean = mean(&detector_curve[detector_curve.len() - window..]);
    Ok(CompareResult {
        baseline_curve,
        detector_curve,
        baseline_final_mean,
        detector_final_mean,
        window,
    })
}

// ============================================================================
// Small statistics helpers
// ============================================================================

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator); 0 for n < 2.
pub fn std_sample(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

/// One-sided paired t statistic for the hypothesis mean(a - b) > 0.
/// Returns +/- infinity when the differences have zero variance, NaN
/// for fewer than two pairs.
pub fn paired_one_sided_t(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "paired samples must align");
    if a.len() < 2 {
        return f64::NAN;
    }
    let diffs: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    let m = mean(&diffs);
    let s = std_sample(&diffs);
    if s == 0.0 {
        return if m > 0.0 {
            f64::INFINITY
        } else if m < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
    }
    m / (s / (diffs.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::HostObs;

    fn baseline_obs(entries: &[(ActivityState, CompromisedState)]) -> ObservationVector {
        ObservationVector::Baseline {
            hosts: entries
                .iter()
                .map(|&(activity, compromised)| HostObs {
                    activity,
                    compromised,
                })
                .collect(),
        }
    }

    #[test]
    fn heuristic_monitors_on_all_clear() {
        let obs = ObservationVector::all_clear(crate::detection::ObservationEncoding::Baseline, 3);
        let catalog = ActionCatalog {
            actions: vec![BlueAction::Monitor],
        };
        assert_eq!(
            HeuristicPolicy.act(&obs, &catalog),
            BlueAction::Monitor
        );
    }

    #[test]
    fn heuristic_restores_privileged_host() {
        let obs = baseline_obs(&[
            (ActivityState::None, CompromisedState::No),
            (ActivityState::Exploit, CompromisedState::Privileged),
        ]);
        let catalog = ActionCatalog {
            actions: vec![BlueAction::Monitor],
        };
        assert_eq!(
            HeuristicPolicy.act(&obs, &catalog),
            BlueAction::Restore { host: HostId(1) }
        );
    }

    #[test]
    fn heuristic_analyzes_highest_alert_count_lowest_id_on_ties() {
        let obs = ObservationVector::Detector {
            counts: vec![
                vec![0, 3, 0, 0, 0],
                vec![0, 1, 0, 0, 0],
                vec![0, 0, 0, 0, 0],
            ],
            compromised: vec![CompromisedState::Unknown; 3],
        };
        let catalog = ActionCatalog {
            actions: vec![BlueAction::Monitor],
        };
        assert_eq!(
            HeuristicPolicy.act(&obs, &catalog),
            BlueAction::Analyze { host: HostId(0) }
        );
    }

    #[test]
    fn q_update_terminal_full_overwrite() {
        let mut table = QTable::new(2, 1.0, 0.9);
        table.update(7, 0, -1.0, 7, true).unwrap();
        assert_eq!(table.values(7), vec![-1.0, 0.0]);
    }

    #[test]
    fn q_update_zero_reward_fixed_point() {
        let mut table = QTable::new(2, 0.5, 0.9);
        table.update(1, 0, 0.0, 2, false).unwrap();
        assert_eq!(table.values(1), vec![0.0, 0.0]);
    }

    #[test]
    fn q_update_hand_arithmetic() {
        // alpha 0.5, gamma 0.9, Q(k,a)=0, max next = 1, r = -1:
        // Q becomes 0.5 * (-1 + 0.9) = -0.05.
        let mut table = QTable::new(2, 0.5, 0.9);
        table.entries.insert(2, vec![1.0, 0.5]);
        table.update(1, 0, -1.0, 2, false).unwrap();
        let got = table.values(1)[0];
        assert!((got - (-0.05)).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn q_update_touches_exactly_one_cell() {
        let mut table = QTable::new(3, 0.3, 0.9);
        table.entries.insert(1, vec![0.1, 0.2, 0.3]);
        table.entries.insert(2, vec![0.4, 0.5, 0.6]);
        let before = table.clone();
        table.update(1, 2, -1.0, 2, false).unwrap();
        for (key, row) in &table.entries {
            for (i, v) in row.iter().enumerate() {
                if *key == 1 && i == 2 {
                    assert_ne!(*v, before.entries[key][i]);
                } else {
                    assert_eq!(*v, before.entries[key][i]);
                }
            }
        }
    }

    #[test]
    fn q_update_rejects_non_finite_reward() {
        let mut table = QTable::new(1, 0.5, 0.9);
        assert!(matches!(
            table.update(0, 0, f64::NAN, 0, false),
            Err(QTableError::NonFiniteReward)
        ));
    }

    #[test]
    fn obs_key_stable_and_documented() {
        let obs = baseline_obs(&[
            (ActivityState::Scan, CompromisedState::No),
            (ActivityState::None, CompromisedState::User),
        ]);
        // Recompute the documented byte encoding by hand.
        let expected = canon::fnv1a64(&[0, 1, 0, 0, 2]);
        assert_eq!(obs_key(&obs), expected);
        assert_eq!(obs_key(&obs), obs_key(&obs.clone()));
    }

    #[test]
    fn obs_key_quantizes_detector_counts() {
        let mk = |c: u32| ObservationVector::Detector {
            counts: vec![vec![c, 0, 0, 0, 0]],
            compromised: vec![CompromisedState::No],
        };
        assert_eq!(obs_key(&mk(2)), obs_key(&mk(5)), "2+ counts collapse");
        assert_ne!(obs_key(&mk(1)), obs_key(&mk(2)));
    }

    #[test]
    fn epsilon_schedule() {
        assert_eq!(epsilon_for_episode(0), 1.0);
        assert!(epsilon_for_episode(1) < 1.0);
        assert_eq!(epsilon_for_episode(100_000), 0.05);
    }

    #[test]
    fn paired_t_known_values() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [0.0, 1.0, 2.0, 3.0];
        // Differences are all exactly 1.0.
        assert_eq!(paired_one_sided_t(&a, &b), f64::INFINITY);
        let c = [1.0, 2.0, 3.0, 4.0];
        let d = [1.5, 1.5, 2.0, 3.0];
        let t = paired_one_sided_t(&c, &d);
        assert!(t.is_finite() && t > 0.0);
    }

    #[test]
    fn qtable_checkpoint_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("qtable.json");
        let mut table = QTable::new(2, 0.1, 0.95);
        table.entries.insert(42, vec![0.5, -0.25]);
        table.save(&path).unwrap();
        let loaded = QTable::load(&path).unwrap();
        assert_eq!(loaded, table);

        // Version gate.
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("qtable/1", "qtable/9");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(QTable::load(&path), Err(QTableError::Version { .. })));
    }
}
