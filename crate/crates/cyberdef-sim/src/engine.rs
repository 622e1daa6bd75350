//! Ground-truth game state and the turn loop.
//!
//! The engine owns everything the agents cannot see: host compromise,
//! decoys, isolation, red's knowledge and the four named rng streams.
//! `reset` builds a fresh episode; `step` consumes one blue action and
//! advances a full turn in fixed phases: blue, red, detection,
//! observation, reward, bookkeeping. With tracing enabled every turn is
//! appended to a replayable [`EpisodeTrace`].

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::canon;
use crate::detection::{
    self, Alert, BlueEvidence, CompromisedState, DetectorConfig, DetectorConfigError,
    ObservationEncoding, ObservationVector, RedEventView,
};
use crate::red::{
    self, HostView, NetView, RedAction, RedDecision, RedKnowledge, RedStrategy, SubnetView,
};
use crate::reward::{self, RewardComponents, RewardConfig, RewardConfigError};
use crate::rng::{self, DetRng};
use crate::scenario::{
    ordered_pair, HostId, NetworkTopology, ScenarioConfig, ScenarioError, SubnetId, Tier,
    SERVICE_CATALOG,
};
use crate::trace::{
    raw_hash_hex, EpisodeTrace, TraceError, TraceFooter, TraceHeader, TraceRecord,
    TRACE_FORMAT_VERSION,
};

// ============================================================================
// Ground truth
// ============================================================================

/// Actual compromise extent of a host (blue sees a belief, not this).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompromiseLevel {
    Clean,
    UserLevel,
    Privileged,
}

/// One host slot. The slot table is base hosts (topology order) followed
/// by `max_decoys` decoy slots, so the observation shape never changes
/// mid-episode; decoy slots are inactive until deployed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotState {
    pub host: HostId,
    pub subnet: Option<SubnetId>,
    pub tier: Tier,
    pub services: BTreeSet<String>,
    pub confidential_data: bool,
    pub is_decoy: bool,
    pub active: bool,
    pub compromise: CompromiseLevel,
    pub isolated: bool,
    pub restore_downtime_remaining: u32,
}

impl SlotState {
    fn exploitable(&self) -> bool {
        self.services
            .iter()
            .any(|s| crate::scenario::service_is_exploitable(s))
    }
}

/// Named rng streams. Splitting keeps red behavior fixed while detector
/// or false-positive randomness is varied, and vice versa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngStreams {
    pub red: DetRng,
    pub detect: DetRng,
    pub fp: DetRng,
    pub topo: DetRng,
}

impl RngStreams {
    fn derive(scenario_seed: u64, episode_seed: u64) -> Self {
        Self {
            red: rng::stream(scenario_seed, episode_seed, "red"),
            detect: rng::stream(scenario_seed, episode_seed, "detect"),
            fp: rng::stream(scenario_seed, episode_seed, "fp"),
            topo: rng::stream(scenario_seed, episode_seed, "topo"),
        }
    }
}

/// Full mutable world state for one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub turn: u32,
    pub slots: Vec<SlotState>,
    pub blocked_pairs: BTreeSet<(SubnetId, SubnetId)>,
    pub red_knowledge: RedKnowledge,
    pub rng: RngStreams,
}

impl GameState {
    pub fn slot(&self, host: HostId) -> Option<&SlotState> {
        self.slots.get(host.0 as usize)
    }

    fn slot_mut(&mut self, host: HostId) -> Option<&mut SlotState> {
        self.slots.get_mut(host.0 as usize)
    }
}

// ============================================================================
// Actions and outcomes
// ============================================================================

/// The defender's action inventory: watch, inspect, clean, restore,
/// deceive, and shape the network with blocks and isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlueAction {
    Monitor,
    Analyze { host: HostId },
    Remove { host: HostId },
    Restore { host: HostId },
    DeployDecoy { subnet: SubnetId },
    BlockSubnetPair { a: SubnetId, b: SubnetId },
    IsolateHost { host: HostId },
    UnisolateHost { host: HostId },
}

/// Structured effect record for any applied action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionOutcome {
    pub success: bool,
    pub details: OutcomeDetails,
}

impl ActionOutcome {
    pub fn failed() -> Self {
        Self {
            success: false,
            details: OutcomeDetails::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeDetails {
    None,
    HostsDiscovered { hosts: Vec<HostId> },
    HostScanned { host: HostId },
    SessionCreated { host: HostId, privileged: bool, decoy: bool },
    SessionsEvicted { host: HostId },
    Impacted { host: HostId },
    AnalysisReport { host: HostId, compromise: CompromiseLevel },
    HostRestored { host: HostId, was: CompromiseLevel },
    DecoyDeployed { host: HostId, subnet: SubnetId },
    SubnetPairBlocked { a: SubnetId, b: SubnetId },
    HostIsolated { host: HostId },
    HostUnisolated { host: HostId },
}

/// Everything that happened during one turn, for encoders and reward.
#[derive(Debug, Clone)]
pub struct TurnEvents {
    pub blue: BlueAction,
    pub blue_outcome: ActionOutcome,
    pub blue_degraded: bool,
    pub red: Option<(RedAction, ActionOutcome)>,
    pub red_detected: bool,
}

// ============================================================================
// Errors
// ============================================================================

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Detector(#[from] DetectorConfigError),
    #[error(transparent)]
    Reward(#[from] RewardConfigError),
    #[error("step called after the episode finished (turn {turn})")]
    StepAfterDone { turn: u32 },
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("unsupported trace format version {found:?} (supported: {TRACE_FORMAT_VERSION})")]
    VersionMismatch { found: String },
    #[error("trace hash mismatch: footer says {expected}, file bytes hash to {actual}")]
    HashMismatch { expected: String, actual: String },
    #[error("scenario does not match trace: {field} is {actual}, trace was recorded with {expected}")]
    ScenarioMismatch {
        field: &'static str,
        expected: String,
        actual: String,
    },
    #[error("re-simulation diverged at turn {turn} (fields: {})", .fields.join(", "))]
    Divergence { turn: u32, fields: Vec<String> },
    #[error("footer mismatch after replay: {field} recorded {expected}, recomputed {actual}")]
    FooterMismatch {
        field: &'static str,
        expected: String,
        actual: String,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Successful replay verification summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub turns_verified: u32,
    pub trace_hash: String,
}

// ============================================================================
// Engine
// ============================================================================

/// Output of one step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub observation: ObservationVector,
    pub reward: f64,
    pub reward_components: RewardComponents,
    pub done: bool,
}

pub struct Engine {
    scenario: ScenarioConfig,
    topology: NetworkTopology,
    detectors: DetectorConfig,
    reward_config: RewardConfig,
    strategy: RedStrategy,
    encoding: ObservationEncoding,
    episode_seed: u64,
    state: GameState,
    prior_obs: ObservationVector,
    done: bool,
    episode_return: f64,
    record_trace: bool,
    trace_records: Vec<TraceRecord>,
}

impl Engine {
    /// Builds an engine, resolving the scenario's detector and reward
    /// references (preset names or file paths).
    pub fn new(scenario: &ScenarioConfig, episode_seed: u64) -> Result<Self, EngineError> {
        let detectors = detection::resolve_detector_ref(&scenario.detector_config_ref)?;
        let reward_config = reward::resolve_reward_ref(&scenario.reward_config_ref)?;
        Self::with_configs(scenario, detectors, reward_config, episode_seed)
    }

    /// Builds an engine with explicit detector and reward configs,
    /// bypassing reference resolution.
    pub fn with_configs(
        scenario: &ScenarioConfig,
        detectors: DetectorConfig,
        reward_config: RewardConfig,
        episode_seed: u64,
    ) -> Result<Self, EngineError> {
        let violations = scenario.validate();
        if !violations.is_empty() {
            return Err(ScenarioError::Invalid(violations).into());
        }
        let det_violations = detectors.validate();
        if !det_violations.is_empty() {
            return Err(DetectorConfigError::Invalid(det_violations).into());
        }
        let reward_violations = reward_config.validate();
        if !reward_violations.is_empty() {
            return Err(RewardConfigError::Invalid(reward_violations).into());
        }
        let topology = crate::scenario::generate_topology(scenario, scenario.seed)?;
        let strategy = RedStrategy::new(scenario.red_strategy, scenario.red_params);
        let encoding = scenario.encoding;
        let mut engine = Self {
            scenario: scenario.clone(),
            topology,
            detectors,
            reward_config,
            strategy,
            encoding,
            episode_seed,
            state: GameState {
                turn: 0,
                slots: Vec::new(),
                blocked_pairs: BTreeSet::new(),
                red_knowledge: RedKnowledge::new(SubnetId(0)),
                rng: RngStreams::derive(scenario.seed, episode_seed),
            },
            prior_obs: ObservationVector::all_clear(encoding, 0),
            done: false,
            episode_return: 0.0,
            record_trace: false,
            trace_records: Vec::new(),
        };
        engine.reset();
        Ok(engine)
    }

    /// Reinitializes the episode: fresh slots, red knowledge seeded with
    /// the entry subnet, streams re-derived, turn 0. Returns the
    /// all-clear initial observation.
    pub fn reset(&mut self) -> ObservationVector {
        let mut slots: Vec<SlotState> = self
            .topology
            .hosts()
            .map(|h| SlotState {
                host: h.id,
                subnet: Some(h.subnet),
                tier: h.tier,
                services: h.services.clone(),
                confidential_data: h.confidential_data,
                is_decoy: false,
                active: true,
                compromise: CompromiseLevel::Clean,
                isolated: false,
                restore_downtime_remaining: 0,
            })
            .collect();
        let base = slots.len() as u16;
        for i in 0..self.scenario.max_decoys {
            slots.push(SlotState {
                host: HostId(base + u16::from(i)),
                subnet: None,
                tier: Tier::UserHost,
                services: BTreeSet::new(),
                confidential_data: false,
                is_decoy: true,
                active: false,
                compromise: CompromiseLevel::Clean,
                isolated: false,
                restore_downtime_remaining: 0,
            });
        }
        self.state = GameState {
            turn: 0,
            slots,
            blocked_pairs: BTreeSet::new(),
            red_knowledge: RedKnowledge::new(SubnetId(0)),
            rng: RngStreams::derive(self.scenario.seed, self.episode_seed),
        };
        self.done = false;
        self.episode_return = 0.0;
        self.trace_records.clear();
        self.prior_obs = ObservationVector::all_clear(self.encoding, self.state.slots.len());
        self.prior_obs.clone()
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn scenario(&self) -> &ScenarioConfig {
        &self.scenario
    }

    pub fn encoding(&self) -> ObservationEncoding {
        self.encoding
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn episode_return(&self) -> f64 {
        canon::round6(self.episode_return)
    }

    /// Number of observation slots (base hosts + decoy slots).
    pub fn slot_count(&self) -> usize {
        self.state.slots.len()
    }

    pub fn enable_trace(&mut self, on: bool) {
        self.record_trace = on;
    }

    /// Changes the episode seed for the next [`Self::reset`], so one
    /// engine can drive many seeded episodes without rebuilding the
    /// topology.
    pub fn set_episode_seed(&mut self, episode_seed: u64) {
        self.episode_seed = episode_seed;
    }

    pub fn episode_seed(&self) -> u64 {
        self.episode_seed
    }

    /// The network as red can act on it this turn: active, non-isolated
    /// hosts and unblocked edges.
    fn net_view(&self) -> NetView {
        let mut subnets = Vec::with_capacity(self.topology.subnet_count());
        let mut host_subnets = BTreeMap::new();
        for s in &self.topology.subnets {
            subnets.push(SubnetView {
                id: s.id,
                hosts: Vec::new(),
            });
        }
        for slot in &self.state.slots {
            let Some(subnet) = slot.subnet else { continue };
            if !slot.active {
                continue;
            }
            host_subnets.insert(slot.host, subnet);
            if slot.isolated {
                continue;
            }
            subnets[subnet.0 as usize].hosts.push(HostView {
                id: slot.host,
                exploitable: slot.exploitable(),
            });
        }
        let edges = self
            .topology
            .reachability
            .iter()
            .filter(|pair| !self.state.blocked_pairs.contains(pair))
            .copied()
            .collect();
        NetView {
            subnets,
            edges,
            host_subnets,
            entry_subnet: self.state.red_knowledge.entry_subnet,
            critical_host: self.topology.critical_host,
            critical_subnet: self
                .topology
                .subnet_of(self.topology.critical_host)
                .expect("critical host exists"),
        }
    }

    fn slot_is_active(&self, host: HostId) -> bool {
        self.state.slot(host).map(|s| s.active).unwrap_or(false)
    }

    /// Applies the blue action. Illegal targets degrade to Monitor and
    /// are flagged, never raised: learning agents must not be able to
    /// crash the engine by exploring.
    fn apply_blue(&mut self, action: BlueAction) -> (ActionOutcome, bool) {
        let legal = match action {
            BlueAction::Monitor => true,
            BlueAction::Analyze { host }
            | BlueAction::Remove { host }
            | BlueAction::Restore { host }
            | BlueAction::IsolateHost { host }
            | BlueAction::UnisolateHost { host } => self.slot_is_active(host),
            BlueAction::DeployDecoy { subnet } => {
                (subnet.0 as usize) < self.topology.subnet_count()
                    && self
                        .state
                        .slots
                        .iter()
                        .any(|s| s.is_decoy && !s.active)
            }
            BlueAction::BlockSubnetPair { a, b } => {
                a != b
                    && (a.0 as usize) < self.topology.subnet_count()
                    && (b.0 as usize) < self.topology.subnet_count()
            }
        };
        if !legal {
            return (
                ActionOutcome {
                    success: true,
                    details: OutcomeDetails::None,
                },
                true,
            );
        }
        let outcome = match action {
            BlueAction::Monitor => ActionOutcome {
                success: true,
                details: OutcomeDetails::None,
            },
            BlueAction::Analyze { host } => {
                let compromise = self.state.slot(host).expect("active slot").compromise;
                ActionOutcome {
                    success: true,
                    details: OutcomeDetails::AnalysisReport { host, compromise },
                }
            }
            BlueAction::Remove { host } => {
                let slot = self.state.slot_mut(host).expect("active slot");
                if slot.compromise == CompromiseLevel::UserLevel {
                    slot.compromise = CompromiseLevel::Clean;
                    self.state.red_knowledge.evict_sessions(host);
                    ActionOutcome {
                        success: true,
                        details: OutcomeDetails::SessionsEvicted { host },
                    }
                } else {
                    // Privileged sessions survive Remove; clean hosts
                    // have nothing to remove.
                    ActionOutcome::failed()
                }
            }
            BlueAction::Restore { host } => {
                let downtime = self.reward_config.restore_downtime_turns;
                let slot = self.state.slot_mut(host).expect("active slot");
                let was = slot.compromise;
                slot.compromise = CompromiseLevel::Clean;
                if slot.is_decoy {
                    // Restoring a decoy tears it down; the slot becomes
                    // free for a later deployment.
                    slot.active = false;
                    slot.subnet = None;
                    slot.services.clear();
                    slot.isolated = false;
                } else {
                    slot.restore_downtime_remaining = downtime;
                }
                self.state.red_knowledge.evict_sessions(host);
                ActionOutcome {
                    success: true,
                    details: OutcomeDetails::HostRestored { host, was },
                }
            }
            BlueAction::DeployDecoy { subnet } => {
                let services = draw_decoy_services(&mut self.state.rng.topo);
                let slot = self
                    .state
                    .slots
                    .iter_mut()
                    .find(|s| s.is_decoy && !s.active)
                    .expect("free decoy slot checked");
                slot.active = true;
                slot.subnet = Some(subnet);
                slot.services = services;
                slot.compromise = CompromiseLevel::Clean;
                slot.isolated = false;
                let host = slot.host;
                // A new machine in an already-mapped subnet is exactly
                // the lure: red notices it without another sweep.
                let discovered_subnet = self
                    .state
                    .red_knowledge
                    .discovered_hosts
                    .iter()
                    .any(|h| self.state.slot(*h).and_then(|s| s.subnet) == Some(subnet));
                if discovered_subnet {
                    self.state.red_knowledge.reveal_host(host);
                }
                ActionOutcome {
                    success: true,
                    details: OutcomeDetails::DecoyDeployed { host, subnet },
                }
            }
            BlueAction::BlockSubnetPair { a, b } => {
                let pair = ordered_pair(a, b);
                let inserted = self.state.blocked_pairs.insert(pair);
                ActionOutcome {
                    success: inserted,
                    details: OutcomeDetails::SubnetPairBlocked { a: pair.0, b: pair.1 },
                }
            }
            BlueAction::IsolateHost { host } => {
                let slot = self.state.slot_mut(host).expect("active slot");
                if slot.isolated {
                    ActionOutcome::failed()
                } else {
                    slot.isolated = true;
                    ActionOutcome {
                        success: true,
                        details: OutcomeDetails::HostIsolated { host },
                    }
                }
            }
            BlueAction::UnisolateHost { host } => {
                let slot = self.state.slot_mut(host).expect("active slot");
                if slot.isolated {
                    slot.isolated = false;
                    ActionOutcome {
                        success: true,
                        details: OutcomeDetails::HostUnisolated { host },
                    }
                } else {
                    ActionOutcome::failed()
                }
            }
        };
        (outcome, false)
    }

    /// Selects and applies red's action for this turn.
    fn apply_red(&mut self, view: &NetView) -> Option<(RedAction, ActionOutcome)> {
        let decision = red::select_action(
            &self.strategy,
            &self.state.red_knowledge,
            view,
            &mut self.state.rng.red,
        );
        let action = match decision {
            RedDecision::Stalled => return None,
            RedDecision::Action(a) => a,
        };
        let outcome = match action {
            RedAction::DiscoverSubnet { subnet } => {
                let hosts: Vec<HostId> = self
                    .state
                    .slots
                    .iter()
                    .filter(|s| s.active && !s.isolated && s.subnet == Some(subnet))
                    .map(|s| s.host)
                    .collect();
                ActionOutcome {
                    success: true,
                    details: OutcomeDetails::HostsDiscovered { hosts },
                }
            }
            RedAction::ScanHost { host } => ActionOutcome {
                success: true,
                details: OutcomeDetails::HostScanned { host },
            },
            RedAction::Exploit { host } => {
                let coin = self.state.rng.red.gen::<f64>() < self.scenario.red_params.exploit_success;
                let slot = self.state.slot_mut(host).expect("targetable slot");
                // Decoys are built to be taken: the exploit always
                // "succeeds" from red's point of view.
                let success = coin || slot.is_decoy;
                if success {
                    if slot.compromise == CompromiseLevel::Clean {
                        slot.compromise = CompromiseLevel::UserLevel;
                    }
                    ActionOutcome {
                        success: true,
                        details: OutcomeDetails::SessionCreated {
                            host,
                            privileged: false,
                            decoy: slot.is_decoy,
                        },
                    }
                } else {
                    ActionOutcome::failed()
                }
            }
            RedAction::PrivilegeEscalate { host } => {
                let coin =
                    self.state.rng.red.gen::<f64>() < self.scenario.red_params.escalate_success;
                let slot = self.state.slot_mut(host).expect("targetable slot");
                let success = coin || slot.is_decoy;
                if success {
                    slot.compromise = CompromiseLevel::Privileged;
                    ActionOutcome {
                        success: true,
                        details: OutcomeDetails::SessionCreated {
                            host,
                            privileged: true,
                            decoy: slot.is_decoy,
                        },
                    }
                } else {
                    ActionOutcome::failed()
                }
            }
            RedAction::Impact { host } => ActionOutcome {
                success: true,
                details: OutcomeDetails::Impacted { host },
            },
        };
        self.state.red_knowledge.update(&action, &outcome);
        Some((action, outcome))
    }

    /// Advances one turn. Phases, in order: blue action, red action,
    /// detection and false positives, observation encoding, reward,
    /// bookkeeping (downtime decay, turn increment, trace append).
    pub fn step(&mut self, blue_action: BlueAction) -> Result<StepOutput, EngineError> {
        if self.done {
            return Err(EngineError::StepAfterDone {
                turn: self.state.turn,
            });
        }
        let turn = self.state.turn;

        // Phase 1: blue.
        let (blue_outcome, blue_degraded) = self.apply_blue(blue_action);

        // Phase 2: red (view reflects blue's just-applied changes).
        let view = self.net_view();
        let red = self.apply_red(&view);

        // Phase 3: detection + false positives.
        let mut alerts: Vec<Alert> = Vec::new();
        if let Some((action, outcome)) = &red {
            alerts.extend(detection::detect(
                action,
                outcome,
                &self.detectors,
                turn,
                &mut self.state.rng.detect,
            ));
        }
        let red_detected = !alerts.is_empty();
        let fp_hosts: Vec<HostId> = self
            .state
            .slots
            .iter()
            .filter(|s| s.active)
            .map(|s| s.host)
            .collect();
        alerts.extend(detection::generate_false_positives(
            &self.detectors,
            &fp_hosts,
            turn,
            &mut self.state.rng.fp,
        ));

        // Phase 4: observation.
        let evidence = blue_evidence(&blue_action, &blue_outcome);
        let events = TurnEvents {
            blue: blue_action,
            blue_outcome,
            blue_degraded,
            red,
            red_detected,
        };
        let observation = match self.encoding {
            ObservationEncoding::Baseline => {
                let red_event = events
                    .red
                    .as_ref()
                    .map(|(a, o)| RedEventView::from_action(a, o));
                detection::encode_baseline(
                    red_event.as_ref(),
                    red_detected,
                    &evidence,
                    &self.prior_obs,
                )
                .expect("engine keeps encoding and shape consistent")
            }
            ObservationEncoding::Detector => {
                detection::encode_detector(&alerts, &evidence, &self.prior_obs)
                    .expect("engine keeps encoding and shape consistent")
            }
        };

        // Phase 5: reward.
        let mut components = reward::compute_components(&self.state, &events, &self.reward_config);
        components.confidentiality = canon::round6(components.confidentiality);
        components.integrity = canon::round6(components.integrity);
        components.availability = canon::round6(components.availability);
        components.honeypot = canon::round6(components.honeypot);
        let reward_value = canon::round6(reward::compute_reward(
            &components,
            &self.reward_config.weights,
        ));
        self.episode_return += reward_value;

        // Phase 6: bookkeeping.
        for slot in &mut self.state.slots {
            if slot.restore_downtime_remaining > 0 {
                slot.restore_downtime_remaining -= 1;
            }
        }
        self.state.turn += 1;
        self.done = self.state.turn >= self.scenario.horizon;
        if self.record_trace {
            self.trace_records.push(TraceRecord {
                turn,
                blue_action,
                blue_outcome: events.blue_outcome.clone(),
                blue_degraded,
                red_action: events.red.as_ref().map(|(a, _)| *a),
                action_outcome: events.red.as_ref().map(|(_, o)| o.clone()),
                alerts: alerts.clone(),
                reward_components: components,
                reward: reward_value,
            });
        }
        self.prior_obs = observation.clone();

        Ok(StepOutput {
            observation,
            reward: reward_value,
            reward_components: components,
            done: self.done,
        })
    }

    fn trace_header(&self) -> TraceHeader {
        TraceHeader {
            format_version: TRACE_FORMAT_VERSION.to_string(),
            scenario_hash: canon::hash_hex(&self.scenario),
            scenario_seed: self.scenario.seed,
            episode_seed: self.episode_seed,
            detector_hash: canon::hash_hex(&self.detectors),
            reward_hash: canon::hash_hex(&self.reward_config),
        }
    }

    /// Finalizes the recorded trace. Call once the episode is done.
    pub fn take_trace(&mut self) -> Option<EpisodeTrace> {
        if !self.record_trace || self.trace_records.is_empty() {
            return None;
        }
        let header = self.trace_header();
        let records = std::mem::take(&mut self.trace_records);
        let mut trace = EpisodeTrace {
            header,
            records,
            footer: TraceFooter {
                episode_return: self.episode_return(),
                terminal_turn: self.state.turn,
                trace_hash: String::new(),
            },
        };
        trace.footer.trace_hash = trace.compute_hash_hex();
        Some(trace)
    }
}

fn draw_decoy_services(rng: &mut DetRng) -> BTreeSet<String> {
    // Two services, at least one exploitable so the lure is real.
    let mut indices: Vec<usize> = (0..SERVICE_CATALOG.len()).collect();
    for j in 0..2 {
        let pick = rng.gen_range(j..indices.len());
        indices.swap(j, pick);
    }
    let mut services: BTreeSet<String> = indices[..2]
        .iter()
        .map(|&i| SERVICE_CATALOG[i].0.to_string())
        .collect();
    if !services
        .iter()
        .any(|s| crate::scenario::service_is_exploitable(s))
    {
        services.insert(
            SERVICE_CATALOG
                .iter()
                .find(|(_, e)| *e)
                .map(|(n, _)| n.to_string())
                .expect("catalog has an exploitable service"),
        );
    }
    services
}

fn blue_evidence(action: &BlueAction, outcome: &ActionOutcome) -> Vec<BlueEvidence> {
    match (&action, &outcome.details) {
        (BlueAction::Analyze { .. }, OutcomeDetails::AnalysisReport { host, compromise }) => {
            let actual = match compromise {
                CompromiseLevel::Clean => CompromisedState::No,
                CompromiseLevel::UserLevel => CompromisedState::User,
                CompromiseLevel::Privileged => CompromisedState::Privileged,
            };
            vec![BlueEvidence::Analyzed {
                host: *host,
                actual,
            }]
        }
        (BlueAction::Restore { .. }, OutcomeDetails::HostRestored { host, .. }) => {
            vec![BlueEvidence::Restored { host: *host }]
        }
        _ => Vec::new(),
    }
}

// ============================================================================
// Episode driving
// ============================================================================

/// Minimal observe-then-act contract for blue policies; implemented in
/// [`crate::agents`].
pub trait Policy {
    fn name(&self) -> &str;
    /// Called before each episode with that episode's seed so stochastic
    /// policies can pair across runs.
    fn begin_episode(&mut self, _episode_seed: u64) {}
    fn act(
        &mut self,
        observation: &ObservationVector,
        catalog: &crate::agents::ActionCatalog,
    ) -> BlueAction;
    fn notify(&mut self, _reward: f64, _done: bool) {}
}

/// Runs one full episode with tracing on and returns the trace.
pub fn run_episode(
    scenario: &ScenarioConfig,
    policy: &mut dyn Policy,
    episode_seed: u64,
) -> Result<EpisodeTrace, EngineError> {
    let mut engine = Engine::new(scenario, episode_seed)?;
    run_episode_with(&mut engine, policy)
}

/// Same as [`run_episode`] but reuses a prepared engine (custom configs).
pub fn run_episode_with(
    engine: &mut Engine,
    policy: &mut dyn Policy,
) -> Result<EpisodeTrace, EngineError> {
    engine.enable_trace(true);
    let mut observation = engine.reset();
    let catalog = crate::agents::ActionCatalog::for_engine(engine);
    policy.begin_episode(engine.episode_seed);
    loop {
        let action = policy.act(&observation, &catalog);
        let out = engine.step(action)?;
        policy.notify(out.reward, out.done);
        observation = out.observation;
        if out.done {
            break;
        }
    }
    Ok(engine.take_trace().expect("trace recorded"))
}

// ============================================================================
// Replay
// ============================================================================

/// Re-simulates a recorded trace and verifies it turn by turn.
///
/// Checks, in order: parseability, format version, raw-byte hash against
/// the footer, scenario/config identity against the header, then
/// per-turn equality of red action, outcome, alerts and reward while
/// feeding the recorded blue actions. Fails on the first divergence.
pub fn replay_str(content: &str, scenario: &ScenarioConfig) -> Result<ReplayReport, ReplayError> {
    let trace = EpisodeTrace::from_jsonl(content)?;
    if trace.header.format_version != TRACE_FORMAT_VERSION {
        return Err(ReplayError::VersionMismatch {
            found: trace.header.format_version.clone(),
        });
    }
    let raw = raw_hash_hex(content).ok_or(TraceError::Empty)?;
    if raw != trace.footer.trace_hash {
        return Err(ReplayError::HashMismatch {
            expected: trace.footer.trace_hash.clone(),
            actual: raw,
        });
    }
    let scenario_hash = canon::hash_hex(scenario);
    if scenario_hash != trace.header.scenario_hash {
        return Err(ReplayError::ScenarioMismatch {
            field: "scenario_hash",
            expected: trace.header.scenario_hash.clone(),
            actual: scenario_hash,
        });
    }
    let mut engine = Engine::new(scenario, trace.header.episode_seed)?;
    for (field, expected, actual) in [
        (
            "detector_hash",
            &trace.header.detector_hash,
            canon::hash_hex(&engine.detectors),
        ),
        (
            "reward_hash",
            &trace.header.reward_hash,
            canon::hash_hex(&engine.reward_config),
        ),
    ] {
        if *expected != actual {
            return Err(ReplayError::ScenarioMismatch {
                field,
                expected: expected.clone(),
                actual,
            });
        }
    }

    engine.enable_trace(true);
    engine.reset();
    for recorded in &trace.records {
        engine.step(recorded.blue_action)?;
        let recomputed = engine
            .trace_records
            .last()
            .expect("record appended by step");
        if recomputed != recorded {
            let fields = diff_fields(recorded, recomputed);
            return Err(ReplayError::Divergence {
                turn: recorded.turn,
                fields,
            });
        }
    }
    let ours = engine.take_trace().expect("trace recorded");
    for (field, expected, actual) in [
        (
            "episode_return",
            format!("{}", trace.footer.episode_return),
            format!("{}", ours.footer.episode_return),
        ),
        (
            "terminal_turn",
            trace.footer.terminal_turn.to_string(),
            ours.footer.terminal_turn.to_string(),
        ),
    ] {
        if expected != actual {
            return Err(ReplayError::FooterMismatch {
                field,
                expected,
                actual,
            });
        }
    }
    Ok(ReplayReport {
        turns_verified: trace.footer.terminal_turn,
        trace_hash: trace.footer.trace_hash.clone(),
    })
}

fn diff_fields(recorded: &TraceRecord, recomputed: &TraceRecord) -> Vec<String> {
    let mut fields = Vec::new();
    if recorded.blue_action != recomputed.blue_action {
        fields.push("blue_action".to_string());
    }
    if recorded.blue_outcome != recomputed.blue_outcome {
        fields.push("blue_outcome".to_string());
    }
    if recorded.blue_degraded != recomputed.blue_degraded {
        fields.push("blue_degraded".to_string());
    }
    if recorded.red_action != recomputed.red_action {
        fields.push("red_action".to_string());
    }
    if recorded.action_outcome != recomputed.action_outcome {
        fields.push("action_outcome".to_string());
    }
    if recorded.alerts != recomputed.alerts {
        fields.push("alerts".to_string());
    }
    if recorded.reward_components != recomputed.reward_components {
        fields.push("reward_components".to_string());
    }
    if recorded.reward != recomputed.reward {
        fields.push("reward".to_string());
    }
    if fields.is_empty() {
        fields.push("unknown".to_string());
    }
    fields
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{HeuristicPolicy, NoopPolicy, RandomPolicy};
    use crate::red::RedStrategyKind;
    use crate::reward::CIAWeights;
    use crate::scenario::tests::config;

    fn minimal_scenario() -> ScenarioConfig {
        let mut cfg = config(1, 1, 1);
        cfg.max_decoys = 0;
        cfg.horizon = 20;
        cfg.detector_config_ref = "perfect".to_string();
        cfg
    }

    fn weights_only(c: f64, i: f64, a: f64, h: f64) -> RewardConfig {
        RewardConfig {
            weights: CIAWeights {
                confidentiality: c,
                integrity: i,
                availability: a,
                honeypot: h,
            },
            ..RewardConfig::default()
        }
    }

    #[test]
    fn reset_is_deterministic_in_serialized_bytes() {
        let cfg = minimal_scenario();
        let mut a = Engine::new(&cfg, 3).unwrap();
        let mut b = Engine::new(&cfg, 3).unwrap();
        a.reset();
        b.reset();
        assert_eq!(
            canon::to_canonical_string(a.state()).unwrap(),
            canon::to_canonical_string(b.state()).unwrap()
        );
    }

    #[test]
    fn reset_minimal_observation_single_clear_host() {
        let cfg = minimal_scenario();
        let mut engine = Engine::new(&cfg, 0).unwrap();
        let obs = engine.reset();
        match obs {
            ObservationVector::Baseline { hosts } => {
                assert_eq!(hosts.len(), 1);
                assert_eq!(hosts[0].activity, crate::detection::ActivityState::None);
                assert_eq!(hosts[0].compromised, CompromisedState::No);
            }
            _ => panic!("baseline encoding expected"),
        }
    }

    #[test]
    fn different_episode_seed_same_topology_different_streams() {
        let cfg = config(3, 2, 3);
        let a = Engine::new(&cfg, 0).unwrap();
        let b = Engine::new(&cfg, 1).unwrap();
        assert_eq!(a.topology(), b.topology());
        assert_ne!(a.state().rng, b.state().rng);
        assert_eq!(a.state().slots, b.state().slots);
    }

    #[test]
    fn monitor_vs_beeline_reaches_impact_on_minimal() {
        let cfg = minimal_scenario();
        let mut engine = Engine::with_configs(
            &cfg,
            DetectorConfig::perfect(),
            weights_only(0.0, 1.0, 0.0, 0.0),
            7,
        )
        .unwrap();
        engine.enable_trace(true);
        engine.reset();
        let mut last = 0.0;
        let mut impact_seen = false;
        for _ in 0..cfg.horizon {
            let out = engine.step(BlueAction::Monitor).unwrap();
            last = out.reward;
            if out.reward_components.integrity > 0.0 {
                impact_seen = true;
            }
            if out.done {
                break;
            }
        }
        assert!(impact_seen, "beeline should reach impact well within 20 turns");
        // Once red owns the critical host it impacts every turn.
        assert_eq!(last, -10.0, "per-turn reward settles at -impact_cost");
        let state = engine.state();
        assert_eq!(
            state.slots[0].compromise,
            CompromiseLevel::Privileged,
            "critical host is privileged after the run"
        );
    }

    #[test]
    fn restore_cleans_evicts_and_charges_downtime() {
        let cfg = minimal_scenario();
        let mut engine = Engine::with_configs(
            &cfg,
            DetectorConfig::perfect(),
            weights_only(0.0, 0.0, 1.0, 0.0),
            7,
        )
        .unwrap();
        engine.reset();
        // Let red get to privileged on the single host.
        let mut steps = 0;
        while engine.state().slots[0].compromise != CompromiseLevel::Privileged {
            engine.step(BlueAction::Monitor).unwrap();
            steps += 1;
            assert!(steps < 15, "red should escalate quickly");
        }
        assert!(!engine.state().red_knowledge.user_sessions.is_empty());
        // Isolate first so red cannot re-exploit in the restore turn
        // (blue acts before red within a turn).
        engine.step(BlueAction::IsolateHost { host: HostId(0) }).unwrap();
        let out = engine.step(BlueAction::Restore { host: HostId(0) }).unwrap();
        let state = engine.state();
        assert_eq!(state.slots[0].compromise, CompromiseLevel::Clean);
        assert!(state.red_knowledge.user_sessions.is_empty());
        assert!(state.red_knowledge.privileged_sessions.is_empty());
        assert!(state.red_knowledge.scanned_hosts.contains(&HostId(0)));
        // Availability charged once for the isolated host in downtime:
        // operational tier cost.
        assert_eq!(out.reward_components.availability, 10.0);
        assert_eq!(out.reward, -10.0);
        // With its only host walled off, red has no legal move left.
        let next = engine.step(BlueAction::Monitor).unwrap();
        assert!(next.reward_components.integrity == 0.0);
        assert!(engine
            .take_trace()
            .is_none(), "tracing was never enabled here");
    }

    #[test]
    fn horizon_contract_and_step_after_done() {
        let mut cfg = minimal_scenario();
        cfg.horizon = 3;
        let mut engine = Engine::new(&cfg, 0).unwrap();
        engine.reset();
        assert!(!engine.step(BlueAction::Monitor).unwrap().done);
        assert!(!engine.step(BlueAction::Monitor).unwrap().done);
        assert!(engine.step(BlueAction::Monitor).unwrap().done);
        assert!(matches!(
            engine.step(BlueAction::Monitor),
            Err(EngineError::StepAfterDone { .. })
        ));
    }

    #[test]
    fn illegal_blue_degrades_to_monitor_and_is_flagged() {
        let cfg = minimal_scenario();
        let mut engine = Engine::new(&cfg, 0).unwrap();
        engine.enable_trace(true);
        engine.reset();
        // Host 9 does not exist; decoy budget is zero.
        engine.step(BlueAction::Restore { host: HostId(9) }).unwrap();
        engine
            .step(BlueAction::DeployDecoy { subnet: SubnetId(0) })
            .unwrap();
        while !engine.is_done() {
            engine.step(BlueAction::Monitor).unwrap();
        }
        let trace = engine.take_trace().unwrap();
        assert!(trace.records[0].blue_degraded);
        assert!(trace.records[1].blue_degraded);
        assert!(!trace.records[2].blue_degraded);
    }

    #[test]
    fn zero_game_passive_red_noop_blue() {
        let mut cfg = config(2, 1, 2);
        cfg.red_strategy = RedStrategyKind::Passive;
        cfg.horizon = 30;
        cfg.detector_config_ref = "perfect".to_string();
        let trace = run_episode(&cfg, &mut NoopPolicy, 4).unwrap();
        assert_eq!(trace.footer.episode_return, 0.0);
        assert_eq!(trace.footer.terminal_turn, 30);
        assert!(trace.records.iter().all(|r| r.red_action.is_none()));
        assert!(trace.records.iter().all(|r| r.reward == 0.0));
    }

    #[test]
    fn run_episode_trace_hash_is_reproducible() {
        let mut cfg = config(3, 2, 3);
        cfg.horizon = 40;
        cfg.detector_config_ref = "realistic".to_string();
        let a = run_episode(&cfg, &mut HeuristicPolicy, 11).unwrap();
        let b = run_episode(&cfg, &mut HeuristicPolicy, 11).unwrap();
        assert_eq!(a.footer.trace_hash, b.footer.trace_hash);
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        // And a random (seeded) policy reproduces too.
        let mut p1 = RandomPolicy::new(5);
        let mut p2 = RandomPolicy::new(5);
        let c = run_episode(&cfg, &mut p1, 11).unwrap();
        let d = run_episode(&cfg, &mut p2, 11).unwrap();
        assert_eq!(c.footer.trace_hash, d.footer.trace_hash);
        assert_ne!(a.footer.trace_hash, c.footer.trace_hash);
    }

    #[test]
    fn replay_verifies_unmodified_trace() {
        let mut cfg = config(2, 1, 2);
        cfg.horizon = 25;
        let trace = run_episode(&cfg, &mut HeuristicPolicy, 3).unwrap();
        let report = replay_str(&trace.to_jsonl(), &cfg).unwrap();
        assert_eq!(report.turns_verified, 25);
        assert_eq!(report.trace_hash, trace.footer.trace_hash);
    }

    #[test]
    fn replay_detects_edited_reward_as_divergence() {
        let mut cfg = config(1, 1, 1);
        cfg.horizon = 10;
        cfg.max_decoys = 0;
        let mut trace = run_episode(&cfg, &mut NoopPolicy, 3).unwrap();
        // Edit one reward and re-stamp the hash so only the semantic
        // divergence remains.
        trace.records[5].reward += 1.0;
        trace.footer.trace_hash = trace.compute_hash_hex();
        match replay_str(&trace.to_jsonl(), &cfg) {
            Err(ReplayError::Divergence { turn: 5, fields }) => {
                assert!(fields.contains(&"reward".to_string()));
            }
            other => panic!("expected divergence at turn 5, got {other:?}"),
        }
    }

    #[test]
    fn replay_detects_tampered_bytes_via_hash() {
        let mut cfg = config(1, 1, 1);
        cfg.horizon = 5;
        cfg.max_decoys = 0;
        let trace = run_episode(&cfg, &mut NoopPolicy, 3).unwrap();
        let tampered = trace.to_jsonl().replacen("\"reward\":0", "\"reward\":1", 1);
        assert!(matches!(
            replay_str(&tampered, &cfg),
            Err(ReplayError::HashMismatch { .. })
        ));
    }

    #[test]
    fn replay_rejects_truncated_file_without_partial_verdict() {
        let mut cfg = config(1, 1, 1);
        cfg.horizon = 5;
        cfg.max_decoys = 0;
        let trace = run_episode(&cfg, &mut NoopPolicy, 3).unwrap();
        let text = trace.to_jsonl();
        let truncated: Vec<&str> = text.lines().take(3).collect();
        assert!(matches!(
            replay_str(&truncated.join("\n"), &cfg),
            Err(ReplayError::Trace(_))
        ));
    }

    #[test]
    fn replay_rejects_version_and_scenario_mismatch() {
        let mut cfg = config(1, 1, 1);
        cfg.horizon = 5;
        cfg.max_decoys = 0;
        let trace = run_episode(&cfg, &mut NoopPolicy, 3).unwrap();
        let versioned = trace.to_jsonl().replace("cdtrace/1", "cdtrace/9");
        // Version check fires before the hash check.
        assert!(matches!(
            replay_str(&versioned, &cfg),
            Err(ReplayError::VersionMismatch { .. })
        ));
        let mut other = cfg.clone();
        other.seed = 99;
        assert!(matches!(
            replay_str(&trace.to_jsonl(), &other),
            Err(ReplayError::ScenarioMismatch { .. })
        ));
    }

    #[test]
    fn observation_shape_fixed_across_episode() {
        for encoding in [ObservationEncoding::Baseline, ObservationEncoding::Detector] {
            let mut cfg = config(3, 2, 3);
            cfg.horizon = 30;
            cfg.encoding = encoding;
            cfg.max_decoys = 2;
            let mut engine = Engine::new(&cfg, 5).unwrap();
            let obs = engine.reset();
            let expected = obs.len();
            let mut policy = RandomPolicy::new(1);
            let catalog = crate::agents::ActionCatalog::for_engine(&engine);
            policy.begin_episode(5);
            let mut obs = obs;
            loop {
                let action = policy.act(&obs, &catalog);
                let out = engine.step(action).unwrap();
                assert_eq!(out.observation.len(), expected);
                assert_eq!(out.observation.encoding(), encoding);
                obs = out.observation;
                if out.done {
                    break;
                }
            }
        }
    }

    #[test]
    fn conservation_and_isolation_invariants_over_random_traces() {
        for seed in 0..12u64 {
            let mut cfg = config(3, 1, 3);
            cfg.horizon = 40;
            cfg.seed = seed;
            cfg.red_strategy = match seed % 3 {
                0 => RedStrategyKind::Beeline,
                1 => RedStrategyKind::Meander,
                _ => RedStrategyKind::RandomWalk,
            };
            let mut policy = RandomPolicy::new(seed);
            let trace = run_episode(&cfg, &mut policy, seed).unwrap();
            assert_eq!(trace.records.len(), 40, "horizon invariant");

            // Conservation: privileged only after a successful escalate
            // with no later restore. Track per host.
            let mut privileged: BTreeSet<HostId> = BTreeSet::new();
            let mut isolated: BTreeSet<HostId> = BTreeSet::new();
            for record in &trace.records {
                // Blue acts before red within a turn, so its effects
                // apply before red's action is judged.
                match &record.blue_outcome.details {
                    OutcomeDetails::HostRestored { host, .. } => {
                        privileged.remove(host);
                    }
                    OutcomeDetails::HostIsolated { host } => {
                        isolated.insert(*host);
                    }
                    OutcomeDetails::HostUnisolated { host } => {
                        isolated.remove(host);
                    }
                    // Redeployment reuses a slot and clears its
                    // isolation flag.
                    OutcomeDetails::DecoyDeployed { host, .. } => {
                        isolated.remove(host);
                    }
                    _ => {}
                }
                if let Some(RedAction::Impact { host }) = record.red_action {
                    assert!(
                        privileged.contains(&host),
                        "impact at turn {} without privilege",
                        record.turn
                    );
                }
                if let (Some(action), Some(outcome)) =
                    (&record.red_action, &record.action_outcome)
                {
                    if let Some(target) = action.target_host() {
                        assert!(
                            !isolated.contains(&target),
                            "isolated host {target:?} targeted at turn {}",
                            record.turn
                        );
                    }
                    if outcome.success {
                        if let OutcomeDetails::SessionCreated {
                            host,
                            privileged: true,
                            ..
                        } = outcome.details
                        {
                            privileged.insert(host);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decoy_engagement_pays_honeypot_bonus() {
        let mut cfg = config(1, 2, 2);
        cfg.max_decoys = 1;
        cfg.horizon = 40;
        cfg.red_strategy = RedStrategyKind::Meander;
        let mut engine = Engine::with_configs(
            &cfg,
            DetectorConfig::perfect(),
            weights_only(0.0, 0.0, 0.0, 1.0),
            2,
        )
        .unwrap();
        engine.reset();
        let mut bonus_seen = false;
        let mut first = true;
        while !engine.is_done() {
            let action = if first {
                first = false;
                BlueAction::DeployDecoy { subnet: SubnetId(0) }
            } else {
                BlueAction::Monitor
            };
            let out = engine.step(action).unwrap();
            if out.reward_components.honeypot > 0.0 {
                bonus_seen = true;
                assert_eq!(out.reward, out.reward_components.honeypot);
                break;
            }
        }
        assert!(bonus_seen, "meander should wander into the decoy");
        // The decoy slot never counts toward confidentiality/availability.
        let state = engine.state();
        let decoy = state.slots.iter().find(|s| s.is_decoy).unwrap();
        assert!(decoy.active);
        assert_ne!(decoy.compromise, CompromiseLevel::Clean);
    }

    #[test]
    fn reward_components_on_real_states() {
        // Clean network: all zeros.
        let cfg = minimal_scenario();
        let mut engine = Engine::new(&cfg, 0).unwrap();
        engine.reset();
        let events = TurnEvents {
            blue: BlueAction::Monitor,
            blue_outcome: ActionOutcome {
                success: true,
                details: OutcomeDetails::None,
            },
            blue_degraded: false,
            red: None,
            red_detected: false,
        };
        let comps = reward::compute_components(engine.state(), &events, &RewardConfig::default());
        assert_eq!(
            (comps.confidentiality, comps.integrity, comps.availability, comps.honeypot),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn confidential_user_host_compromise_charges_its_tier_cost() {
        // Build a state whose only compromise is a confidential user
        // host with tier cost 1, then check C == 1 and the rest 0.
        let mut cfg = config(1, 3, 3);
        cfg.max_decoys = 0;
        let mut engine = Engine::new(&cfg, 0).unwrap();
        engine.reset();
        let mut reward_config = RewardConfig::default();
        reward_config.tier_costs.user_host = 1.0;
        let slot = engine
            .state
            .slots
            .iter()
            .position(|s| s.tier == Tier::UserHost)
            .expect("a user host exists at this seed");
        engine.state.slots[slot].tier = Tier::UserHost;
        engine.state.slots[slot].confidential_data = true;
        engine.state.slots[slot].compromise = CompromiseLevel::Privileged;
        let events = TurnEvents {
            blue: BlueAction::Monitor,
            blue_outcome: ActionOutcome {
                success: true,
                details: OutcomeDetails::None,
            },
            blue_degraded: false,
            red: None,
            red_detected: false,
        };
        let comps = reward::compute_components(engine.state(), &events, &reward_config);
        assert_eq!(comps.confidentiality, 1.0);
        assert_eq!(comps.integrity, 0.0);
        assert_eq!(comps.availability, 0.0);
        assert_eq!(comps.honeypot, 0.0);
    }

    #[test]
    fn monotonicity_adding_compromised_confidential_host_never_raises_reward() {
        let mut cfg = config(2, 2, 3);
        cfg.max_decoys = 0;
        let mut engine = Engine::new(&cfg, 1).unwrap();
        engine.reset();
        let events = TurnEvents {
            blue: BlueAction::Monitor,
            blue_outcome: ActionOutcome {
                success: true,
                details: OutcomeDetails::None,
            },
            blue_degraded: false,
            red: None,
            red_detected: false,
        };
        let rc = RewardConfig::default();
        let before = reward::compute_reward(
            &reward::compute_components(engine.state(), &events, &rc),
            &rc.weights,
        );
        let slot = engine
            .state
            .slots
            .iter()
            .position(|s| s.compromise == CompromiseLevel::Clean)
            .unwrap();
        engine.state.slots[slot].confidential_data = true;
        engine.state.slots[slot].compromise = CompromiseLevel::UserLevel;
        let after = reward::compute_reward(
            &reward::compute_components(engine.state(), &events, &rc),
            &rc.weights,
        );
        assert!(after <= before);
    }
}
