//! Detectors, alerts and observation encodings.
//!
//! Ground-truth red activity reaches the blue agent through one of two
//! encodings. The baseline encoding is a per-host (activity, compromised)
//! pair; an event shows up only if at least one detector coin flip for it
//! succeeded. The detector encoding is a per-host, per-data-component
//! grid of alert counts in which genuine and false alerts are
//! indistinguishable. Detection and false-positive probabilities are
//! fully tunable per data component.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{ActionOutcome, OutcomeDetails};
use crate::red::{RedAction, RedActionKind};
use crate::rng::DetRng;
use crate::scenario::{HostId, Violation};

// ============================================================================
// Data components
// ============================================================================

/// Sensor signal categories that red techniques touch. The canonical
/// column order of the detector observation grid is the declaration
/// order here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataComponent {
    UserAccountCreation,
    ProcessCreation,
    NetworkSession,
    NetworkTrafficFlow,
    FileModification,
}

impl DataComponent {
    pub const ALL: [DataComponent; 5] = [
        DataComponent::UserAccountCreation,
        DataComponent::ProcessCreation,
        DataComponent::NetworkSession,
        DataComponent::NetworkTrafficFlow,
        DataComponent::FileModification,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            DataComponent::UserAccountCreation => "user-account-creation",
            DataComponent::ProcessCreation => "process-creation",
            DataComponent::NetworkSession => "network-session",
            DataComponent::NetworkTrafficFlow => "network-traffic-flow",
            DataComponent::FileModification => "file-modification",
        }
    }

    /// Grid column of this component.
    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|c| c == self).expect("member of ALL")
    }
}

/// Which data components each red action touches. Detection trials run
/// per touched host and component.
pub fn touched_components(kind: RedActionKind) -> &'static [DataComponent] {
    match kind {
        RedActionKind::DiscoverSubnet => &[DataComponent::NetworkTrafficFlow],
        RedActionKind::ScanHost => {
            &[DataComponent::NetworkTrafficFlow, DataComponent::NetworkSession]
        }
        RedActionKind::Exploit => {
            &[DataComponent::ProcessCreation, DataComponent::NetworkSession]
        }
        RedActionKind::PrivilegeEscalate => {
            &[DataComponent::UserAccountCreation, DataComponent::ProcessCreation]
        }
        RedActionKind::Impact => {
            &[DataComponent::FileModification, DataComponent::ProcessCreation]
        }
    }
}

// ============================================================================
// Detector configuration
// ============================================================================

/// One stochastic alert source: a data component, its per-action
/// detection probabilities and its false-positive rate (expected false
/// alerts per host per turn).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detector {
    pub component: DataComponent,
    pub detect_prob: BTreeMap<RedActionKind, f64>,
    pub false_positive_rate: f64,
}

/// The full detector set for a scenario, loaded from a JSON file or one
/// of the named presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub detectors: Vec<Detector>,
}

#[derive(Debug, thiserror::Error)]
pub enum DetectorConfigError {
    #[error("failed to read detector config {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse detector config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid detector config: {}", crate::scenario::format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown detector preset {name:?}; available presets: {available}")]
    UnknownPreset { name: String, available: String },
}

/// Names accepted by [`resolve_detector_ref`] besides file paths.
pub const DETECTOR_PRESET_NAMES: [&str; 3] = ["perfect", "realistic", "uniform-<p>"];

impl DetectorConfig {
    /// Every coin always lands: detection probability 1.0 for every
    /// component and action, zero false positives.
    pub fn perfect() -> Self {
        Self::uniform(1.0)
    }

    /// Same detection probability `p` for every component and action,
    /// zero false positives. Used for controlled detection sweeps.
    pub fn uniform(p: f64) -> Self {
        let detectors = DataComponent::ALL
            .iter()
            .map(|&component| Detector {
                component,
                detect_prob: RedActionKind::ALL.iter().map(|&k| (k, p)).collect(),
                false_positive_rate: 0.0,
            })
            .collect();
        Self { detectors }
    }

    /// Preset with plausible per-component detection rates: new user
    /// accounts 0.50, process creation 0.15, new sessions 0.05, traffic
    /// flow 0.30, file modification 0.25, and a 0.01 false-positive rate
    /// per host, detector and turn. The traffic-flow and
    /// file-modification rates are project defaults, not measurements;
    /// override them in a config file as needed.
    pub fn realistic() -> Self {
        let base = |component: DataComponent| -> f64 {
            match component {
                DataComponent::UserAccountCreation => 0.50,
                DataComponent::ProcessCreation => 0.15,
                DataComponent::NetworkSession => 0.05,
                DataComponent::NetworkTrafficFlow => 0.30,
                DataComponent::FileModification => 0.25,
            }
        };
        let detectors = DataComponent::ALL
            .iter()
            .map(|&component| Detector {
                component,
                detect_prob: RedActionKind::ALL
                    .iter()
                    .filter(|&&k| touched_components(k).contains(&component))
                    .map(|&k| (k, base(component)))
                    .collect(),
                false_positive_rate: 0.01,
            })
            .collect();
        Self { detectors }
    }

    pub fn detector_for(&self, component: DataComponent) -> Option<&Detector> {
        self.detectors.iter().find(|d| d.component == component)
    }

    /// Configuration-time checks: all five components present exactly
    /// once, probabilities in range, and every action kind covered by
    /// every component it touches (so detection can never fail at
    /// runtime).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for component in DataComponent::ALL {
            let matching = self
                .detectors
                .iter()
                .filter(|d| d.component == component)
                .count();
            if matching == 0 {
                out.push(Violation::new(
                    "detectors",
                    format!("missing detector for component {}", component.id()),
                ));
            } else if matching > 1 {
                out.push(Violation::new(
                    "detectors",
                    format!("duplicate detector for component {}", component.id()),
                ));
            }
        }
        for det in &self.detectors {
            for (kind, p) in &det.detect_prob {
                if !(0.0..=1.0).contains(p) || !p.is_finite() {
                    out.push(Violation::new(
                        "detect_prob",
                        format!("{}: probability for {kind:?} must lie in [0, 1]", det.component.id()),
                    ));
                }
            }
            if !(0.0..=1.0).contains(&det.false_positive_rate) || !det.false_positive_rate.is_finite() {
                out.push(Violation::new(
                    "false_positive_rate",
                    format!("{}: rate must lie in [0, 1]", det.component.id()),
                ));
            }
        }
        for kind in RedActionKind::ALL {
            for component in touched_components(kind) {
                if let Some(det) = self.detector_for(*component) {
                    if !det.detect_prob.contains_key(&kind) {
                        out.push(Violation::new(
                            "detect_prob",
                            format!(
                                "{}: no probability configured for action {kind:?}",
                                component.id()
                            ),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Loads a detector config file and validates it.
pub fn load_detector_config(path: impl AsRef<Path>) -> Result<DetectorConfig, DetectorConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DetectorConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config: DetectorConfig =
        serde_json::from_str(&text).map_err(|source| DetectorConfigError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    let violations = config.validate();
    if !violations.is_empty() {
        return Err(DetectorConfigError::Invalid(violations));
    }
    Ok(config)
}

/// Resolves a detector reference: a preset name ("perfect",
/// "realistic", "uniform-<p>") or a path to a JSON file.
pub fn resolve_detector_ref(reference: &str) -> Result<DetectorConfig, DetectorConfigError> {
    match reference {
        "perfect" => return Ok(DetectorConfig::perfect()),
        "realistic" => return Ok(DetectorConfig::realistic()),
        _ => {}
    }
    if let Some(rest) = reference.strip_prefix("uniform-") {
        if let Ok(p) = rest.parse::<f64>() {
            if (0.0..=1.0).contains(&p) {
                return Ok(DetectorConfig::uniform(p));
            }
        }
        return Err(DetectorConfigError::UnknownPreset {
            name: reference.to_string(),
            available: DETECTOR_PRESET_NAMES.join(", "),
        });
    }
    if reference.ends_with(".json") || reference.contains('/') {
        return load_detector_config(reference);
    }
    Err(DetectorConfigError::UnknownPreset {
        name: reference.to_string(),
        available: DETECTOR_PRESET_NAMES.join(", "),
    })
}

// ============================================================================
// Alerts
// ============================================================================

/// One alert. The `genuine` flag exists only for traces and diagnostics;
/// it never reaches an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alert {
    pub host: HostId,
    pub component: DataComponent,
    pub turn: u32,
    pub genuine: bool,
}

/// Runs the detection coin flips for one red action.
///
/// For every host the action touched and every data component the action
/// kind touches, one independent Bernoulli trial is drawn with that
/// detector's probability for the kind; each success emits one genuine
/// alert. Detection keys on the attempt, not on whether the action
/// succeeded. Requires a validated config.
pub fn detect(
    action: &RedAction,
    outcome: &ActionOutcome,
    detectors: &DetectorConfig,
    turn: u32,
    rng: &mut DetRng,
) -> Vec<Alert> {
    let kind = action.kind();
    let targets: Vec<HostId> = match (&action, &outcome.details) {
        (RedAction::DiscoverSubnet { .. }, OutcomeDetails::HostsDiscovered { hosts }) => {
            hosts.clone()
        }
        (RedAction::DiscoverSubnet { .. }, _) => Vec::new(),
        _ => action.target_host().into_iter().collect(),
    };
    let mut alerts = Vec::new();
    for &host in &targets {
        for &component in touched_components(kind) {
            let detector = detectors
                .detector_for(component)
                .expect("detector config validated at load");
            let p = *detector
                .detect_prob
                .get(&kind)
                .expect("detector config validated at load");
            if rng.gen::<f64>() < p {
                alerts.push(Alert {
                    host,
                    component,
                    turn,
                    genuine: true,
                });
            }
        }
    }
    alerts
}

/// Draws the false-positive trials: one Bernoulli per (host, detector)
/// pair at that detector's false-positive rate.
pub fn generate_false_positives(
    detectors: &DetectorConfig,
    hosts: &[HostId],
    turn: u32,
    rng: &mut DetRng,
) -> Vec<Alert> {
    let mut alerts = Vec::new();
    for &host in hosts {
        for det in &detectors.detectors {
            if det.false_positive_rate > 0.0 && rng.gen::<f64>() < det.false_positive_rate {
                alerts.push(Alert {
                    host,
                    component: det.component,
                    turn,
                    genuine: false,
                });
            }
        }
    }
    alerts
}

// ============================================================================
// Observations
// ============================================================================

/// Detected red activity on a host last turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityState {
    None,
    Scan,
    Exploit,
}

/// Blue's belief about a host's compromise extent. This is belief, not
/// ground truth: it is downgraded only by Analyze or Restore evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompromisedState {
    No,
    Unknown,
    User,
    Privileged,
}

/// Which observation encoding a scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ObservationEncoding {
    #[default]
    Baseline,
    Detector,
}

impl std::fmt::Display for ObservationEncoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ObservationEncoding::Baseline => "baseline",
            ObservationEncoding::Detector => "detector",
        })
    }
}

/// Baseline per-host fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostObs {
    pub activity: ActivityState,
    pub compromised: CompromisedState,
}

/// What blue sees each turn. Length is fixed for a given scenario: one
/// entry per host slot (base hosts plus decoy slots), in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "encoding", rename_all = "snake_case")]
pub enum ObservationVector {
    Baseline {
        hosts: Vec<HostObs>,
    },
    Detector {
        /// `counts[slot][column]` with columns in [`DataComponent::ALL`]
        /// order. Genuine and false alerts are indistinguishable here.
        counts: Vec<Vec<u32>>,
        compromised: Vec<CompromisedState>,
    },
}

impl ObservationVector {
    pub fn all_clear(encoding: ObservationEncoding, slots: usize) -> Self {
        match encoding {
            ObservationEncoding::Baseline => ObservationVector::Baseline {
                hosts: vec![
                    HostObs {
                        activity: ActivityState::None,
                        compromised: CompromisedState::No,
                    };
                    slots
                ],
            },
            ObservationEncoding::Detector => ObservationVector::Detector {
                counts: vec![vec![0; DataComponent::ALL.len()]; slots],
                compromised: vec![CompromisedState::No; slots],
            },
        }
    }

    pub fn encoding(&self) -> ObservationEncoding {
        match self {
            ObservationVector::Baseline { .. } => ObservationEncoding::Baseline,
            ObservationVector::Detector { .. } => ObservationEncoding::Detector,
        }
    }

    /// Number of host slots covered.
    pub fn len(&self) -> usize {
        match self {
            ObservationVector::Baseline { hosts } => hosts.len(),
            ObservationVector::Detector { compromised, .. } => compromised.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn compromised_of(&self, slot: usize) -> CompromisedState {
        match self {
            ObservationVector::Baseline { hosts } => hosts[slot].compromised,
            ObservationVector::Detector { compromised, .. } => compromised[slot],
        }
    }

    /// Slots with any visible activity this turn: non-None activity in
    /// the baseline encoding, any nonzero alert count in the detector
    /// encoding.
    pub fn active_slots(&self) -> Vec<usize> {
        match self {
            ObservationVector::Baseline { hosts } => hosts
                .iter()
                .enumerate()
                .filter(|(_, h)| h.activity != ActivityState::None)
                .map(|(i, _)| i)
                .collect(),
            ObservationVector::Detector { counts, .. } => counts
                .iter()
                .enumerate()
                .filter(|(_, row)| row.iter().any(|&c| c > 0))
                .map(|(i, _)| i)
                .collect(),
        }
    }
}

/// Evidence from blue's own action this turn, applied to the belief
/// column of either encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlueEvidence {
    /// Analyze reported this ground-truth extent.
    Analyzed { host: HostId, actual: CompromisedState },
    /// The host was restored to a clean image.
    Restored { host: HostId },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("prior observation has encoding {found} where {expected} is required")]
    EncodingMismatch {
        expected: ObservationEncoding,
        found: ObservationEncoding,
    },
    #[error("alert references slot {slot} outside the {slots}-slot observation")]
    AlertOutOfRange { slot: usize, slots: usize },
}

/// Red event summary the baseline encoder needs: the action, the hosts
/// it touched, and whether the action succeeded.
#[derive(Debug, Clone)]
pub struct RedEventView {
    pub kind: RedActionKind,
    pub touched_hosts: Vec<HostId>,
    pub success: bool,
}

impl RedEventView {
    pub fn from_action(action: &RedAction, outcome: &ActionOutcome) -> Self {
        let touched_hosts = match (action, &outcome.details) {
            (RedAction::DiscoverSubnet { .. }, OutcomeDetails::HostsDiscovered { hosts }) => {
                hosts.clone()
            }
            (RedAction::DiscoverSubnet { .. }, _) => Vec::new(),
            _ => action.target_host().into_iter().collect(),
        };
        Self {
            kind: action.kind(),
            touched_hosts,
            success: outcome.success,
        }
    }
}

fn activity_of(kind: RedActionKind) -> ActivityState {
    match kind {
        RedActionKind::DiscoverSubnet | RedActionKind::ScanHost => ActivityState::Scan,
        RedActionKind::Exploit | RedActionKind::PrivilegeEscalate | RedActionKind::Impact => {
            ActivityState::Exploit
        }
    }
}

fn belief_rank(state: CompromisedState) -> u8 {
    match state {
        CompromisedState::No => 0,
        CompromisedState::Unknown => 1,
        CompromisedState::User => 2,
        CompromisedState::Privileged => 3,
    }
}

fn raise_belief(current: CompromisedState, proposed: CompromisedState) -> CompromisedState {
    if belief_rank(proposed) > belief_rank(current) {
        proposed
    } else {
        current
    }
}

fn apply_evidence(compromised: &mut [CompromisedState], evidence: &[BlueEvidence]) {
    for ev in evidence {
        match *ev {
            BlueEvidence::Analyzed { host, actual } => {
                compromised[host.0 as usize] = actual;
            }
            BlueEvidence::Restored { host } => {
                compromised[host.0 as usize] = CompromisedState::No;
            }
        }
    }
}

/// Builds the baseline observation for one turn.
///
/// Activity reflects only this turn's red event, and only when at least
/// one detector flagged it. Belief rises to User/Privileged on a
/// detected successful exploit/escalation, falls to No on Restore, is
/// set to the analyzed extent on Analyze, and persists otherwise.
pub fn encode_baseline(
    red_event: Option<&RedEventView>,
    red_detected: bool,
    evidence: &[BlueEvidence],
    prior: &ObservationVector,
) -> Result<ObservationVector, EncodingError> {
    let prior_hosts = match prior {
        ObservationVector::Baseline { hosts } => hosts,
        other => {
            return Err(EncodingError::EncodingMismatch {
                expected: ObservationEncoding::Baseline,
                found: other.encoding(),
            })
        }
    };
    let slots = prior_hosts.len();
    let mut compromised: Vec<CompromisedState> =
        prior_hosts.iter().map(|h| h.compromised).collect();
    apply_evidence(&mut compromised, evidence);

    let mut activity = vec![ActivityState::None; slots];
    if let Some(event) = red_event {
        if red_detected {
            for &host in &event.touched_hosts {
                let slot = host.0 as usize;
                if slot >= slots {
                    return Err(EncodingError::AlertOutOfRange { slot, slots });
                }
                activity[slot] = activity_of(event.kind);
            }
            if event.success {
                if let Some(&host) = event.touched_hosts.first() {
                    let slot = host.0 as usize;
                    // Detected events only raise belief; downgrades come
                    // from Analyze/Restore evidence alone.
                    match event.kind {
                        RedActionKind::Exploit => {
                            compromised[slot] =
                                raise_belief(compromised[slot], CompromisedState::User)
                        }
                        RedActionKind::PrivilegeEscalate => {
                            compromised[slot] =
                                raise_belief(compromised[slot], CompromisedState::Privileged)
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    Ok(ObservationVector::Baseline {
        hosts: activity
            .into_iter()
            .zip(compromised)
            .map(|(activity, compromised)| HostObs {
                activity,
                compromised,
            })
            .collect(),
    })
}

/// Builds the detector observation for one turn.
///
/// Counts are per (slot, component) over this turn's alerts, genuine or
/// not. Belief changes only through blue evidence, except that a slot
/// with alerts and no prior belief is marked Unknown.
pub fn encode_detector(
    alerts: &[Alert],
    evidence: &[BlueEvidence],
    prior: &ObservationVector,
) -> Result<ObservationVector, EncodingError> {
    let prior_compromised = match prior {
        ObservationVector::Detector { compromised, .. } => compromised,
        other => {
            return Err(EncodingError::EncodingMismatch {
                expected: ObservationEncoding::Detector,
                found: other.encoding(),
            })
        }
    };
    let slots = prior_compromised.len();
    let mut compromised = prior_compromised.clone();
    apply_evidence(&mut compromised, evidence);

    let mut counts = vec![vec![0u32; DataComponent::ALL.len()]; slots];
    for alert in alerts {
        let slot = alert.host.0 as usize;
        if slot >= slots {
            return Err(EncodingError::AlertOutOfRange { slot, slots });
        }
        counts[slot][alert.component.index()] += 1;
    }
    for (slot, row) in counts.iter().enumerate() {
        if row.iter().any(|&c| c > 0) && compromised[slot] == CompromisedState::No {
            compromised[slot] = CompromisedState::Unknown;
        }
    }

    Ok(ObservationVector::Detector { counts, compromised })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn single_detector_config(component: DataComponent, kind: RedActionKind, p: f64) -> DetectorConfig {
        let mut config = DetectorConfig::uniform(0.0);
        for det in &mut config.detectors {
            if det.component == component {
                det.detect_prob.insert(kind, p);
            }
        }
        config
    }

    fn exploit(host: u16) -> (RedAction, ActionOutcome) {
        (
            RedAction::Exploit { host: HostId(host) },
            ActionOutcome {
                success: true,
                details: OutcomeDetails::SessionCreated {
                    host: HostId(host),
                    privileged: false,
                    decoy: false,
                },
            },
        )
    }

    #[test]
    fn presets_validate() {
        assert!(DetectorConfig::perfect().validate().is_empty());
        assert!(DetectorConfig::realistic().validate().is_empty());
        assert!(DetectorConfig::uniform(0.5).validate().is_empty());
    }

    #[test]
    fn validate_flags_missing_action_probability() {
        let mut config = DetectorConfig::perfect();
        for det in &mut config.detectors {
            if det.component == DataComponent::ProcessCreation {
                det.detect_prob.remove(&RedActionKind::Exploit);
            }
        }
        let violations = config.validate();
        assert!(violations
            .iter()
            .any(|v| v.message.contains("process-creation") && v.message.contains("Exploit")));
    }

    #[test]
    fn escalate_detection_frequency_matches_probability() {
        // 0.50 for user-account-creation on privilege escalation.
        let config =
            single_detector_config(DataComponent::UserAccountCreation, RedActionKind::PrivilegeEscalate, 0.5);
        let action = RedAction::PrivilegeEscalate { host: HostId(0) };
        let outcome = ActionOutcome {
            success: true,
            details: OutcomeDetails::SessionCreated {
                host: HostId(0),
                privileged: true,
                decoy: false,
            },
        };
        let mut rng = rng::seeded(11);
        let mut hits = 0u32;
        for turn in 0..10_000 {
            let alerts = detect(&action, &outcome, &config, turn, &mut rng);
            if alerts
                .iter()
                .any(|a| a.component == DataComponent::UserAccountCreation)
            {
                hits += 1;
            }
        }
        let freq = f64::from(hits) / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn certain_coin_always_alerts() {
        let config = DetectorConfig::perfect();
        let (action, outcome) = exploit(3);
        let mut rng = rng::seeded(5);
        for turn in 0..200 {
            let alerts = detect(&action, &outcome, &config, turn, &mut rng);
            assert_eq!(alerts.len(), 2, "both touched components alert");
            assert!(alerts.iter().all(|a| a.genuine && a.host == HostId(3) && a.turn == turn));
        }
    }

    #[test]
    fn two_components_at_half_probability() {
        // Independent oracle: enumerate the four joint outcomes of two
        // fair coins; at least one success has probability
        // 1 - (1 - p1)(1 - p2).
        let p1 = 0.5;
        let p2 = 0.5;
        let expected = 1.0 - (1.0 - p1) * (1.0 - p2);
        assert_eq!(expected, 0.75);

        let mut config = DetectorConfig::uniform(0.0);
        for det in &mut config.detectors {
            det.detect_prob.insert(RedActionKind::Exploit, 0.5);
        }
        let (action, outcome) = exploit(0);
        let mut rng = rng::seeded(17);
        let mut hits = 0u32;
        for turn in 0..10_000 {
            if !detect(&action, &outcome, &config, turn, &mut rng).is_empty() {
                hits += 1;
            }
        }
        let freq = f64::from(hits) / 10_000.0;
        assert!((freq - expected).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn zero_false_positive_rate_is_silent() {
        let config = DetectorConfig::perfect();
        let hosts: Vec<HostId> = (0..10).map(HostId).collect();
        let mut rng = rng::seeded(3);
        for turn in 0..1000 {
            assert!(generate_false_positives(&config, &hosts, turn, &mut rng).is_empty());
        }
    }

    #[test]
    fn false_positive_mean_matches_binomial() {
        // One detector at rate 0.1 over 10 hosts: mean 1.0 per turn.
        let mut config = DetectorConfig::uniform(1.0);
        config.detectors[0].false_positive_rate = 0.1;
        let hosts: Vec<HostId> = (0..10).map(HostId).collect();
        let mut rng = rng::seeded(23);
        let mut total = 0usize;
        for turn in 0..10_000 {
            total += generate_false_positives(&config, &hosts, turn, &mut rng).len();
        }
        let mean = total as f64 / 10_000.0;
        assert!((mean - 1.0).abs() <= 0.1, "mean {mean}");
    }

    #[test]
    fn certain_false_positive_every_turn() {
        let mut config = DetectorConfig::uniform(1.0);
        config.detectors[0].false_positive_rate = 1.0;
        let hosts = [HostId(0)];
        let mut rng = rng::seeded(1);
        for turn in 0..100 {
            let alerts = generate_false_positives(&config, &hosts, turn, &mut rng);
            assert_eq!(alerts.len(), 1);
            assert!(!alerts[0].genuine);
        }
    }

    #[test]
    fn baseline_table_row_host2_exploit_privileged() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Baseline, 2);
        // Turn 1: detected successful exploit of host 1.
        let exploit_event = RedEventView {
            kind: RedActionKind::Exploit,
            touched_hosts: vec![HostId(1)],
            success: true,
        };
        let mid = encode_baseline(Some(&exploit_event), true, &[], &prior).unwrap();
        // Turn 2: detected successful escalation on host 1.
        let escalate_event = RedEventView {
            kind: RedActionKind::PrivilegeEscalate,
            touched_hosts: vec![HostId(1)],
            success: true,
        };
        let obs = encode_baseline(Some(&escalate_event), true, &[], &mid).unwrap();
        match obs {
            ObservationVector::Baseline { hosts } => {
                assert_eq!(hosts[0].activity, ActivityState::None);
                assert_eq!(hosts[0].compromised, CompromisedState::No);
                assert_eq!(hosts[1].activity, ActivityState::Exploit);
                assert_eq!(hosts[1].compromised, CompromisedState::Privileged);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn baseline_no_events_clears_activity_keeps_belief() {
        let prior = ObservationVector::Baseline {
            hosts: vec![
                HostObs {
                    activity: ActivityState::Exploit,
                    compromised: CompromisedState::User,
                },
                HostObs {
                    activity: ActivityState::None,
                    compromised: CompromisedState::No,
                },
            ],
        };
        let obs = encode_baseline(None, false, &[], &prior).unwrap();
        match obs {
            ObservationVector::Baseline { hosts } => {
                assert_eq!(hosts[0].activity, ActivityState::None);
                assert_eq!(hosts[0].compromised, CompromisedState::User);
                assert_eq!(hosts[1].compromised, CompromisedState::No);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn baseline_detected_scan_marks_scan_only() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Baseline, 4);
        let event = RedEventView {
            kind: RedActionKind::ScanHost,
            touched_hosts: vec![HostId(3)],
            success: true,
        };
        let obs = encode_baseline(Some(&event), true, &[], &prior).unwrap();
        match obs {
            ObservationVector::Baseline { hosts } => {
                assert_eq!(hosts[3].activity, ActivityState::Scan);
                assert_eq!(hosts[3].compromised, CompromisedState::No);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn baseline_rejects_detector_prior() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Detector, 2);
        assert_eq!(
            encode_baseline(None, false, &[], &prior),
            Err(EncodingError::EncodingMismatch {
                expected: ObservationEncoding::Baseline,
                found: ObservationEncoding::Detector,
            })
        );
    }

    #[test]
    fn detector_empty_alerts_zero_grid() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Detector, 3);
        let obs = encode_detector(&[], &[], &prior).unwrap();
        match obs {
            ObservationVector::Detector { counts, compromised } => {
                assert!(counts.iter().flatten().all(|&c| c == 0));
                assert!(compromised.iter().all(|&c| c == CompromisedState::No));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn detector_counts_multiplicity_and_masks_genuineness() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Detector, 2);
        let alerts = [
            Alert {
                host: HostId(1),
                component: DataComponent::ProcessCreation,
                turn: 0,
                genuine: true,
            },
            Alert {
                host: HostId(1),
                component: DataComponent::ProcessCreation,
                turn: 0,
                genuine: false,
            },
        ];
        let obs = encode_detector(&alerts, &[], &prior).unwrap();
        match &obs {
            ObservationVector::Detector { counts, compromised } => {
                assert_eq!(counts[1][DataComponent::ProcessCreation.index()], 2);
                assert_eq!(
                    counts.iter().flatten().sum::<u32>(),
                    2,
                    "no other cell populated"
                );
                assert_eq!(compromised[1], CompromisedState::Unknown);
            }
            _ => unreachable!(),
        }
        // Structural no-leakage check: the serialized observation
        // carries neither the genuine flag nor any event field.
        let json = serde_json::to_string(&obs).unwrap();
        assert!(!json.contains("genuine"));
        assert!(!json.contains("turn"));
    }

    #[test]
    fn detector_alert_out_of_range_is_contract_error() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Detector, 1);
        let alert = Alert {
            host: HostId(9),
            component: DataComponent::NetworkSession,
            turn: 0,
            genuine: true,
        };
        assert_eq!(
            encode_detector(&[alert], &[], &prior),
            Err(EncodingError::AlertOutOfRange { slot: 9, slots: 1 })
        );
    }

    #[test]
    fn observation_serialization_never_leaks_baseline_either() {
        let prior = ObservationVector::all_clear(ObservationEncoding::Baseline, 2);
        let event = RedEventView {
            kind: RedActionKind::Exploit,
            touched_hosts: vec![HostId(0)],
            success: true,
        };
        let obs = encode_baseline(Some(&event), true, &[], &prior).unwrap();
        let json = serde_json::to_string(&obs).unwrap();
        assert!(!json.contains("genuine"));
        assert!(!json.contains("success"));
    }

    #[test]
    fn resolve_refs() {
        assert_eq!(resolve_detector_ref("perfect").unwrap(), DetectorConfig::perfect());
        assert_eq!(
            resolve_detector_ref("uniform-0.25").unwrap(),
            DetectorConfig::uniform(0.25)
        );
        assert!(matches!(
            resolve_detector_ref("nonsense"),
            Err(DetectorConfigError::UnknownPreset { .. })
        ));
    }
}
