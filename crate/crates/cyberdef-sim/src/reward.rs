//! CIA-weighted reward.
//!
//! Each turn yields four nonnegative components - confidentiality
//! exposure, integrity damage, availability loss, honeypot engagement -
//! and the reward is the exact bilinear form
//! `-(w_c*C + w_i*I + w_a*A) + w_h*H`. Weights live in a config file, so
//! an organization can shift priorities without touching the engine.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{GameState, TurnEvents};
use crate::red::{RedAction, RedActionKind};
use crate::scenario::{Tier, Violation};

/// Nonnegative weights over the four reward components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CIAWeights {
    pub confidentiality: f64,
    pub integrity: f64,
    pub availability: f64,
    pub honeypot: f64,
}

impl Default for CIAWeights {
    fn default() -> Self {
        Self {
            confidentiality: 1.0,
            integrity: 1.0,
            availability: 1.0,
            honeypot: 0.5,
        }
    }
}

impl CIAWeights {
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            confidentiality: self.confidentiality * c,
            integrity: self.integrity * c,
            availability: self.availability * c,
            honeypot: self.honeypot * c,
        }
    }
}

/// Per-turn reward components, all >= 0 by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct RewardComponents {
    pub confidentiality: f64,
    pub integrity: f64,
    pub availability: f64,
    pub honeypot: f64,
}

/// Cost of losing a host at each tier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierCosts {
    pub user_host: f64,
    pub enterprise_server: f64,
    pub operational_server: f64,
}

impl Default for TierCosts {
    fn default() -> Self {
        Self {
            user_host: 0.1,
            enterprise_server: 1.0,
            operational_server: 10.0,
        }
    }
}

impl TierCosts {
    pub fn cost(&self, tier: Tier) -> f64 {
        match tier {
            Tier::UserHost => self.user_host,
            Tier::EnterpriseServer => self.enterprise_server,
            Tier::OperationalServer => self.operational_server,
        }
    }
}

/// Reward configuration: tier costs, the one-off impact cost, restore
/// downtime and the CIA weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardConfig {
    #[serde(default)]
    pub tier_costs: TierCosts,
    #[serde(default = "default_impact_cost")]
    pub impact_cost: f64,
    #[serde(default = "default_restore_downtime")]
    pub restore_downtime_turns: u32,
    #[serde(default)]
    pub weights: CIAWeights,
}

fn default_impact_cost() -> f64 {
    10.0
}

fn default_restore_downtime() -> u32 {
    1
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            tier_costs: TierCosts::default(),
            impact_cost: 10.0,
            restore_downtime_turns: 1,
            weights: CIAWeights::default(),
        }
    }
}

/// Names accepted by [`resolve_reward_ref`] besides file paths.
pub const REWARD_PRESET_NAMES: [&str; 4] = ["default", "pci", "research-honeynet", "web-service"];

impl RewardConfig {
    fn with_weights(confidentiality: f64, integrity: f64, availability: f64, honeypot: f64) -> Self {
        Self {
            weights: CIAWeights {
                confidentiality,
                integrity,
                availability,
                honeypot,
            },
            ..Self::default()
        }
    }

    /// Confidentiality-first organization (payment infrastructure).
    pub fn pci() -> Self {
        Self::with_weights(5.0, 1.0, 1.0, 0.5)
    }

    /// Deception-first organization that wants red engaged on decoys.
    pub fn research_honeynet() -> Self {
        Self::with_weights(1.0, 1.0, 1.0, 5.0)
    }

    /// Availability-first organization (public web service).
    pub fn web_service() -> Self {
        Self::with_weights(1.0, 1.0, 5.0, 0.5)
    }

    /// Hard errors: costs must be positive, weights nonnegative, all
    /// values finite.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (field, v) in [
            ("tier_costs.user_host", self.tier_costs.user_host),
            ("tier_costs.enterprise_server", self.tier_costs.enterprise_server),
            (
                "tier_costs.operational_server",
                self.tier_costs.operational_server,
            ),
            ("impact_cost", self.impact_cost),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                out.push(Violation::new(field, "cost must be positive"));
            }
        }
        for (field, w) in [
            ("weights.confidentiality", self.weights.confidentiality),
            ("weights.integrity", self.weights.integrity),
            ("weights.availability", self.weights.availability),
            ("weights.honeypot", self.weights.honeypot),
        ] {
            if w < 0.0 || !w.is_finite() {
                out.push(Violation::new(field, "weight must be nonnegative"));
            }
        }
        out
    }

    /// Soft warnings, reported but never fatal.
    pub fn warnings(&self) -> Vec<String> {
        let w = &self.weights;
        if w.confidentiality == 0.0 && w.integrity == 0.0 && w.availability == 0.0 && w.honeypot == 0.0
        {
            vec!["all reward weights are zero; every policy scores 0".to_string()]
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RewardConfigError {
    #[error("failed to read reward config {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse reward config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid reward config: {}", crate::scenario::format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown reward preset {name:?}; available presets: {available}")]
    UnknownPreset { name: String, available: String },
}

pub fn load_reward_config(path: impl AsRef<Path>) -> Result<RewardConfig, RewardConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| RewardConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config: RewardConfig =
        serde_json::from_str(&text).map_err(|source| RewardConfigError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    let violations = config.validate();
    if !violations.is_empty() {
        return Err(RewardConfigError::Invalid(violations));
    }
    Ok(config)
}

/// Resolves a reward reference: preset name or JSON file path.
pub fn resolve_reward_ref(reference: &str) -> Result<RewardConfig, RewardConfigError> {
    match reference {
        "default" => return Ok(RewardConfig::default()),
        "pci" => return Ok(RewardConfig::pci()),
        "research-honeynet" => return Ok(RewardConfig::research_honeynet()),
        "web-service" => return Ok(RewardConfig::web_service()),
        _ => {}
    }
    if reference.ends_with(".json") || reference.contains('/') {
        return load_reward_config(reference);
    }
    Err(RewardConfigError::UnknownPreset {
        name: reference.to_string(),
        available: REWARD_PRESET_NAMES.join(", "),
    })
}

// ============================================================================
// Component computation
// ============================================================================

/// Computes the four components from the post-turn state and this
/// turn's events. Pure and deterministic.
///
/// - confidentiality: tier cost of every compromised real host that
///   stores confidential data, charged every turn it stays compromised;
/// - integrity: impact cost for each successful Impact this turn;
/// - availability: tier cost of every real host that is isolated or in
///   restore downtime, charged per turn;
/// - honeypot: number of decoys red currently holds a session on.
pub fn compute_components(
    state: &GameState,
    events: &TurnEvents,
    config: &RewardConfig,
) -> RewardComponents {
    let mut c = 0.0;
    let mut a = 0.0;
    let mut h = 0.0;
    for slot in &state.slots {
        if !slot.active {
            continue;
        }
        if slot.is_decoy {
            if slot.compromise != crate::engine::CompromiseLevel::Clean {
                h += 1.0;
            }
            continue;
        }
        if slot.confidential_data && slot.compromise != crate::engine::CompromiseLevel::Clean {
            c += config.tier_costs.cost(slot.tier);
        }
        if slot.isolated || slot.restore_downtime_remaining > 0 {
            a += config.tier_costs.cost(slot.tier);
        }
    }
    let mut i = 0.0;
    if let Some((action, outcome)) = &events.red {
        if outcome.success && matches!(action, RedAction::Impact { .. }) {
            debug_assert_eq!(action.kind(), RedActionKind::Impact);
            i += config.impact_cost;
        }
    }
    RewardComponents {
        confidentiality: c,
        integrity: i,
        availability: a,
        honeypot: h,
    }
}

/// The reward bilinear form, exactly
/// `-(w_c*C + w_i*I + w_a*A) + w_h*H` with no offsets.
pub fn compute_reward(components: &RewardComponents, weights: &CIAWeights) -> f64 {
    -(weights.confidentiality * components.confidentiality
        + weights.integrity * components.integrity
        + weights.availability * components.availability)
        + weights.honeypot * components.honeypot
}
