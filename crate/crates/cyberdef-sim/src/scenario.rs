//! Scenario configuration and seeded topology generation.
//!
//! A scenario is a declarative description of one game setup: how many
//! subnets, how many hosts per subnet, host tier mix, episode horizon,
//! which red strategy plays, and which detector/reward configurations
//! apply. Topologies are generated as a pure function of
//! `(config, seed)` so the same scenario file always produces the same
//! network, byte for byte.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detection::ObservationEncoding;
use crate::red::{RedParams, RedStrategyKind};
use crate::rng::{self, DetRng};

// ============================================================================
// Identifiers and host tiers
// ============================================================================

/// Network-wide host index. Base hosts are numbered in subnet order at
/// generation time; decoy slots take the indices after the last base host.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct HostId(pub u16);

/// Subnet index, 0-based. Subnet 0 is always red's entry subnet.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct SubnetId(pub u16);

impl fmt::Display for HostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0)
    }
}

impl fmt::Display for SubnetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Host importance tier, used for reward costs and topology generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    UserHost,
    EnterpriseServer,
    OperationalServer,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tier::UserHost => "user_host",
            Tier::EnterpriseServer => "enterprise_server",
            Tier::OperationalServer => "operational_server",
        };
        f.write_str(s)
    }
}

// ============================================================================
// Service catalog
// ============================================================================

/// Fixed catalog of service labels and whether each is exploitable.
/// Generated hosts draw 1-3 services from this list.
pub const SERVICE_CATALOG: [(&str, bool); 8] = [
    ("ssh", true),
    ("http", true),
    ("smb", true),
    ("rdp", true),
    ("smtp", true),
    ("dns", false),
    ("ntp", false),
    ("syslog", false),
];

/// Whether a catalog service is exploitable. Unknown names are not.
pub fn service_is_exploitable(name: &str) -> bool {
    SERVICE_CATALOG
        .iter()
        .any(|(n, exploitable)| *n == name && *exploitable)
}

fn first_exploitable_service() -> &'static str {
    SERVICE_CATALOG
        .iter()
        .find(|(_, e)| *e)
        .map(|(n, _)| *n)
        .expect("catalog has an exploitable service")
}

// ============================================================================
// Scenario configuration
// ============================================================================

/// Probability weights over host tiers for topology generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierDistribution {
    pub user_host: f64,
    pub enterprise_server: f64,
    pub operational_server: f64,
}

impl Default for TierDistribution {
    fn default() -> Self {
        Self {
            user_host: 0.6,
            enterprise_server: 0.3,
            operational_server: 0.1,
        }
    }
}

/// Declarative game setup loaded from a scenario JSON file.
///
/// Defaults for omitted keys: `tier_distribution` (0.6, 0.3, 0.1),
/// `horizon` 100, `red_strategy` "beeline", `detector_config_ref`
/// "realistic", `reward_config_ref` "default", `seed` 0, `max_decoys` 3,
/// `encoding` "baseline", `red_params` (0.9, 0.9). Unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub subnet_count: u16,
    /// Inclusive `[lo, hi]` range of hosts per subnet.
    pub hosts_per_subnet: [u16; 2],
    #[serde(default)]
    pub tier_distribution: TierDistribution,
    #[serde(default = "default_horizon")]
    pub horizon: u32,
    #[serde(default)]
    pub red_strategy: RedStrategyKind,
    #[serde(default = "default_detector_ref")]
    pub detector_config_ref: String,
    #[serde(default = "default_reward_ref")]
    pub reward_config_ref: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_decoys")]
    pub max_decoys: u8,
    #[serde(default)]
    pub encoding: ObservationEncoding,
    #[serde(default)]
    pub red_params: RedParams,
}

fn default_horizon() -> u32 {
    100
}

fn default_detector_ref() -> String {
    "realistic".to_string()
}

fn default_reward_ref() -> String {
    "default".to_string()
}

fn default_max_decoys() -> u8 {
    3
}

/// One failed invariant, reported as data rather than an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("failed to read scenario file {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse scenario file {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid scenario: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

pub(crate) fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ScenarioConfig {
    /// Checks every config invariant; returns violations in field order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.subnet_count == 0 {
            out.push(Violation::new("subnet_count", "must be at least 1"));
        }
        let [lo, hi] = self.hosts_per_subnet;
        if lo == 0 {
            out.push(Violation::new(
                "hosts_per_subnet",
                "lower bound must be at least 1",
            ));
        }
        if lo > hi {
            out.push(Violation::new(
                "hosts_per_subnet",
                format!("lower bound {lo} exceeds upper bound {hi}"),
            ));
        }
        let t = &self.tier_distribution;
        let weights = [t.user_host, t.enterprise_server, t.operational_server];
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            out.push(Violation::new(
                "tier_distribution",
                "weights must be finite and nonnegative",
            ));
        } else if weights.iter().sum::<f64>() <= 0.0 {
            out.push(Violation::new(
                "tier_distribution",
                "weights must not all be zero",
            ));
        }
        if self.horizon == 0 {
            out.push(Violation::new("horizon", "must be at least 1"));
        }
        for (field, p) in [
            ("red_params.exploit_success", self.red_params.exploit_success),
            (
                "red_params.escalate_success",
                self.red_params.escalate_success,
            ),
        ] {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                out.push(Violation::new(field, "probability must lie in [0, 1]"));
            }
        }
        out
    }

    /// Total slot count (base hosts plus decoy slots) a topology built
    /// from this config will have is not known until generation; this is
    /// just the decoy budget.
    pub fn decoy_budget(&self) -> usize {
        self.max_decoys as usize
    }
}

/// Loads and validates a scenario file (JSON, snake_case keys, unknown
/// keys rejected).
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config: ScenarioConfig =
        serde_json::from_str(&text).map_err(|source| ScenarioError::Parse {
            path: path.display().to_string(),
            source,
        })?;
    let violations = config.validate();
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    Ok(config)
}

// ============================================================================
// Topology
// ============================================================================

/// A generated host: stable id, tier, services and whether it stores
/// confidential data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Host {
    pub id: HostId,
    pub subnet: SubnetId,
    pub tier: Tier,
    pub services: BTreeSet<String>,
    pub confidential_data: bool,
}

impl Host {
    pub fn has_exploitable_service(&self) -> bool {
        self.services.iter().any(|s| service_is_exploitable(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subnet {
    pub id: SubnetId,
    pub hosts: Vec<Host>,
}

/// A generated network: subnets in id order, a symmetric reachability
/// relation stored as `(a, b)` pairs with `a < b`, and the single
/// critical host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTopology {
    pub subnets: Vec<Subnet>,
    pub reachability: BTreeSet<(SubnetId, SubnetId)>,
    pub critical_host: HostId,
}

impl NetworkTopology {
    pub fn subnet_count(&self) -> usize {
        self.subnets.len()
    }

    pub fn host_count(&self) -> usize {
        self.subnets.iter().map(|s| s.hosts.len()).sum()
    }

    /// All hosts in id order.
    pub fn hosts(&self) -> impl Iterator<Item = &Host> {
        self.subnets.iter().flat_map(|s| s.hosts.iter())
    }

    pub fn host(&self, id: HostId) -> Option<&Host> {
        self.hosts().find(|h| h.id == id)
    }

    pub fn subnet_of(&self, id: HostId) -> Option<SubnetId> {
        self.host(id).map(|h| h.subnet)
    }

    /// Neighbors of `s` under the reachability relation, ascending.
    pub fn neighbors(&self, s: SubnetId) -> Vec<SubnetId> {
        let mut out: Vec<SubnetId> = self
            .reachability
            .iter()
            .filter_map(|&(a, b)| {
                if a == s {
                    Some(b)
                } else if b == s {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort();
        out
    }

    /// BFS shortest path between subnets, skipping `blocked` pairs.
    /// Returns the inclusive subnet sequence, or None if unreachable.
    pub fn shortest_subnet_path(
        &self,
        from: SubnetId,
        to: SubnetId,
        blocked: &BTreeSet<(SubnetId, SubnetId)>,
    ) -> Option<Vec<SubnetId>> {
        let n = self.subnets.len();
        let mut prev: Vec<Option<SubnetId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[from.0 as usize] = true;
        queue.push_back(from);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut path = vec![to];
                let mut at = to;
                while at != from {
                    at = prev[at.0 as usize].expect("path backlink");
                    path.push(at);
                }
                path.reverse();
                return Some(path);
            }
            for nb in self.neighbors(cur) {
                let key = ordered_pair(cur, nb);
                if blocked.contains(&key) || seen[nb.0 as usize] {
                    continue;
                }
                seen[nb.0 as usize] = true;
                prev[nb.0 as usize] = Some(cur);
                queue.push_back(nb);
            }
        }
        None
    }

    /// Whether the reachability graph connects every subnet.
    pub fn is_connected(&self) -> bool {
        let empty = BTreeSet::new();
        (0..self.subnets.len() as u16)
            .all(|i| self.shortest_subnet_path(SubnetId(0), SubnetId(i), &empty).is_some())
    }
}

/// Normalizes an undirected subnet pair to `(min, max)` order.
pub fn ordered_pair(a: SubnetId, b: SubnetId) -> (SubnetId, SubnetId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

// ============================================================================
// Generation
// ============================================================================

/// Generates a topology as a pure function of `(config, seed)`.
///
/// Subnet reachability is a random tree plus `subnet_count / 4` extra
/// edges, so the graph is always connected but not fully meshed. The
/// critical operational server is placed in the subnet at maximum tree
/// distance from subnet 0 (red's entry), ties broken toward the lowest
/// subnet id. Every subnet is guaranteed at least one host with an
/// exploitable service, and every operational server carries one.
pub fn generate_topology(
    config: &ScenarioConfig,
    seed: u64,
) -> Result<NetworkTopology, ScenarioError> {
    let violations = config.validate();
    if !violations.is_empty() {
        return Err(ScenarioError::Invalid(violations));
    }
    let mut rng = rng::seeded(seed);
    let n = config.subnet_count as usize;
    let [lo, hi] = config.hosts_per_subnet;

    // Draw everything up front in a fixed order; structural adjustments
    // afterwards are deterministic and draw nothing.
    let sizes: Vec<u16> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();

    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    for child in 1..n {
        let parent = rng.gen_range(0..child);
        tree_edges.push((parent, child));
    }

    let mut reachability: BTreeSet<(SubnetId, SubnetId)> = tree_edges
        .iter()
        .map(|&(a, b)| ordered_pair(SubnetId(a as u16), SubnetId(b as u16)))
        .collect();

    let extra = n / 4;
    let mut candidates: Vec<(SubnetId, SubnetId)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let pair = (SubnetId(a as u16), SubnetId(b as u16));
            if !reachability.contains(&pair) {
                candidates.push(pair);
            }
        }
    }
    for _ in 0..extra {
        if candidates.is_empty() {
            break;
        }
        let idx = rng.gen_range(0..candidates.len());
        reachability.insert(candidates.remove(idx));
    }

    let dist = &config.tier_distribution;
    let total_weight = dist.user_host + dist.enterprise_server + dist.operational_server;

    let mut subnets = Vec::with_capacity(n);
    let mut next_host = 0u16;
    for (si, &size) in sizes.iter().enumerate() {
        let mut hosts = Vec::with_capacity(size as usize);
        for _ in 0..size {
            let tier = {
                let x = rng.gen::<f64>() * total_weight;
                if x < dist.user_host {
                    Tier::UserHost
                } else if x < dist.user_host + dist.enterprise_server {
                    Tier::EnterpriseServer
                } else {
                    Tier::OperationalServer
                }
            };
            let services = draw_services(&mut rng);
            let confidential_data = match tier {
                Tier::OperationalServer => true,
                Tier::EnterpriseServer => rng.gen::<f64>() < 0.75,
                Tier::UserHost => rng.gen::<f64>() < 0.25,
            };
            hosts.push(Host {
                id: HostId(next_host),
                subnet: SubnetId(si as u16),
                tier,
                services,
                confidential_data,
            });
            next_host += 1;
        }
        subnets.push(Subnet {
            id: SubnetId(si as u16),
            hosts,
        });
    }

    // Critical host: first host of the subnet at max tree distance from
    // subnet 0 (tree edges only; extra edges are shortcuts red may also
    // exploit but placement is judged on the tree).
    let critical_subnet = max_tree_distance_subnet(n, &tree_edges);
    let critical_host = {
        let host = &mut subnets[critical_subnet].hosts[0];
        host.tier = Tier::OperationalServer;
        host.confidential_data = true;
        host.id
    };

    // Guarantees: operational servers always expose an exploitable
    // service, and every subnet has at least one exploitable host so no
    // generated network is a dead end for red.
    for subnet in &mut subnets {
        for host in &mut subnet.hosts {
            if host.tier == Tier::OperationalServer && !host.has_exploitable_service() {
                host.services.insert(first_exploitable_service().to_string());
            }
        }
        if !subnet.hosts.iter().any(|h| h.has_exploitable_service()) {
            subnet.hosts[0]
                .services
                .insert(first_exploitable_service().to_string());
        }
    }

    Ok(NetworkTopology {
        subnets,
        reachability,
        critical_host,
    })
}

fn draw_services(rng: &mut DetRng) -> BTreeSet<String> {
    let count = rng.gen_range(1..=3usize);
    let mut indices: Vec<usize> = (0..SERVICE_CATALOG.len()).collect();
    for j in 0..count {
        let pick = rng.gen_range(j..indices.len());
        indices.swap(j, pick);
    }
    indices[..count]
        .iter()
        .map(|&i| SERVICE_CATALOG[i].0.to_string())
        .collect()
}

/// BFS over tree edges from subnet 0; returns the index of the farthest
/// subnet, lowest id on ties.
fn max_tree_distance_subnet(n: usize, tree_edges: &[(usize, usize)]) -> usize {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut dist = vec![usize::MAX; n];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for &nb in &adj[cur] {
            if dist[nb] == usize::MAX {
                dist[nb] = dist[cur] + 1;
                queue.push_back(nb);
            }
        }
    }
    let mut best = 0usize;
    for (i, &d) in dist.iter().enumerate() {
        if d != usize::MAX && d > dist[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::canon;
    use proptest::prelude::*;

    pub(crate) fn config(subnets: u16, lo: u16, hi: u16) -> ScenarioConfig {
        ScenarioConfig {
            subnet_count: subnets,
            hosts_per_subnet: [lo, hi],
            tier_distribution: TierDistribution::default(),
            horizon: 100,
            red_strategy: RedStrategyKind::Beeline,
            detector_config_ref: "realistic".into(),
            reward_config_ref: "default".into(),
            seed: 0,
            max_decoys: 3,
            encoding: ObservationEncoding::Baseline,
            red_params: RedParams::default(),
        }
    }

    #[test]
    fn ten_subnets_three_to_five_hosts() {
        let cfg = config(10, 3, 5);
        let topo = generate_topology(&cfg, 42).unwrap();
        assert_eq!(topo.subnet_count(), 10);
        for subnet in &topo.subnets {
            assert!((3..=5).contains(&subnet.hosts.len()));
        }
    }

    #[test]
    fn minimal_forced_critical() {
        let cfg = config(1, 1, 1);
        let topo = generate_topology(&cfg, 0).unwrap();
        assert_eq!(topo.host_count(), 1);
        let host = topo.host(topo.critical_host).unwrap();
        assert_eq!(host.tier, Tier::OperationalServer);
        assert!(host.has_exploitable_service());
    }

    #[test]
    fn generation_is_deterministic_bytes() {
        let cfg = config(10, 3, 5);
        let a = generate_topology(&cfg, 42).unwrap();
        let b = generate_topology(&cfg, 42).unwrap();
        assert_eq!(
            canon::to_canonical_string(&a).unwrap(),
            canon::to_canonical_string(&b).unwrap()
        );
    }

    #[test]
    fn invalid_range_is_configuration_error() {
        let mut cfg = config(3, 5, 3);
        cfg.hosts_per_subnet = [5, 3];
        match generate_topology(&cfg, 0) {
            Err(ScenarioError::Invalid(violations)) => {
                assert!(violations.iter().any(|v| v.field == "hosts_per_subnet"));
            }
            other => panic!("expected invalid-config error, got {other:?}"),
        }
    }

    #[test]
    fn validate_ok_empty() {
        assert!(config(3, 1, 4).validate().is_empty());
    }

    #[test]
    fn validate_zero_subnets() {
        let violations = config(0, 1, 1).validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "subnet_count");
    }

    #[test]
    fn validate_reports_all_violations_in_stable_order() {
        let mut cfg = config(0, 1, 1);
        cfg.horizon = 0;
        let violations = cfg.validate();
        let fields: Vec<&str> = violations.iter().map(|v| v.field.as_str()).collect();
        assert_eq!(fields, vec!["subnet_count", "horizon"]);
    }

    #[test]
    fn load_round_trip_and_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        std::fs::write(
            &path,
            r#"{"subnet_count": 3, "hosts_per_subnet": [2, 4]}"#,
        )
        .unwrap();
        let cfg = load_scenario(&path).unwrap();
        assert_eq!(cfg.subnet_count, 3);
        assert_eq!(cfg.hosts_per_subnet, [2, 4]);
        assert_eq!(cfg.seed, 0, "omitted seed defaults to 0");
        assert_eq!(cfg.horizon, 100);
        assert_eq!(cfg.detector_config_ref, "realistic");
    }

    #[test]
    fn load_rejects_inverted_range_naming_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        std::fs::write(
            &path,
            r#"{"subnet_count": 3, "hosts_per_subnet": [5, 3]}"#,
        )
        .unwrap();
        match load_scenario(&path) {
            Err(ScenarioError::Invalid(violations)) => {
                assert!(violations[0].field.contains("hosts_per_subnet"));
            }
            other => panic!("expected invariant violation, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        std::fs::write(
            &path,
            r#"{"subnet_count": 1, "hosts_per_subnet": [1, 1], "bogus": 1}"#,
        )
        .unwrap();
        assert!(matches!(load_scenario(&path), Err(ScenarioError::Parse { .. })));
    }

    #[test]
    fn load_missing_file() {
        assert!(matches!(
            load_scenario("/nonexistent/scenario.json"),
            Err(ScenarioError::Io { .. })
        ));
    }

    #[test]
    fn exactly_one_critical_host_reference() {
        for seed in 0..20 {
            let topo = generate_topology(&config(4, 1, 3), seed).unwrap();
            let critical = topo.host(topo.critical_host).unwrap();
            assert_eq!(critical.tier, Tier::OperationalServer);
            // Stable ids, unique network-wide.
            let ids: Vec<u16> = topo.hosts().map(|h| h.id.0).collect();
            let expected: Vec<u16> = (0..topo.host_count() as u16).collect();
            assert_eq!(ids, expected);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn host_counts_within_bounds(
            subnets in 1u16..8,
            lo in 1u16..4,
            extra in 0u16..4,
            seed in any::<u64>(),
        ) {
            let cfg = config(subnets, lo, lo + extra);
            let topo = generate_topology(&cfg, seed).unwrap();
            prop_assert_eq!(topo.subnet_count(), subnets as usize);
            for subnet in &topo.subnets {
                prop_assert!((lo..=lo + extra).contains(&(subnet.hosts.len() as u16)));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn generation_referentially_transparent(
            subnets in 1u16..10,
            lo in 1u16..3,
            extra in 0u16..3,
            seed in any::<u64>(),
        ) {
            let cfg = config(subnets, lo, lo + extra);
            let a = generate_topology(&cfg, seed).unwrap();
            let b = generate_topology(&cfg, seed).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn reachability_connected_and_one_critical(
            subnets in 1u16..12,
            seed in any::<u64>(),
        ) {
            let cfg = config(subnets, 1, 3);
            let topo = generate_topology(&cfg, seed).unwrap();
            prop_assert!(topo.is_connected());
            prop_assert!(topo.host(topo.critical_host).is_some());
            for subnet in &topo.subnets {
                prop_assert!(!subnet.hosts.is_empty());
                prop_assert!(subnet.hosts.iter().any(|h| h.has_exploitable_service()));
            }
        }
    }
}
