//! Scripted attacker strategies.
//!
//! Red sees the network only through its accumulated knowledge: hosts it
//! has discovered, scanned, and holds sessions on. Each turn a strategy
//! picks exactly one action from the legal set. Beeline walks the
//! shortest subnet path to the critical operational server, Meander
//! fully compromises each subnet before crossing an edge, RandomWalk
//! samples uniformly from whatever is legal, and Passive never acts
//! (useful as a no-red control).

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{ActionOutcome, OutcomeDetails};
use crate::rng::DetRng;
use crate::scenario::{HostId, SubnetId};

// ============================================================================
// Actions
// ============================================================================

/// One attacker move. Targets must exist in the network view; Impact is
/// only ever aimed at the critical host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RedAction {
    DiscoverSubnet { subnet: SubnetId },
    ScanHost { host: HostId },
    Exploit { host: HostId },
    PrivilegeEscalate { host: HostId },
    Impact { host: HostId },
}

/// Fieldless action discriminant, used as detector map keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedActionKind {
    DiscoverSubnet,
    ScanHost,
    Exploit,
    PrivilegeEscalate,
    Impact,
}

impl RedActionKind {
    pub const ALL: [RedActionKind; 5] = [
        RedActionKind::DiscoverSubnet,
        RedActionKind::ScanHost,
        RedActionKind::Exploit,
        RedActionKind::PrivilegeEscalate,
        RedActionKind::Impact,
    ];
}

impl RedAction {
    pub fn kind(&self) -> RedActionKind {
        match self {
            RedAction::DiscoverSubnet { .. } => RedActionKind::DiscoverSubnet,
            RedAction::ScanHost { .. } => RedActionKind::ScanHost,
            RedAction::Exploit { .. } => RedActionKind::Exploit,
            RedAction::PrivilegeEscalate { .. } => RedActionKind::PrivilegeEscalate,
            RedAction::Impact { .. } => RedActionKind::Impact,
        }
    }

    /// Target host for host-directed actions.
    pub fn target_host(&self) -> Option<HostId> {
        match *self {
            RedAction::DiscoverSubnet { .. } => None,
            RedAction::ScanHost { host }
            | RedAction::Exploit { host }
            | RedAction::PrivilegeEscalate { host }
            | RedAction::Impact { host } => Some(host),
        }
    }
}

/// Result of strategy selection: an action, or an explicit stall when
/// isolation and blocks leave nothing legal. The engine treats a stall
/// as a red no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedDecision {
    Action(RedAction),
    Stalled,
}

// ============================================================================
// Knowledge
// ============================================================================

/// Red's filtered view of the world. The four host sets form a chain:
/// privileged ⊆ user ⊆ scanned ⊆ discovered. Decoy hosts may appear in
/// any of them; red cannot tell them apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedKnowledge {
    pub discovered_hosts: BTreeSet<HostId>,
    pub scanned_hosts: BTreeSet<HostId>,
    pub user_sessions: BTreeSet<HostId>,
    pub privileged_sessions: BTreeSet<HostId>,
    pub entry_subnet: SubnetId,
}

impl RedKnowledge {
    pub fn new(entry_subnet: SubnetId) -> Self {
        Self {
            discovered_hosts: BTreeSet::new(),
            scanned_hosts: BTreeSet::new(),
            user_sessions: BTreeSet::new(),
            privileged_sessions: BTreeSet::new(),
            entry_subnet,
        }
    }

    /// Subset-chain invariant check.
    pub fn invariants_hold(&self) -> bool {
        self.privileged_sessions.is_subset(&self.user_sessions)
            && self.user_sessions.is_subset(&self.scanned_hosts)
            && self.scanned_hosts.is_subset(&self.discovered_hosts)
    }

    /// Applies the outcome of red's own action. Failed actions change
    /// nothing; successful ones grow the relevant set.
    pub fn update(&mut self, action: &RedAction, outcome: &ActionOutcome) {
        if !outcome.success {
            return;
        }
        match (action, &outcome.details) {
            (RedAction::DiscoverSubnet { .. }, OutcomeDetails::HostsDiscovered { hosts }) => {
                self.discovered_hosts.extend(hosts.iter().copied());
            }
            (RedAction::ScanHost { host }, _) => {
                self.scanned_hosts.insert(*host);
            }
            (RedAction::Exploit { host }, _) => {
                self.user_sessions.insert(*host);
            }
            (RedAction::PrivilegeEscalate { host }, _) => {
                self.privileged_sessions.insert(*host);
            }
            _ => {}
        }
        debug_assert!(self.invariants_hold());
    }

    /// Eviction after a blue Remove/Restore: the host leaves both
    /// session sets but stays discovered (and scanned).
    pub fn evict_sessions(&mut self, host: HostId) {
        self.user_sessions.remove(&host);
        self.privileged_sessions.remove(&host);
    }

    /// Marks a host as discovered without a discover action (a decoy
    /// appearing in an already-mapped subnet).
    pub fn reveal_host(&mut self, host: HostId) {
        self.discovered_hosts.insert(host);
    }
}

// ============================================================================
// Network view
// ============================================================================

/// What red can act against this turn. The engine builds one per turn
/// from ground truth: isolated hosts and undeployed decoy slots are
/// excluded from target lists, blocked subnet pairs are removed from the
/// edge set. `host_subnets` covers every present host (isolated ones
/// included) so subnet membership stays resolvable.
#[derive(Debug, Clone)]
pub struct NetView {
    pub subnets: Vec<SubnetView>,
    pub edges: BTreeSet<(SubnetId, SubnetId)>,
    pub host_subnets: BTreeMap<HostId, SubnetId>,
    pub entry_subnet: SubnetId,
    pub critical_host: HostId,
    pub critical_subnet: SubnetId,
}

#[derive(Debug, Clone)]
pub struct SubnetView {
    pub id: SubnetId,
    pub hosts: Vec<HostView>,
}

#[derive(Debug, Clone, Copy)]
pub struct HostView {
    pub id: HostId,
    pub exploitable: bool,
}

impl NetView {
    fn subnet(&self, id: SubnetId) -> &SubnetView {
        &self.subnets[id.0 as usize]
    }

    fn targetable(&self, host: HostId) -> bool {
        self.subnets
            .iter()
            .any(|s| s.hosts.iter().any(|h| h.id == host))
    }

    fn exploitable(&self, host: HostId) -> bool {
        self.subnets
            .iter()
            .flat_map(|s| s.hosts.iter())
            .any(|h| h.id == host && h.exploitable)
    }

    fn neighbors(&self, s: SubnetId) -> impl Iterator<Item = SubnetId> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == s {
                Some(b)
            } else if b == s {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Shortest path over unblocked edges, BFS with ascending neighbor
    /// order for determinism.
    fn shortest_path(&self, from: SubnetId, to: SubnetId) -> Option<Vec<SubnetId>> {
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
            let mut nbs: Vec<SubnetId> = self.neighbors(cur).collect();
            nbs.sort();
            for nb in nbs {
                if !seen[nb.0 as usize] {
                    seen[nb.0 as usize] = true;
                    prev[nb.0 as usize] = Some(cur);
                    queue.push_back(nb);
                }
            }
        }
        None
    }
}

// ============================================================================
// Legality
// ============================================================================

fn session_in(knowledge: &RedKnowledge, view: &NetView, subnet: SubnetId) -> bool {
    view.subnet(subnet)
        .hosts
        .iter()
        .any(|h| knowledge.user_sessions.contains(&h.id))
}

/// Red can act inside `subnet` when it is the entry subnet, when red
/// already holds a session there, or when an unblocked edge connects it
/// to a subnet with a session.
fn has_access(knowledge: &RedKnowledge, view: &NetView, subnet: SubnetId) -> bool {
    if subnet == view.entry_subnet || session_in(knowledge, view, subnet) {
        return true;
    }
    view.neighbors(subnet)
        .any(|nb| session_in(knowledge, view, nb))
}

fn subnet_discovered(knowledge: &RedKnowledge, view: &NetView, subnet: SubnetId) -> bool {
    knowledge
        .discovered_hosts
        .iter()
        .any(|h| view.host_subnets.get(h) == Some(&subnet))
}

/// Whether `action` is legal for red this turn.
pub fn is_legal(action: &RedAction, knowledge: &RedKnowledge, view: &NetView) -> bool {
    match *action {
        RedAction::DiscoverSubnet { subnet } => {
            (subnet.0 as usize) < view.subnets.len()
                && !subnet_discovered(knowledge, view, subnet)
                && has_access(knowledge, view, subnet)
        }
        RedAction::ScanHost { host } => {
            view.targetable(host)
                && knowledge.discovered_hosts.contains(&host)
                && !knowledge.scanned_hosts.contains(&host)
                && has_access(knowledge, view, view.host_subnets[&host])
        }
        RedAction::Exploit { host } => {
            view.targetable(host)
                && knowledge.scanned_hosts.contains(&host)
                && !knowledge.user_sessions.contains(&host)
                && view.exploitable(host)
                && has_access(knowledge, view, view.host_subnets[&host])
        }
        RedAction::PrivilegeEscalate { host } => {
            view.targetable(host)
                && knowledge.user_sessions.contains(&host)
                && !knowledge.privileged_sessions.contains(&host)
        }
        RedAction::Impact { host } => {
            host == view.critical_host
                && view.targetable(host)
                && knowledge.privileged_sessions.contains(&host)
        }
    }
}

/// Enumerates every legal action in a stable order: discovers by subnet
/// id, then scans, exploits, escalations by host id, then impact.
pub fn legal_actions(knowledge: &RedKnowledge, view: &NetView) -> Vec<RedAction> {
    let mut out = Vec::new();
    for subnet in &view.subnets {
        let action = RedAction::DiscoverSubnet { subnet: subnet.id };
        if is_legal(&action, knowledge, view) {
            out.push(action);
        }
    }
    let hosts: Vec<HostId> = view
        .subnets
        .iter()
        .flat_map(|s| s.hosts.iter().map(|h| h.id))
        .collect();
    let mut sorted = hosts;
    sorted.sort();
    for kind in [
        RedActionKind::ScanHost,
        RedActionKind::Exploit,
        RedActionKind::PrivilegeEscalate,
    ] {
        for &host in &sorted {
            let action = match kind {
                RedActionKind::ScanHost => RedAction::ScanHost { host },
                RedActionKind::Exploit => RedAction::Exploit { host },
                _ => RedAction::PrivilegeEscalate { host },
            };
            if is_legal(&action, knowledge, view) {
                out.push(action);
            }
        }
    }
    let impact = RedAction::Impact {
        host: view.critical_host,
    };
    if is_legal(&impact, knowledge, view) {
        out.push(impact);
    }
    out
}

// ============================================================================
// Strategies
// ============================================================================

/// Strategy selector name, chosen in the scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RedStrategyKind {
    #[default]
    Beeline,
    Meander,
    RandomWalk,
    /// Never acts. Gives a red-free game for reward and agent baselines.
    Passive,
}

impl std::fmt::Display for RedStrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RedStrategyKind::Beeline => "beeline",
            RedStrategyKind::Meander => "meander",
            RedStrategyKind::RandomWalk => "random_walk",
            RedStrategyKind::Passive => "passive",
        };
        f.write_str(s)
    }
}

/// Per-strategy tunables, under `red_params` in the scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedParams {
    #[serde(default = "default_exploit_success")]
    pub exploit_success: f64,
    #[serde(default = "default_escalate_success")]
    pub escalate_success: f64,
}

fn default_exploit_success() -> f64 {
    0.9
}

fn default_escalate_success() -> f64 {
    0.9
}

impl Default for RedParams {
    fn default() -> Self {
        Self {
            exploit_success: 0.9,
            escalate_success: 0.9,
        }
    }
}

/// A strategy instance. The rng stream lives in the engine's game state
/// and is passed in per call, so selection is deterministic given
/// (knowledge, rng state).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RedStrategy {
    pub kind: RedStrategyKind,
    pub params: RedParams,
}

impl RedStrategy {
    pub fn new(kind: RedStrategyKind, params: RedParams) -> Self {
        Self { kind, params }
    }
}

/// Picks red's action for this turn, or signals a stall.
pub fn select_action(
    strategy: &RedStrategy,
    knowledge: &RedKnowledge,
    view: &NetView,
    rng: &mut DetRng,
) -> RedDecision {
    let chosen = match strategy.kind {
        RedStrategyKind::Passive => None,
        RedStrategyKind::Beeline => beeline(knowledge, view),
        RedStrategyKind::Meander => meander(knowledge, view),
        RedStrategyKind::RandomWalk => {
            let actions = legal_actions(knowledge, view);
            if actions.is_empty() {
                None
            } else {
                Some(actions[rng.gen_range(0..actions.len())])
            }
        }
    };
    match chosen {
        Some(action) => {
            debug_assert!(is_legal(&action, knowledge, view), "strategy chose {action:?}");
            RedDecision::Action(action)
        }
        None => RedDecision::Stalled,
    }
}

/// First legal action in stable order; fallback when a scripted plan is
/// fully blocked.
fn first_legal(knowledge: &RedKnowledge, view: &NetView) -> Option<RedAction> {
    legal_actions(knowledge, view).into_iter().next()
}

/// Lowest-id host in `subnet` that red could exploit next: scanned but
/// not yet a session, with an exploitable service.
fn exploit_target(knowledge: &RedKnowledge, view: &NetView, subnet: SubnetId) -> Option<HostId> {
    view.subnet(subnet)
        .hosts
        .iter()
        .filter(|h| {
            h.exploitable
                && knowledge.scanned_hosts.contains(&h.id)
                && !knowledge.user_sessions.contains(&h.id)
        })
        .map(|h| h.id)
        .next()
}

/// Lowest-id discovered-but-unscanned host in `subnet`.
fn scan_target(knowledge: &RedKnowledge, view: &NetView, subnet: SubnetId) -> Option<HostId> {
    view.subnet(subnet)
        .hosts
        .iter()
        .filter(|h| {
            knowledge.discovered_hosts.contains(&h.id) && !knowledge.scanned_hosts.contains(&h.id)
        })
        .map(|h| h.id)
        .next()
}

/// Beeline priority ladder: impact if privileged on the critical host,
/// escalate if a user session is there, otherwise advance along the
/// shortest subnet path - discover, then scan/exploit one foothold per
/// subnet until the critical subnet is reached.
fn beeline(knowledge: &RedKnowledge, view: &NetView) -> Option<RedAction> {
    let crit = view.critical_host;
    if view.targetable(crit) {
        if knowledge.privileged_sessions.contains(&crit) {
            return Some(RedAction::Impact { host: crit });
        }
        if knowledge.user_sessions.contains(&crit) {
            return Some(RedAction::PrivilegeEscalate { host: crit });
        }
    }
    let path = match view.shortest_path(view.entry_subnet, view.critical_subnet) {
        Some(p) => p,
        None => return first_legal(knowledge, view),
    };
    for &subnet in &path {
        if session_in(knowledge, view, subnet) {
            continue;
        }
        if !subnet_discovered(knowledge, view, subnet) {
            let action = RedAction::DiscoverSubnet { subnet };
            if is_legal(&action, knowledge, view) {
                return Some(action);
            }
            return first_legal(knowledge, view);
        }
        // Prefer the critical host itself once its subnet is in reach.
        let preferred = if subnet == view.critical_subnet && view.targetable(crit) {
            if !knowledge.scanned_hosts.contains(&crit) {
                Some(RedAction::ScanHost { host: crit })
            } else if !knowledge.user_sessions.contains(&crit) {
                Some(RedAction::Exploit { host: crit })
            } else {
                None
            }
        } else {
            None
        };
        let action = preferred.or_else(|| {
            exploit_target(knowledge, view, subnet)
                .map(|host| RedAction::Exploit { host })
                .or_else(|| scan_target(knowledge, view, subnet).map(|host| RedAction::ScanHost { host }))
        });
        match action {
            Some(a) if is_legal(&a, knowledge, view) => return Some(a),
            _ => return first_legal(knowledge, view),
        }
    }
    // Sessions exist along the whole path; work the critical host chain.
    if view.targetable(crit) {
        if !knowledge.scanned_hosts.contains(&crit) {
            let a = RedAction::ScanHost { host: crit };
            if is_legal(&a, knowledge, view) {
                return Some(a);
            }
        } else if !knowledge.user_sessions.contains(&crit) {
            let a = RedAction::Exploit { host: crit };
            if is_legal(&a, knowledge, view) {
                return Some(a);
            }
        }
    }
    first_legal(knowledge, view)
}

/// Meander ladder: impact when possible, otherwise take subnets in BFS
/// order from entry and fully work each one (discover, scan all, exploit
/// all, escalate all) before moving deeper.
fn meander(knowledge: &RedKnowledge, view: &NetView) -> Option<RedAction> {
    let crit = view.critical_host;
    if view.targetable(crit) && knowledge.privileged_sessions.contains(&crit) {
        return Some(RedAction::Impact { host: crit });
    }
    for subnet in bfs_order(view) {
        if !has_access(knowledge, view, subnet) {
            continue;
        }
        if !subnet_discovered(knowledge, view, subnet) {
            let a = RedAction::DiscoverSubnet { subnet };
            if is_legal(&a, knowledge, view) {
                return Some(a);
            }
            continue;
        }
        if let Some(host) = scan_target(knowledge, view, subnet) {
            return Some(RedAction::ScanHost { host });
        }
        if let Some(host) = exploit_target(knowledge, view, subnet) {
            return Some(RedAction::Exploit { host });
        }
        if let Some(host) = view
            .subnet(subnet)
            .hosts
            .iter()
            .filter(|h| {
                knowledge.user_sessions.contains(&h.id)
                    && !knowledge.privileged_sessions.contains(&h.id)
            })
            .map(|h| h.id)
            .next()
        {
            return Some(RedAction::PrivilegeEscalate { host });
        }
        // Subnet complete; move to the next one.
    }
    first_legal(knowledge, view)
}

fn bfs_order(view: &NetView) -> Vec<SubnetId> {
    let n = view.subnets.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::from([view.entry_subnet]);
    seen[view.entry_subnet.0 as usize] = true;
    while let Some(cur) = queue.pop_front() {
        order.push(cur);
        let mut nbs: Vec<SubnetId> = view.neighbors(cur).collect();
        nbs.sort();
        for nb in nbs {
            if !seen[nb.0 as usize] {
                seen[nb.0 as usize] = true;
                queue.push_back(nb);
            }
        }
    }
    order
}
