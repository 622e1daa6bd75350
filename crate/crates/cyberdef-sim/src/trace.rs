//! Episode traces: the canonical, hash-verified record of one game.
//!
//! A trace is a JSON-Lines file: header line, one record line per turn,
//! footer line. Every line is compact JSON with sorted keys. The footer
//! carries a 64-bit FNV-1a hash over the exact bytes of the header and
//! record lines (each terminated by `\n`), written as 16 hex digits, so
//! any implementation can verify or reproduce trace identity.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canon;
use crate::detection::Alert;
use crate::engine::{ActionOutcome, BlueAction};
use crate::red::RedAction;
use crate::reward::RewardComponents;

/// Current trace format version.
pub const TRACE_FORMAT_VERSION: &str = "cdtrace/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceHeader {
    pub format_version: String,
    pub scenario_hash: String,
    pub scenario_seed: u64,
    pub episode_seed: u64,
    pub detector_hash: String,
    pub reward_hash: String,
}

/// One turn: what blue asked for (its effect, and whether it was
/// degraded to Monitor), what red did, the alerts raised (genuine flags
/// included - traces are diagnostics, only agents are blind to them),
/// and the reward breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub turn: u32,
    pub blue_action: BlueAction,
    pub blue_outcome: ActionOutcome,
    pub blue_degraded: bool,
    pub red_action: Option<RedAction>,
    pub action_outcome: Option<ActionOutcome>,
    pub alerts: Vec<Alert>,
    pub reward_components: RewardComponents,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFooter {
    pub episode_return: f64,
    pub terminal_turn: u32,
    pub trace_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub header: TraceHeader,
    pub records: Vec<TraceRecord>,
    pub footer: TraceFooter,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("failed to read trace {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("trace is empty")]
    Empty,
    #[error("trace line {line} is not valid: {source}")]
    MalformedLine {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("trace has no parseable footer line")]
    MissingFooter,
    #[error("trace footer says {expected} turns but {found} records are present")]
    RecordCountMismatch { expected: u32, found: usize },
}

impl EpisodeTrace {
    /// The canonical bytes the trace hash covers: header line plus every
    /// record line, each terminated by a newline. The footer is excluded
    /// because it contains the hash itself.
    pub fn hash_input(&self) -> String {
        let mut out = String::new();
        out.push_str(&canon::to_canonical_string(&self.header).expect("serializable header"));
        out.push('\n');
        for record in &self.records {
            out.push_str(&canon::to_canonical_string(record).expect("serializable record"));
            out.push('\n');
        }
        out
    }

    /// 64-bit FNV-1a over [`Self::hash_input`].
    pub fn compute_hash(&self) -> u64 {
        canon::fnv1a64(self.hash_input().as_bytes())
    }

    pub fn compute_hash_hex(&self) -> String {
        format!("{:016x}", self.compute_hash())
    }

    /// Serializes the whole trace to JSON Lines, footer last.
    pub fn to_jsonl(&self) -> String {
        let mut out = self.hash_input();
        out.push_str(&canon::to_canonical_string(&self.footer).expect("serializable footer"));
        out.push('\n');
        out
    }

    /// Parses a JSON-Lines trace. Reports format problems (truncation,
    /// malformed lines, record/footer mismatch); hash and version
    /// checking belong to replay verification.
    pub fn from_jsonl(content: &str) -> Result<Self, TraceError> {
        let lines: Vec<&str> = content.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            return Err(TraceError::Empty);
        }
        let header: TraceHeader =
            serde_json::from_str(lines[0]).map_err(|source| TraceError::MalformedLine {
                line: 1,
                source,
            })?;
        if lines.len() < 2 {
            return Err(TraceError::MissingFooter);
        }
        let footer: TraceFooter =
            serde_json::from_str(lines[lines.len() - 1]).map_err(|_| TraceError::MissingFooter)?;
        let mut records = Vec::with_capacity(lines.len() - 2);
        for (idx, line) in lines[1..lines.len() - 1].iter().enumerate() {
            let record: TraceRecord =
                serde_json::from_str(line).map_err(|source| TraceError::MalformedLine {
                    line: idx + 2,
                    source,
                })?;
            records.push(record);
        }
        if records.len() != footer.terminal_turn as usize {
            return Err(TraceError::RecordCountMismatch {
                expected: footer.terminal_turn,
                found: records.len(),
            });
        }
        Ok(Self {
            header,
            records,
            footer,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_jsonl())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TraceError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| TraceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_jsonl(&content)
    }
}

/// Hash over the raw on-disk bytes of every line except the footer.
/// Used by replay verification so any edit to the stored lines is
/// caught, even a formatting-only one.
pub fn raw_hash_hex(content: &str) -> Option<String> {
    let lines: Vec<&str> = content.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() < 2 {
        return None;
    }
    let mut input = String::new();
    for line in &lines[..lines.len() - 1] {
        input.push_str(line);
        input.push('\n');
    }
    Some(format!("{:016x}", canon::fnv1a64(input.as_bytes())))
}
