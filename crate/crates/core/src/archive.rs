//! Append-only run archive and the claims ledger.
//!
//! The archive is newline-delimited JSON, one [`RunRecord`] per line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ArchiveError {
    #[error("cannot append to archive {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot serialize run record: {0}")]
    Serialize(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: u128,
    pub tool_version: String,
    pub config: Value,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

impl RunRecord {
    pub fn new(config: Value, payload: Value) -> Self {
        let timestamp_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        RunRecord {
            schema_version: SCHEMA_VERSION,
            timestamp_ms,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            payload,
            oracle: None,
            z: None,
        }
    }
}

static WRITE_LOCK: Mutex<()> = Mutex::new(());

/// Appends `record` as one line to `path`, creating the file if needed.
pub fn archive(record: &RunRecord, path: &Path) -> Result<(), ArchiveError> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let _guard = WRITE_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let io = |source| ArchiveError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io)?;
    file.write_all(line.as_bytes()).map_err(io)?;
    file.flush().map_err(io)
}

/// Reads every record of an archive, in order.
pub fn read_archive(path: &Path) -> Result<Vec<RunRecord>, ArchiveError> {
    let text = std::fs::read_to_string(path).map_err(|source| ArchiveError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(ArchiveError::from))
        .collect()
}

/// One implemented result, the operation that computes it and the command
/// that exercises or checks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: &'static str,
    pub module: &'static str,
    pub operation: &'static str,
    pub command: &'static str,
}

const fn claim(
    claim: &'static str,
    module: &'static str,
    operation: &'static str,
    command: &'static str,
) -> Claim {
    Claim {
        claim,
        module,
        operation,
        command,
    }
}

const CLAIMS: &[Claim] = &[
    claim(
        "Average subsystem entropy H_{mM} - H_M - (m-1)/(2M)",
        "analytic",
        "page_sen_entropy",
        "subentropy analytic --dims 2x2 --quantity entropy",
    ),
    claim(
        "Entropy deficit Δ = <S> - ln m",
        "analytic",
        "entropy_deficit",
        "subentropy analytic --dims 2x8 --quantity deficit",
    ),
    claim(
        "Δ lies strictly in (-m/(2M), -(m-1)/(2M)); <S> within 1/2 nat of ln m",
        "verify",
        "check_delta_interval",
        "subentropy verify --check delta-interval --m-max 64",
    ),
    claim(
        "Average symmetric subsystem information ln m - <S>",
        "analytic",
        "symmetric_info",
        "subentropy analytic --dims 2x8 --quantity symmetric-info",
    ),
    claim(
        "Asymmetric subsystem informations ln nA - <S>, ln nB - <S> and their mean",
        "analytic",
        "asymmetric_info",
        "subentropy analytic --dims 2x8 --quantity asymmetric-info",
    ),
    claim(
        "Havil, Franel, fourth-order and weak bounds on H_n; eps_n decreasing",
        "verify",
        "check_harmonic_bounds",
        "subentropy verify --check harmonic --n-max 100000",
    ),
    claim(
        "Average purity (nA + nB)/(nA nB + 1)",
        "analytic",
        "avg_purity",
        "subentropy analytic --dims 3x5 --quantity purity",
    ),
    claim(
        "Average tangle 2(m-1)(M-1)/(mM + 1)",
        "analytic",
        "avg_tangle",
        "subentropy analytic --dims 2x2 --quantity tangle",
    ),
    claim(
        "Average concurrence at most the square root of the average tangle",
        "analytic",
        "concurrence_bound",
        "subentropy analytic --dims 2x3 --quantity concurrence-bound",
    ),
    claim(
        "Tangle deficit 2(m^2-1)/(m(mM+1)) <= 2/M",
        "analytic",
        "tangle_deficit",
        "subentropy sweep --limit tangle --m 4 --k-max 10",
    ),
    claim(
        "Approximate sum rule for the asymmetric and mutual informations (3/2 nat)",
        "verify",
        "check_approximation_slacks",
        "subentropy verify --check slacks",
    ),
    claim(
        "Exact average tripartite mutual information for nA nB <= nC",
        "analytic",
        "tripartite_avg_mutual_info",
        "subentropy analytic --dims 2x2x4 --quantity mutual-info",
    ),
    claim(
        "Average mutual information <= nA nB/(2 nC) <= 1/2 when nA nB <= nC",
        "analytic",
        "tripartite_mutual_info_bound",
        "subentropy verify --check tripartite",
    ),
    claim(
        "Average mutual information S_A + S_B - S_C in any tripartite split",
        "analytic",
        "avg_mutual_info_any",
        "subentropy analytic --dims 2x2x2x8 --quantity mutual-info --a 0 --b 1",
    ),
    claim(
        "Sum of the three subsystem entropies, approximated to 3/2 nat",
        "analytic",
        "tripartite_entropy_sum_approx",
        "subentropy analytic --dims 2x2x4 --quantity entropy-sum-approx",
    ),
    claim(
        "Average entropy of a collection of factors",
        "analytic",
        "multipartite_collection_entropy",
        "subentropy analytic --dims 2x3x5 --quantity entropy --keep 0,2",
    ),
    claim(
        "Average mutual information of small collections <= nA nB/(2 nC)",
        "analytic",
        "multipartite_mutual_info_bound",
        "subentropy analytic --dims 2x2x2x8 --quantity mutual-info-bound --a 0 --b 1",
    ),
    claim(
        "Thermodynamic limit of the average entropy: ln m",
        "analytic",
        "thermo_limit_entropy",
        "subentropy sweep --limit entropy --m 2 --k-max 10",
    ),
    claim(
        "Thermodynamic limit of the average tangle: 2(1 - 1/m)",
        "analytic",
        "thermo_limit_tangle",
        "subentropy analytic --dims 4 --quantity thermo-tangle",
    ),
    claim(
        "Reduced density matrix by partial trace",
        "quantum",
        "partial_trace",
        "cargo test -p subentropy quantum::tests::partial_trace",
    ),
    claim(
        "Equal nonzero spectra of complementary subsystems",
        "quantum",
        "spectrum_of",
        "cargo test -p subentropy quantum::tests::gram_and_partial_trace_agree",
    ),
    claim(
        "Per-state von Neumann entropy",
        "quantum",
        "von_neumann",
        "subentropy mc --dims 2x2 --keep 0 --quantity entropy --samples 200000",
    ),
    claim(
        "Tsallis entropy of order q",
        "quantum",
        "tsallis",
        "subentropy mc --dims 2x4 --keep 0 --quantity tsallis --q 2",
    ),
    claim(
        "Rényi entropy of order q",
        "quantum",
        "renyi",
        "subentropy mc --dims 2x4 --keep 0 --quantity renyi --q 2",
    ),
    claim(
        "Per-state purity tr rho^2",
        "quantum",
        "purity",
        "subentropy mc --dims 3x5 --keep 0 --quantity purity",
    ),
    claim(
        "Per-state tangle 2(1 - tr rho^2)",
        "quantum",
        "tangle",
        "subentropy mc --dims 2x2 --keep 0 --quantity tangle",
    ),
    claim(
        "Per-state concurrence",
        "quantum",
        "concurrence",
        "subentropy mc --dims 2x3 --keep 0 --quantity concurrence",
    ),
    claim(
        "Pure-state negativity ((tr sqrt rho)^2 - 1)/2",
        "quantum",
        "pure_state_negativity",
        "subentropy mc --dims 2x3 --keep 0 --quantity negativity",
    ),
    claim(
        "Per-state mutual information S_A + S_B - S_AB",
        "quantum",
        "mutual_info",
        "subentropy mc --dims 2x2x4 --a 0 --b 1 --quantity mutual-info",
    ),
    claim(
        "Monte Carlo averages agree with the closed forms",
        "verify",
        "check_mc_agreement",
        "subentropy verify --check mc",
    ),
];

/// Every implemented claim, in presentation order.
pub fn claims_ledger() -> &'static [Claim] {
    CLAIMS
}

/// The ledger as a Markdown table.
pub fn claims_markdown() -> String {
    let mut out = String::from("| claim | module | operation | command |\n|---|---|---|---|\n");
    for c in CLAIMS {
        out.push_str(&format!(
            "| {} | {} | `{}` | `{}` |\n",
            c.claim, c.module, c.operation, c.command
        ));
    }
    out
}
