use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use suq11::coherent::CandidateOutcome;

use crate::config::SweepConfig;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The parameter combination lies outside what the construction covers.
    Unsupported,
    /// No candidate convention resolved the check; recorded, not hidden.
    OpenFinding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub q: Option<f64>,
    pub k0: Option<f64>,
    pub l: Option<f64>,
    pub dim: usize,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Residuals {
    pub q0_plus: f64,
    pub q0_minus: f64,
    pub plus_minus: f64,
    pub max: f64,
    pub valid_block: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CasimirRow {
    pub sector: String,
    pub value: f64,
    pub expected: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub id: usize,
    pub kind: String,
    pub parameters: Parameters,
    pub residuals: Option<Residuals>,
    pub casimir_spread: Option<f64>,
    pub casimir: Vec<CasimirRow>,
    pub unity_residuals: Vec<f64>,
    pub lattice: Option<String>,
    pub candidates: Vec<CandidateOutcome>,
    pub status: Status,
    pub diagnostic: Option<String>,
}

impl Record {
    pub fn new(kind: &str, parameters: Parameters) -> Self {
        Record {
            id: 0,
            kind: kind.to_string(),
            parameters,
            residuals: None,
            casimir_spread: None,
            casimir: Vec::new(),
            unity_residuals: Vec::new(),
            lattice: None,
            candidates: Vec::new(),
            status: Status::Fail,
            diagnostic: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
    pub open_findings: usize,
}

impl Summary {
    pub fn tally(records: &[Record]) -> Self {
        let mut s = Summary {
            total: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Unsupported => s.unsupported += 1,
                Status::OpenFinding => s.open_findings += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallTime {
    pub total_ms: f64,
    /// Indexed by record id.
    pub cases_ms: Vec<f64>,
}

/// A sweep report. Everything except `payload_sha256` and `wall_time` is
/// the payload, which is reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub config: SweepConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub payload_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<WallTime>,
}

#[derive(Serialize)]
struct PayloadRef<'a> {
    schema_version: u32,
    tool_version: &'a str,
    command: &'a str,
    config: &'a SweepConfig,
    records: &'a [Record],
    summary: &'a Summary,
}

impl Report {
    pub fn new(
        command: &str,
        config: SweepConfig,
        mut records: Vec<Record>,
        wall_time: Option<WallTime>,
    ) -> Self {
        for (i, r) in records.iter_mut().enumerate() {
            r.id = i;
        }
        let summary = Summary::tally(&records);
        let mut report = Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config,
            records,
            summary,
            payload_sha256: String::new(),
            wall_time,
        };
        report.payload_sha256 = report.compute_hash();
        report
    }

    /// Compact JSON of the payload.
    pub fn payload_bytes(&self) -> Vec<u8> {
        let p = PayloadRef {
            schema_version: self.schema_version,
            tool_version: &self.tool_version,
            command: &self.command,
            config: &self.config,
            records: &self.records,
            summary: &self.summary,
        };
        serde_json::to_vec(&p).expect("payload serializes")
    }

    pub fn compute_hash(&self) -> String {
        hex::encode(Sha256::digest(self.payload_bytes()))
    }

    /// Exit status: 0 when everything passed (open findings only with
    /// acknowledgment), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let open_ok = self.config.allow_open_findings || self.summary.open_findings == 0;
        if self.summary.failed == 0 && open_ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Flat projection: one row per record, or per Casimir sector when a
    /// record carries sector values.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "id",
            "command",
            "kind",
            "q",
            "k0",
            "l",
            "dim",
            "n_max",
            "status",
            "max_residual",
            "casimir_spread",
            "sector",
            "casimir_value",
            "casimir_expected",
            "unity_max_residual",
            "lattice",
            "diagnostic",
        ])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            let unity_max = r.unity_residuals.iter().copied().reduce(f64::max);
            let base = vec![
                r.id.to_string(),
                self.command.clone(),
                r.kind.clone(),
                opt(r.parameters.q),
                opt(r.parameters.k0),
                opt(r.parameters.l),
                r.parameters.dim.to_string(),
                r.parameters
                    .n_max
                    .map(|n| n.to_string())
                    .unwrap_or_default(),
                serde_json::to_value(r.status)
                    .expect("status")
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                opt(r.residuals.as_ref().map(|x| x.max)),
                opt(r.casimir_spread),
            ];
            let tail = vec![
                opt(unity_max),
                r.lattice.clone().unwrap_or_default(),
                r.diagnostic.clone().unwrap_or_default(),
            ];
            if r.casimir.is_empty() {
                let row: Vec<String> = base
                    .iter()
                    .cloned()
                    .chain(vec![String::new(); 3])
                    .chain(tail.clone())
                    .collect();
                w.write_record(&row)?;
            }
            for c in &r.casimir {
                let mid = vec![
                    c.sector.clone(),
                    c.value.to_string(),
                    c.expected.to_string(),
                ];
                let row: Vec<String> = base
                    .iter()
                    .cloned()
                    .chain(mid)
                    .chain(tail.clone())
                    .collect();
                w.write_record(&row)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Write via a temporary file in the target directory and rename it into
/// place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(contents)
        .map_err(|e| CliError::Io(e.to_string()))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::Io(e.to_string()))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
