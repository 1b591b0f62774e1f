use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use suq11::coherent::MeasureKind;
use suq11::reps::RealizationKind;

use crate::CliError;

pub const DEFAULT_Q: [f64; 3] = [0.5, 0.9, 1.25];
pub const DEFAULT_K0: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const DEFAULT_L: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_DIM: usize = 32;
pub const DEFAULT_NMAX: usize = 10;
pub const DEFAULT_TOL_ALGEBRA: f64 = 1e-10;
pub const DEFAULT_TOL_UNITY: f64 = 1e-6;
pub const DEFAULT_TOL_QUAD: f64 = 1e-15;
/// Levels kept above `n_max` so that truncation never reaches checked entries.
pub const TRUNCATION_BUFFER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Which family of kind names a command accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindSet {
    Realizations,
    Measures,
}

impl KindSet {
    pub fn all(self) -> Vec<String> {
        match self {
            KindSet::Realizations => RealizationKind::ALL
                .iter()
                .map(|k| k.name().to_string())
                .collect(),
            KindSet::Measures => MeasureKind::ALL
                .iter()
                .map(|k| k.name().to_string())
                .collect(),
        }
    }

    fn knows(self, name: &str) -> bool {
        match self {
            KindSet::Realizations => RealizationKind::from_name(name).is_some(),
            KindSet::Measures => MeasureKind::from_name(name).is_some(),
        }
    }
}

/// Command-line flags shared by every subcommand. Flags override the
/// config file, which overrides the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Realization or measure names; repeatable or comma separated.
    #[arg(long = "kind", value_delimiter = ',')]
    pub kinds: Vec<String>,
    #[arg(long = "q")]
    pub q: Vec<f64>,
    #[arg(long = "k0")]
    pub k0: Vec<f64>,
    #[arg(long = "l")]
    pub l: Vec<f64>,
    /// Truncation dimension D.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Largest level n checked by the unity sweep.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub tol_algebra: Option<f64>,
    #[arg(long)]
    pub tol_unity: Option<f64>,
    /// Stopping tolerance of Jackson sums and series.
    #[arg(long)]
    pub tol_quad: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with any of the keys of the resolved configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Let open findings count as acknowledged rather than failing.
    #[arg(long)]
    pub allow_open_findings: bool,
    /// Omit the wall-time section so the whole file is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kinds: Option<Vec<String>>,
    q: Option<Vec<f64>>,
    k0: Option<Vec<f64>>,
    l: Option<Vec<f64>>,
    dim: Option<usize>,
    nmax: Option<usize>,
    tol_algebra: Option<f64>,
    tol_unity: Option<f64>,
    tol_quad: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    allow_open_findings: Option<bool>,
}

/// Resolved sweep configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kinds: Vec<String>,
    pub q: Vec<f64>,
    pub k0: Vec<f64>,
    pub l: Vec<f64>,
    pub dim: usize,
    pub n_max: usize,
    pub tol_algebra: f64,
    pub tol_unity: f64,
    pub tol_quad: f64,
    pub format: Format,
    pub allow_open_findings: bool,
}

/// Where the report goes and whether timing is attached. Not part of the
/// hashed payload.
#[derive(Debug, Clone, Default)]
pub struct OutputOptions {
    pub out: Option<PathBuf>,
    pub timing: bool,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn pick<T>(flag: Vec<T>, file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or(default)
    }
}

impl SweepConfig {
    pub fn resolve(
        args: &SweepArgs,
        set: KindSet,
    ) -> Result<(SweepConfig, OutputOptions), CliError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let cfg = SweepConfig {
            kinds: pick(args.kinds.clone(), file.kinds, set.all()),
            q: pick(args.q.clone(), file.q, DEFAULT_Q.to_vec()),
            k0: pick(args.k0.clone(), file.k0, DEFAULT_K0.to_vec()),
            l: pick(args.l.clone(), file.l, DEFAULT_L.to_vec()),
            dim: args.dim.or(file.dim).unwrap_or(DEFAULT_DIM),
            n_max: args.nmax.or(file.nmax).unwrap_or(DEFAULT_NMAX),
            tol_algebra: args
                .tol_algebra
                .or(file.tol_algebra)
                .unwrap_or(DEFAULT_TOL_ALGEBRA),
            tol_unity: args
                .tol_unity
                .or(file.tol_unity)
                .unwrap_or(DEFAULT_TOL_UNITY),
            tol_quad: args.tol_quad.or(file.tol_quad).unwrap_or(DEFAULT_TOL_QUAD),
            format: args.format.or(file.format).unwrap_or(Format::Json),
            allow_open_findings: args.allow_open_findings
                || file.allow_open_findings.unwrap_or(false),
        };
        cfg.validate(set)?;
        let out = OutputOptions {
            out: args.out.clone().or(file.out),
            timing: !args.no_timing,
        };
        Ok((cfg, out))
    }

    pub fn validate(&self, set: KindSet) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        for k in &self.kinds {
            if !set.knows(k) {
                return bad(format!(
                    "unknown kind '{k}'; expected one of {}",
                    set.all().join(", ")
                ));
            }
        }
        if self.kinds.is_empty() || self.q.is_empty() || self.k0.is_empty() || self.l.is_empty() {
            return bad("kind, q, k0 and l lists must be non-empty".into());
        }
        if let Some(q) = self.q.iter().find(|q| !(**q > 0.0) || !q.is_finite()) {
            return bad(format!("q must be positive and finite, got {q}"));
        }
        if let Some(k) = self.k0.iter().find(|k| !(**k > 0.0) || !k.is_finite()) {
            return bad(format!("k0 must be positive and finite, got {k}"));
        }
        if let Some(l) = self.l.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
            return bad(format!("l must be non-negative and finite, got {l}"));
        }
        if self.dim < self.n_max + TRUNCATION_BUFFER {
            return bad(format!(
                "dimension {} is below nmax + {TRUNCATION_BUFFER} = {}",
                self.dim,
                self.n_max + TRUNCATION_BUFFER
            ));
        }
        for (name, t) in [
            ("tol-algebra", self.tol_algebra),
            ("tol-unity", self.tol_unity),
            ("tol-quad", self.tol_quad),
        ] {
            if !(t > 0.0) || !t.is_finite() {
                return bad(format!("{name} must be positive, got {t}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let (cfg, out) =
            SweepConfig::resolve(&SweepArgs::default(), KindSet::Realizations).unwrap();
        assert_eq!(cfg.kinds.len(), RealizationKind::ALL.len());
        assert_eq!(cfg.dim, 32);
        assert!(out.timing && out.out.is_none());
    }

    #[test]
    fn truncation_buffer_enforced() {
        let args = SweepArgs {
            dim: Some(12),
            nmax: Some(10),
            ..Default::default()
        };
        assert!(matches!(
            SweepConfig::resolve(&args, KindSet::Measures),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn unknown_kind_rejected() {
        let args = SweepArgs {
            kinds: vec!["qliouville".into()],
            ..Default::default()
        };
        assert!(SweepConfig::resolve(&args, KindSet::Realizations).is_err());
        let args = SweepArgs {
            kinds: vec!["q_liouville".into()],
            ..Default::default()
        };
        assert!(SweepConfig::resolve(&args, KindSet::Measures).is_ok());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.toml");
        std::fs::write(&path, "q = [0.7]\ndim = 20\ntol_algebra = 1e-9\n").unwrap();
        let args = SweepArgs {
            config: Some(path),
            dim: Some(24),
            ..Default::default()
        };
        let (cfg, _) = SweepConfig::resolve(&args, KindSet::Realizations).unwrap();
        assert_eq!(cfg.q, vec![0.7]);
        assert_eq!(cfg.dim, 24);
        assert_eq!(cfg.tol_algebra, 1e-9);
    }

    #[test]
    fn file_typos_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.toml");
        std::fs::write(&path, "qs = [0.7]\n").unwrap();
        let args = SweepArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(matches!(
            SweepConfig::resolve(&args, KindSet::Realizations),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        let args = SweepArgs {
            tol_unity: Some(0.0),
            ..Default::default()
        };
        assert!(SweepConfig::resolve(&args, KindSet::Measures).is_err());
    }
}
