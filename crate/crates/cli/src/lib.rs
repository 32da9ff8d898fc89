//! Library side of the `cjrelay` tool: scenario files, sweeps, CSV output
//! and the Monte Carlo report.

pub mod config;
pub mod csv;
pub mod scenario;

use std::io;

use thiserror::Error;
use untrusted_relay::bounds::optimal_rho;
use untrusted_relay::verify::{verify_cf_terms, verify_genie_term, McConfig, MiReport};
use untrusted_relay::TimeShare;

pub use config::{parse_config, preset, ConfigError, ScenarioSpec, PRESETS};
pub use csv::{emit_csv, format_sig, read_csv};
pub use scenario::{run_scenario, SweepRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] untrusted_relay::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("{0} verification term(s) failed")]
    VerificationFailed(usize),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// 1 configuration, 2 numerical or domain, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        use untrusted_relay::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Core(E::InsufficientSamples { .. } | E::InvalidConfig(_)) => 1,
            CliError::Core(_) => 2,
            CliError::VerificationFailed(_) => 3,
        }
    }
}

/// Operating points for the `verify` subcommand. Powers are linear phase powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyPoint {
    pub p1_prime: f64,
    pub p2: f64,
    pub pr: f64,
    pub alpha: f64,
    /// Point for the correlated-noise bound term, evaluated at its optimal `ρ`.
    pub genie_p1: f64,
    pub genie_p2: f64,
}

impl Default for VerifyPoint {
    fn default() -> Self {
        Self { p1_prime: 3.0, p2: 3.0, pr: 3.0, alpha: 0.5, genie_p1: 1.0, genie_p2: 1.0 }
    }
}

pub fn run_verify(point: &VerifyPoint, cfg: McConfig) -> Result<Vec<MiReport>> {
    cfg.validate_statistical()?;
    let alpha = TimeShare::new(point.alpha)?;
    let mut reports = verify_cf_terms(cfg, point.p1_prime, point.p2, point.pr, alpha)?;
    let rho = optimal_rho(point.genie_p1, point.genie_p2)?.rho;
    reports.push(verify_genie_term(point.genie_p1, point.genie_p2, rho, cfg)?);
    Ok(reports)
}

/// One `term closed_form estimate std_err pass|fail` line per report.
pub fn format_reports(reports: &[MiReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            r.term.label(),
            format_sig(r.closed_form),
            format_sig(r.estimate),
            format_sig(r.std_err),
            if r.passes() { "pass" } else { "fail" }
        ));
    }
    out
}
