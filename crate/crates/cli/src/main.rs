use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relay_cli::config::{AlphaSetting, JammerPolicy, RelaySetting, ScenarioSpec};
use relay_cli::scenario::evaluate_point;
use relay_cli::{emit_csv, format_reports, format_sig, parse_config, preset, run_scenario, run_verify};
use relay_cli::{CliError, VerifyPoint, PRESETS};
use untrusted_relay::verify::McConfig;

/// Secrecy rates and upper bounds for the Gaussian two-hop channel with an
/// untrusted relay and a cooperative jammer.
#[derive(Parser)]
#[command(name = "cjrelay", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Scenario file (`key = value` lines) for `sweep`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo blocks for `verify`.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Achievable secrecy rate at one operating point.
    Rate(PointArgs),
    /// Upper bounds at one operating point.
    Bound(PointArgs),
    /// Sweep a scenario over source power and write CSV.
    Sweep(SweepArgs),
    /// Monte Carlo check of the closed-form information terms.
    Verify(VerifyArgs),
    /// List the built-in scenarios.
    Presets {
        /// Print this preset in config-file form.
        name: Option<String>,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Source power budget, dB.
    #[arg(long, allow_hyphen_values = true)]
    p1_db: f64,
    /// Jammer power budget, dB (`-inf` for none).
    #[arg(long, allow_hyphen_values = true)]
    p2_db: f64,
    /// Relay power budget, dB or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    pr_db: String,
    /// Time share, or `opt`.
    #[arg(long, default_value = "opt")]
    alpha: String,
    #[arg(long)]
    power_control: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in scenario (fig6..fig11); alternative to --config.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Use a finite relay power of this many dB in place of `inf`.
    #[arg(long, allow_hyphen_values = true)]
    proxy_db: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3.0)]
    p1: f64,
    #[arg(long, default_value_t = 3.0)]
    p2: f64,
    #[arg(long, default_value_t = 3.0)]
    pr: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Phase-one uses per block.
    #[arg(long, default_value_t = 1)]
    n_prime: usize,
    /// Phase-two uses per block.
    #[arg(long, default_value_t = 1)]
    m_prime: usize,
    #[arg(long, default_value_t = 1.0)]
    genie_p1: f64,
    #[arg(long, default_value_t = 1.0)]
    genie_p2: f64,
}

fn point_spec(a: &PointArgs) -> relay_cli::Result<ScenarioSpec> {
    // reuse the config parser so flags and files share validation
    let text = format!(
        "relay_power_db = {}\njammer_mode = fixed\njammer_power_db = {}\nalpha = {}\npower_control = {}\n\
         p1_db_start = {}\np1_db_stop = {}\np1_db_step = 1",
        a.pr_db,
        a.p2_db,
        a.alpha,
        if a.power_control { "on" } else { "off" },
        a.p1_db,
        a.p1_db,
    );
    Ok(parse_config(&text)?)
}

fn sweep_spec(cli: &Cli, args: &SweepArgs) -> relay_cli::Result<ScenarioSpec> {
    let spec = match (&args.preset, &cli.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            parse_config(&text)?
        }
        (None, None) => return Err(CliError::Config(relay_cli::ConfigError::Missing("--preset or --config"))),
    };
    Ok(match args.proxy_db {
        Some(db) => spec.with_proxy_relay(db),
        None => spec,
    })
}

fn describe(spec: &ScenarioSpec) -> String {
    let relay = match spec.relay {
        RelaySetting::Infinite => "inf".to_string(),
        RelaySetting::Finite { db } => format!("{db} dB"),
    };
    let jammer = match spec.jammer {
        JammerPolicy::Proportional { ratio } => format!("{ratio} x source"),
        JammerPolicy::Fixed { db } => format!("{db} dB"),
    };
    let alpha = match spec.alpha {
        AlphaSetting::Optimize => "opt".to_string(),
        AlphaSetting::Fixed(a) => a.to_string(),
    };
    format!(
        "relay={relay} jammer={jammer} alpha={alpha} power_control={}",
        if spec.power_control { "on" } else { "off" }
    )
}

fn run(cli: &Cli) -> relay_cli::Result<String> {
    match &cli.cmd {
        Command::Rate(a) => {
            let spec = point_spec(a)?;
            let r = evaluate_point(&spec, a.p1_db)?;
            Ok(format!(
                "achievable,alpha_star,p1_star,sigma_c2\n{},{},{},{}\n",
                format_sig(r.achievable),
                format_sig(r.alpha_star),
                format_sig(r.p1_star),
                format_sig(r.sigma_c2)
            ))
        }
        Command::Bound(a) => {
            let spec = point_spec(a)?;
            let r = evaluate_point(&spec, a.p1_db)?;
            let cols = [r.upper_new, r.upper_gepi, r.upper_trivial, r.cutset, r.rho_star];
            let vals: Vec<String> = cols.iter().map(|&v| format_sig(v)).collect();
            Ok(format!("upper_new,upper_gepi,upper_trivial,cutset,rho_star\n{}\n", vals.join(",")))
        }
        Command::Sweep(args) => {
            let rows = run_scenario(&sweep_spec(cli, args)?)?;
            let mut buf = Vec::new();
            emit_csv(&rows, &mut buf).map_err(|e| CliError::io("csv", e))?;
            Ok(String::from_utf8(buf).expect("csv is ascii"))
        }
        Command::Verify(a) => {
            let cfg = McConfig { n_prime: a.n_prime, m_prime: a.m_prime, samples: cli.samples, seed: cli.seed };
            let point = VerifyPoint {
                p1_prime: a.p1,
                p2: a.p2,
                pr: a.pr,
                alpha: a.alpha,
                genie_p1: a.genie_p1,
                genie_p2: a.genie_p2,
            };
            let reports = run_verify(&point, cfg)?;
            let text = format_reports(&reports);
            let failed = reports.iter().filter(|r| !r.passes()).count();
            if failed > 0 {
                write_output(cli.out.as_deref(), &text)?;
                return Err(CliError::VerificationFailed(failed));
            }
            Ok(text)
        }
        Command::Presets { name: Some(name) } => Ok(format!("{}\n", preset(name)?)),
        Command::Presets { name: None } => {
            let mut s = String::new();
            for p in &PRESETS {
                s.push_str(&format!("{:<6} {}\n", p.name, describe(&p.spec())));
            }
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> relay_cli::Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are configuration errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli).and_then(|text| write_output(cli.out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cjrelay: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
