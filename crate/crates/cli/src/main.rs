//! Command-line front end for the link model: parameter sweeps of the
//! received-signal statistics, sampled noise spectra, the closed-form error
//! probability, and the numerical cross-validation suite.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mclink::config::{load_config, SystemConfig};
use mclink::oracles::{standard_suite, OracleReport};
use mclink::sweep::{emit, run_sweep, Cell, Format, Metric, SweepRow, SweepSpec, Table};

#[derive(Parser)]
#[command(
    name = "mclink",
    version,
    about = "Link-level model of a microfluidic molecular-communication channel \
             read out by a nanowire bioFET receiver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean received current and binding statistics versus release size
    Respond(SweepArgs),
    /// Sampled output-referred noise power spectral density
    Psd(PsdArgs),
    /// Output signal-to-noise ratio versus release size
    Snr(SweepArgs),
    /// Symbol error probability versus transmission distance
    Sep(SweepArgs),
    /// Cross-validate the closed forms against independent numerical oracles
    Validate(ValidateArgs),
    /// Print the active configuration as TOML
    ShowConfig(ShowConfigArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// TOML configuration file (built-in defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sweep specification `key:scale:lo:hi:n` (scale: linear|log)
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated metrics (mu_I, snr_db, sep, tau_B, p_on, rho_R,
    /// lambda_D, k_T, validity)
    #[arg(long)]
    metrics: Option<String>,
    /// Write the table to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct PsdArgs {
    /// TOML configuration file (built-in defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Frequency grid `f:scale:lo:hi:n` in Hz (the key must be `f`)
    #[arg(long)]
    sweep: Option<String>,
    /// Write the table to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct ValidateArgs {
    /// TOML configuration file (built-in defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the Monte Carlo oracles
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct ShowConfigArgs {
    /// TOML configuration file (built-in defaults when omitted)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the TOML to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Respond(args) => {
            sweep_command(args, "signal.n_m:log:1e4:1e7:25", "mu_I,rho_R,p_on")
        }
        Command::Snr(args) => sweep_command(args, "signal.n_m:log:1e4:1e7:25", "snr_db"),
        Command::Sep(args) => sweep_command(args, "channel.d:log:0.1:10:25", "sep"),
        Command::Psd(args) => psd_command(args),
        Command::Validate(args) => validate_command(args),
        Command::ShowConfig(args) => show_config_command(args),
    }
}

fn load(config: &Option<PathBuf>) -> anyhow::Result<SystemConfig> {
    match config {
        Some(path) => load_config(path).with_context(|| format!("loading {}", path.display())),
        None => Ok(SystemConfig::default()),
    }
}

fn write_text(text: &str, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn sweep_command(
    args: SweepArgs,
    default_sweep: &str,
    default_metrics: &str,
) -> anyhow::Result<ExitCode> {
    let cfg = load(&args.config)?;
    let spec = SweepSpec::from_str(args.sweep.as_deref().unwrap_or(default_sweep))?;
    let metrics = Metric::parse_list(args.metrics.as_deref().unwrap_or(default_metrics))?;
    let format = Format::from_str(&args.format)?;
    let table = run_sweep(&cfg, &spec, &metrics)?;
    emit(&table, format, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn psd_command(args: PsdArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(&args.config)?;
    let spec = SweepSpec::from_str(args.sweep.as_deref().unwrap_or("f:log:1e-3:1e5:81"))?;
    if spec.key != "f" {
        bail!("psd sweeps frequency only: use the key `f`, e.g. `f:log:1e-3:1e5:81`");
    }
    let format = Format::from_str(&args.format)?;
    let link = cfg.link()?;
    let stats = link.binding_stats(cfg.n_m);
    let validity = link.check_equilibrium(cfg.n_m).valid;
    let rows = spec
        .points()
        .into_iter()
        .map(|f| {
            let (s_ib, s_if, s_total) = link.noise_psd(&stats, f);
            SweepRow {
                value: f,
                cells: vec![Cell::Num(s_ib), Cell::Num(s_if), Cell::Num(s_total)],
                validity,
            }
        })
        .collect();
    let table = Table {
        param: "f".to_owned(),
        metrics: vec!["s_ib".to_owned(), "s_if".to_owned(), "s_i".to_owned()],
        rows,
    };
    emit(&table, format, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn validate_csv(reports: &[OracleReport]) -> String {
    let mut out = String::from("name,analytic,numeric,rel_err,tolerance,pass,budget,seed\n");
    for r in reports {
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{:.8e},{:.8e},{:.8e},{:.8e},{},{},{}\n",
            r.name, r.analytic, r.numeric, r.rel_err, r.tolerance, r.pass, r.budget, seed
        ));
    }
    out
}

fn validate_command(args: ValidateArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(&args.config)?;
    let format = Format::from_str(&args.format)?;
    let reports = standard_suite(&cfg, args.seed)?;
    let text = match format {
        Format::Csv => validate_csv(&reports),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&reports)?;
            text.push('\n');
            text
        }
    };
    write_text(&text, &args.out)?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        eprintln!("validate: all {} checks passed (seed {})", reports.len(), args.seed);
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "validate: {}/{} checks failed: {}",
            failed.len(),
            reports.len(),
            failed.join(", ")
        );
        Ok(ExitCode::FAILURE)
    }
}

fn show_config_command(args: ShowConfigArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(&args.config)?;
    write_text(&cfg.to_toml(), &args.out)?;
    Ok(ExitCode::SUCCESS)
}
