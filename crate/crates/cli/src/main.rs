//! `mfsinr`: SINR distributions and ergodic rates under matched-filter
//! precoding, as CSV.

mod commands;
mod config;
mod error;
mod grid;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_count, CommandKind, Overrides, PowerUnit, RunConfig};
use error::CliError;
use grid::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "mfsinr", version, about = "Exact and approximate SINR statistics under matched-filter precoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SINR CDF over a γ grid
    Cdf(RunArgs),
    /// SINR density over a γ grid
    Pdf(RunArgs),
    /// Outage probability at --gamma over a transmit-power grid
    Outage(RunArgs),
    /// Ergodic rate over a transmit-power grid
    Rate(RunArgs),
    /// Outage versus P_t for several array sizes
    Fig1(RunArgs),
    /// Convergence to the high-SNR and massive-array limits (two files)
    Fig2(RunArgs),
    /// Ergodic rate versus P_t: Monte Carlo and approximations
    Fig3(RunArgs),
    /// Run the invariant suite
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Number of base-station antennas (comma-separated list for figures)
    #[arg(long = "L", value_delimiter = ',')]
    antennas: Option<Vec<u32>>,
    /// Number of users
    #[arg(long = "K")]
    users: Option<u32>,
    /// Total transmit power (comma-separated list for fig2)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pt: Option<Vec<f64>>,
    /// Unit of --pt, --right-pt and power grids
    #[arg(long, value_enum)]
    pt_unit: Option<PowerUnit>,
    /// Noise power
    #[arg(long)]
    sigma2: Option<f64>,
    /// SINR threshold for outage
    #[arg(long)]
    gamma: Option<f64>,
    /// start:stop:points:{lin,log}
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Comma-separated method list
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Monte Carlo sample count
    #[arg(long, value_parser = parse_count)]
    samples: Option<usize>,
    /// Monte Carlo seed
    #[arg(long)]
    seed: Option<u64>,
    /// Panel budget of each inversion
    #[arg(long)]
    max_panels: Option<usize>,
    /// Report rates in bits/s/Hz
    #[arg(long)]
    bits: bool,
    /// fig2: array size of the transmit-power sweep
    #[arg(long = "left-L")]
    left_antennas: Option<u32>,
    /// fig2: transmit power of the array-size sweep
    #[arg(long, allow_negative_numbers = true)]
    right_pt: Option<f64>,
    /// key=value settings; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent; fig2 defaults to fig2.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the wrong square-root branch in the exact CDF (debugging aid)
    #[arg(long, hide = true)]
    flip_branch: bool,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Sample count of the DKW cross-check
    #[arg(long, value_parser = parse_count, default_value = "10000000")]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use the wrong square-root branch in the exact CDF (the suite must fail)
    #[arg(long, hide = true)]
    flip_branch: bool,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            antennas: self.antennas.clone(),
            users: self.users,
            pt: self.pt.clone(),
            pt_unit: self.pt_unit,
            sigma2: self.sigma2,
            gamma: self.gamma,
            grid: self.grid,
            methods: self.methods.clone(),
            samples: self.samples,
            seed: self.seed,
            max_panels: self.max_panels,
            bits: self.bits.then_some(true),
            left_antennas: self.left_antennas,
            right_pt: self.right_pt,
            flip_branch: self.flip_branch.then_some(true),
        }
    }
}

fn run_command(kind: CommandKind, args: &RunArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(kind, &file, &args.overrides())?;
    let produced = commands::run(&cfg)?;
    let default_out = (kind == CommandKind::Fig2).then(|| PathBuf::from("fig2.csv"));
    let out = args.out.clone().or(default_out);
    for (suffix, table) in &produced.tables {
        let path = match (suffix, &out) {
            (Some(s), Some(p)) => Some(output::with_suffix(p, s)),
            (None, p) => p.clone(),
            (Some(_), None) => None,
        };
        output::write_output(path.as_deref(), &table.render(&cfg))?;
        if let Some(p) = &path {
            eprintln!("wrote {}", p.display());
        }
    }
    if produced.failures > 0 {
        return Err(CliError::Numerical(format!(
            "{} grid point(s) failed; marked {} in the output",
            produced.failures,
            output::FAILURE_MARKER
        )));
    }
    Ok(())
}

fn run_selftest(args: &SelftestArgs) -> Result<(), CliError> {
    let spec = selftest::SelftestSpec {
        samples: args.samples,
        seed: args.seed,
        flip_branch: args.flip_branch,
    };
    let checks = selftest::run(&spec);
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        return Err(CliError::SelftestFailed { failed });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Cdf(a) => run_command(CommandKind::Cdf, a),
        Command::Pdf(a) => run_command(CommandKind::Pdf, a),
        Command::Outage(a) => run_command(CommandKind::Outage, a),
        Command::Rate(a) => run_command(CommandKind::Rate, a),
        Command::Fig1(a) => run_command(CommandKind::Fig1, a),
        Command::Fig2(a) => run_command(CommandKind::Fig2, a),
        Command::Fig3(a) => run_command(CommandKind::Fig3, a),
        Command::Selftest(a) => run_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mfsinr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

