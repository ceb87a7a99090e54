use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tubewave_cli::config::parse_range;
use tubewave_cli::{cmd_solve, cmd_sweep, cmd_verify, CliError, Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "tubewave",
    version,
    about = "Harmonic waves in an inhomogeneous viscoelastic tube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Angular frequency [rad/s].
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Frequency range START:STOP:N for sweeps.
    #[arg(long, value_parser = parse_range)]
    omega_range: Option<(f64, f64, usize)>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Neumann series tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Truncation point of the half-line [m].
    #[arg(long)]
    xmax: Option<f64>,
    /// Number of base panels before grading and splitting.
    #[arg(long)]
    grid: Option<usize>,
    /// Write SVG plots.
    #[arg(long, value_enum)]
    plots: Option<Switch>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve at one frequency and write fields.csv and summary.csv.
    Solve(Common),
    /// Solve over a frequency list and write dispersion.csv.
    Sweep(Common),
    /// Solve and check residual, oracle and golden-file gates.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Directory holding golden fields.csv and summary.csv.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

fn load(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&c.config)?;
    cfg.apply(&Overrides {
        omega: c.omega,
        omega_range: c.omega_range,
        out: c.out.clone(),
        tol: c.tol,
        x_max: c.xmax,
        panels: c.grid,
        plots: c.plots.map(|s| matches!(s, Switch::On)),
    });
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(c) => {
            let cfg = load(&c)?;
            let sol = cmd_solve(&cfg)?;
            println!(
                "delta = {:.10e}  terms = {}  max residual = {:.3e}  -> {}",
                sol.context.delta,
                sol.jost.n_terms,
                sol.fields.residuals.max(),
                cfg.output.dir.display()
            );
            Ok(0)
        }
        Command::Sweep(c) => {
            let cfg = load(&c)?;
            let report = cmd_sweep(&cfg)?;
            for r in &report.rows {
                println!("omega = {:.6e}  {}", r.omega, r.status);
            }
            Ok(report.exit_code)
        }
        Command::Verify { common, golden } => {
            let cfg = load(&common)?;
            let report = cmd_verify(&cfg, golden.as_deref())?;
            for g in &report.gates {
                println!("{g}");
            }
            Ok(if report.passed() { 0 } else { 4 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("tubewave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
