use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isac_cli::{run, CliError, Command, Preset, RunConfig};
use isac_core::numerics::MAX_ORDER;

#[derive(Parser)]
#[command(name = "isac", version, about = "Rate, distortion and allocation under a learning-capacity budget")]
struct Cli {
    /// TOML configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RNG seed (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Gauss-Laguerre order for fading averages
    #[arg(long = "quadrature-order", global = true)]
    quadrature_order: Option<usize>,

    /// Absolute scale of the default scenario
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Rate and distortion versus budget for AWGN, Rayleigh and Rician links
    GaussianSweep,
    /// Joint power-split frontier and time-sharing baseline per budget
    Frontier,
    /// MIMO rate over a budget x SNR grid
    MimoSurface,
    /// Projected-gradient power split with its iterate trace
    Allocate,
    /// Run the property suite; exit 1 if any check fails
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::GaussianSweep => Command::GaussianSweep,
            Cmd::Frontier => Command::Frontier,
            Cmd::MimoSurface => Command::MimoSurface,
            Cmd::Allocate => Command::Allocate,
            Cmd::Verify => Command::Verify,
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), cli.preset)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(m) = cli.quadrature_order {
        if m == 0 || m > MAX_ORDER {
            return Err(CliError::Config {
                line: 0,
                field: "--quadrature-order".into(),
                message: format!("must lie in 1..={MAX_ORDER}"),
            });
        }
        cfg.quadrature_order = m;
    }
    let output = run(cli.command.into(), &cfg)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &output.text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(output.text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(CliError::Io(e.to_string())),
                _ => {}
            }
        }
    }
    Ok(output.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("isac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
