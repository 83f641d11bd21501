use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serialscat_cli::{bands, output, poles, sweep, CliError, Config, Format};

#[derive(Parser)]
#[command(name = "serialscat", version, about = "Transmission sweeps for serial arrays of scatterers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// key = value configuration file
    #[arg(long)]
    config: PathBuf,
    /// write here instead of the config's `output` (or stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// |t|², |r|² over the k grid (and optional parameter axis)
    Sweep(Common),
    /// allowed-band intervals, or a band map over the axis
    Bands(Common),
    /// resonance poles of a comb array
    Poles(Common),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (Cmd::Sweep(a) | Cmd::Bands(a) | Cmd::Poles(a)) = &cli.cmd;
    let text = std::fs::read_to_string(&a.config).map_err(|e| CliError::Io(format!("{}: {e}", a.config.display())))?;
    let c = Config::parse(&text)?;
    let table = match cli.cmd {
        Cmd::Sweep(_) => sweep(&c, a.threads)?,
        Cmd::Bands(_) => bands(&c, a.threads)?,
        Cmd::Poles(_) => poles(&c, a.threads)?,
    };
    let path = a.out.clone().or(c.output.clone());
    output::emit(&table.render(a.format.unwrap_or(c.format)), path.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("serialscat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
