use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use schurdirac_cli::run::write_atomic;
use schurdirac_cli::{parse_config_for, run, Command, OutputFormat};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Validate,
    Solve,
    C2,
    Spectrum,
    HardySweep,
    Convergence,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Solve => Command::Solve,
            Cmd::C2 => Command::C2,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::HardySweep => Command::HardySweep,
            Cmd::Convergence => Command::Convergence,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Schur-complement positivity constants, solves and Dirac-Coulomb spectra.
///
/// Exit status: 0 on success, 2 when a hypothesis of the construction fails
/// (for example Hardy-type positivity at this coupling), 1 on any other error.
#[derive(Debug, Parser)]
#[command(name = "schurdirac", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,

    /// Configuration file of `key=value` lines.
    #[arg(long)]
    config: PathBuf,

    /// Report path; overrides `output.path`. Without either the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overrides `output.format`.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let mut cfg = match parse_config_for(&text, Some(args.command.into())) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    if let Some(out) = args.out {
        cfg.output_path = Some(out);
    }
    if let Some(f) = args.format {
        cfg.output_format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }

    let start = Instant::now();
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let wall = cfg.output_timing.then(|| start.elapsed().as_secs_f64());
    let text = outcome.report.render(&cfg, wall);
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    for v in &outcome.violations {
        eprintln!("hypothesis violated: {v}");
    }
    if outcome.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
