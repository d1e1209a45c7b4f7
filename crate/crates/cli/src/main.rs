use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fluxquant_cli::{constants_listing, execute, materials_listing, Kind, Overrides};

#[derive(Parser)]
#[command(name = "fluxquant", version, about = "Run fluxquant model scenarios")]
struct Cli {
    /// Print the built-in material catalog and exit.
    #[arg(long)]
    list_materials: bool,
    /// Print the physical constants in use and exit.
    #[arg(long)]
    print_constants: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct Common {
    /// Scenario file; repeat to run several.
    #[arg(long = "config", value_name = "PATH")]
    configs: Vec<PathBuf>,
    /// Output directory (one subdirectory per scenario when several run).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed overriding the scenario's own.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Scenarios run concurrently.
    #[arg(long, value_name = "N", default_value_t = 1,
          value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Subcommand)]
enum Command {
    /// Field and current profile across a slab.
    Slab(Common),
    /// Flux-trap amplification sequence.
    Device(Common),
    /// NIS current-voltage sweep and scattering tables.
    Junction(Common),
    /// Flicker-noise synthesis and spectrum.
    Noise(Common),
    /// Delta-sigma loop simulation.
    Modulator(Common),
    /// Comparator transfer curve.
    Comparator(Common),
    /// Run scenario files of any kind.
    Run {
        #[arg(value_name = "PATH", required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_materials || cli.print_constants {
        if cli.list_materials {
            print!("{}", materials_listing());
        }
        if cli.print_constants {
            print!("{}", constants_listing());
        }
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required; see --help");
        return ExitCode::from(2);
    };
    let (kind, mut common, files) = match command {
        Command::Slab(c) => (Some(Kind::SlabProfile), c, Vec::new()),
        Command::Device(c) => (Some(Kind::DeviceSequence), c, Vec::new()),
        Command::Junction(c) => (Some(Kind::JunctionIv), c, Vec::new()),
        Command::Noise(c) => (Some(Kind::NoisePsd), c, Vec::new()),
        Command::Modulator(c) => (Some(Kind::ModulatorRun), c, Vec::new()),
        Command::Comparator(c) => (Some(Kind::ComparatorCurve), c, Vec::new()),
        Command::Run { files, common } => (None, common, files),
    };
    let mut configs = files;
    configs.append(&mut common.configs);
    let overrides = Overrides {
        seed: common.seed,
        out: common.out,
    };
    let mut status = ExitCode::SUCCESS;
    let mut failed = false;
    for outcome in execute(&configs, kind, &overrides, usize::from(common.jobs)) {
        match outcome.result {
            Ok(files) => {
                let dir = files
                    .first()
                    .and_then(|f| f.parent())
                    .map(|d| d.display().to_string())
                    .unwrap_or_default();
                println!("{}: wrote {} files to {dir}", outcome.source, files.len());
            }
            Err(e) => {
                eprintln!("error: {}: {e}", outcome.source);
                if !failed {
                    status = ExitCode::from(e.exit_code());
                    failed = true;
                }
            }
        }
    }
    status
}
