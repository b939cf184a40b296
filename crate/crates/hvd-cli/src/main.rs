use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use hvd_cli::commands::{self, Command, Format};
use hvd_cli::formats::{PointSet, PointSetFile};
use hvd_cli::service::{self, AppState};
use hvd_cli::CliError;
use hvd_core::Model;

#[derive(Parser)]
#[command(
    name = "hvd",
    version,
    about = "Hyperbolic Voronoi diagrams, triangulations and enclosing balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Point-set JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output model: klein, poincare or halfplane.
    #[arg(long, default_value = "klein")]
    model: Model,
    /// Seed for randomized steps; recorded in scene metadata.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct FileArgs {
    #[command(flatten)]
    common: Common,
    /// json or svg.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hyperbolic Voronoi diagram.
    Diagram(FileArgs),
    /// Hyperbolic Delaunay triangulation.
    Delaunay(FileArgs),
    /// Smallest enclosing hyperbolic ball.
    Seb(FileArgs),
    /// HTTP query service.
    Serve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn load(path: &PathBuf) -> Result<PointSet, CliError> {
    let text = fs::read_to_string(path)?;
    PointSetFile::parse(&text)?.validate()
}

fn run_file(command: Command, args: &FileArgs) -> Result<(), CliError> {
    let set = load(&args.common.input)?;
    let out = commands::run(
        command,
        &set,
        args.common.model,
        args.format,
        args.common.seed,
    )?;
    match &args.output {
        Some(path) => fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Diagram(args) => run_file(Command::Diagram, &args),
        Cmd::Delaunay(args) => run_file(Command::Delaunay, &args),
        Cmd::Seb(args) => run_file(Command::Seb, &args),
        Cmd::Serve { common, port } => {
            let state = Arc::new(AppState::new(load(&common.input)?, common.seed)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(state, port))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
