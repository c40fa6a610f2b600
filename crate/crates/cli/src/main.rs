//! `boxpp`: derive, evaluate and emit box splines from a direction-matrix file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "boxpp", version, about = "Exact piecewise-polynomial box splines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Direction-matrix JSON file.
    #[arg(long)]
    xi: PathBuf,
    /// Use the centered spline even if the file does not ask for it.
    #[arg(long)]
    centered: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Difference and Green's sets plus the region polynomial table.
    Derive {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate at points given with --point or one per line in --points.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Comma-separated point, e.g. `1/2,1/4`; repeatable.
        #[arg(long)]
        point: Vec<String>,
        /// File with one comma-separated point per line.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Print exact rationals instead of floats.
        #[arg(long)]
        exact: bool,
    },
    /// Emit a C evaluation function for the BSP tree.
    Codegen {
        #[command(flatten)]
        common: Common,
        /// Name of the emitted function.
        #[arg(long, default_value = "boxspline_eval")]
        name: String,
    },
    /// Sample the support's bounding box on a regular grid as CSV.
    Grid {
        #[command(flatten)]
        common: Common,
        /// Samples per axis (at least 2).
        #[arg(long, default_value_t = 33)]
        resolution: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive { common, format } => {
            commands::derive(&common.xi, common.centered, matches!(format, Format::Json)).and_then(|t| commands::emit(common.out.as_deref(), &t))
        }
        Command::Eval { common, point, points, exact } => commands::eval(&common.xi, common.centered, &point, points.as_deref(), exact)
            .and_then(|t| commands::emit(common.out.as_deref(), &t)),
        Command::Codegen { common, name } => {
            commands::codegen(&common.xi, common.centered, &name).and_then(|t| commands::emit(common.out.as_deref(), &t))
        }
        Command::Grid { common, resolution } => {
            commands::grid(&common.xi, common.centered, resolution).and_then(|t| commands::emit(common.out.as_deref(), &t))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
