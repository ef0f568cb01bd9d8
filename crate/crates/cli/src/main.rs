use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cfdtm::oracle::ExampleId;
use cfdtm_cli::commands;

#[derive(Parser)]
#[command(name = "cfdtm", version, about = "Series solutions of conformable fractional ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print its coefficients and solution CSV.
    Solve {
        file: PathBuf,
        /// Write the solution CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the built-in reference problems and report pass/fail.
    Examples {
        /// Run a single problem, e.g. example3.
        #[arg(long)]
        only: Option<ExampleId>,
    },
    /// Write the exact-versus-series comparison CSVs for alpha = 0.9 .. 0.6.
    Figure1 {
        #[arg(long)]
        out: PathBuf,
    },
    /// Print transform coefficients of a source term such as "exp(2*t^a/a)".
    Transform {
        spec: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match cli.command {
        Command::Solve { file, csv } => commands::run_solve(&file, csv.as_deref(), &mut out, &mut err),
        Command::Examples { only } => commands::run_examples(only, &mut out, &mut err),
        Command::Figure1 { out: dir } => commands::run_figure1(&dir, &mut out, &mut err),
        Command::Transform { spec, alpha, t0, terms } => {
            commands::run_transform(&spec, alpha, t0, terms, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
