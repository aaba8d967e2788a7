use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use woo::benchmarks::SamplingScheme;
use woo::cli::{
    cmd_indicator, cmd_list_problems, cmd_reference, cmd_run, cmd_validate, CliError,
    ExperimentConfig, ValidateOptions,
};

#[derive(Parser)]
#[command(
    name = "woo",
    version,
    about = "Weighted optimistic optimization for multi-objective problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check both indicator bounds at every iteration on a set of instances.
    Validate {
        /// Synthetic labels a–h or problem names, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "a,b,c,d,e,f,g,h")]
        instances: Vec<String>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value = "results/validate")]
        out: PathBuf,
        #[arg(long)]
        parallel: Option<usize>,
        /// Base config; its `problem` key is ignored.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the additive ε-indicator I(A, B) of two point-set files.
    Indicator { a: PathBuf, b: PathBuf },
    /// Sample a reference set for a problem.
    Reference {
        problem: String,
        #[arg(long, default_value = "grid")]
        scheme: String,
        #[arg(long, default_value_t = 500_000)]
        budget: usize,
        #[arg(long, default_value = "results/reference")]
        out: PathBuf,
    },
    /// List the registered problems.
    ListProblems,
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            budget,
        } => cmd_run(&config, out.as_deref(), budget, stdout).map(|_| ()),
        Command::Validate {
            instances,
            budget,
            out,
            parallel,
            config,
        } => {
            let base = match config {
                Some(path) => ExperimentConfig::from_file(&path)?,
                None => ExperimentConfig::default(),
            };
            let opts = ValidateOptions {
                instances,
                budget,
                out,
                parallel,
                base,
            };
            cmd_validate(&opts, stdout).map(|_| ())
        }
        Command::Indicator { a, b } => cmd_indicator(&a, &b, stdout).map(|_| ()),
        Command::Reference {
            problem,
            scheme,
            budget,
            out,
        } => {
            let scheme = SamplingScheme::parse(&scheme)?;
            cmd_reference(&problem, scheme, budget, &out, stdout).map(|_| ())
        }
        Command::ListProblems => cmd_list_problems(stdout),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match dispatch(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
