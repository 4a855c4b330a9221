use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "tsets", version, about = "Check T-sets, sheaves and their laws over finite Heyting algebras")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate an algebra, T-set, relation or presheaf file (kind detected from its keys).
    Validate { file: PathBuf },
    /// List the atoms of a T-set with their real witnesses.
    Atoms { file: PathBuf },
    /// Complete a T-set or sheafify a presheaf.
    Sheafify {
        file: PathBuf,
        /// Where to write the completed structure (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the closed sieves making up the subobject classifier.
    Omega {
        algebra: PathBuf,
        /// Only this element.
        #[arg(short = 'p', long = "element")]
        element: Option<String>,
    },
    /// List every sieve with its covering and closure status.
    Sieves {
        algebra: PathBuf,
        #[arg(short = 'p', long = "element")]
        element: Option<String>,
    },
    /// Run the law suites over generated instance pools.
    Laws {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a worked counterexample.
    Counterexample {
        #[command(subcommand)]
        which: Counterexample,
    },
}

#[derive(Debug, Subcommand)]
enum Counterexample {
    /// Mediating maps into an exposing object are not unique; into the graph they are.
    Exposition {
        /// Number of global points of X.
        #[arg(long, default_value_t = 2)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Atoms { file } => commands::atoms(&file),
        Command::Sheafify { file, output } => commands::sheafify(&file, output.as_deref()),
        Command::Omega { algebra, element } => commands::omega(&algebra, element.as_deref()),
        Command::Sieves { algebra, element } => commands::sieves(&algebra, element.as_deref()),
        Command::Laws { config } => commands::laws(config.as_deref()),
        Command::Counterexample {
            which: Counterexample::Exposition { points },
        } => commands::exposition(points),
    };
    match outcome {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(o.render(cli.format).as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
