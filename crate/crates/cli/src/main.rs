use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;

use error::CliError;

/// Conditionals as events: Bayesian extensions of finite Boolean algebras.
#[derive(Parser, Debug)]
#[command(name = "condalg", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Refuse extension steps that would produce more atoms than this.
    #[arg(long, global = true, value_name = "N")]
    pub max_atoms: Option<usize>,
    /// Field for probabilities. Without it, rationals are used when the
    /// distribution is strictly positive and the infinitesimal field otherwise.
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldChoice>,
    /// Valuations tried by `dbl search`.
    #[arg(long, global = true, value_name = "N", default_value_t = 20_000)]
    pub budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Eps,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Start a tower from an algebra file (`{"atoms": ["a", "c", "d"]}`).
    Build {
        algebra: PathBuf,
        /// Write the tower here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Add one extension step conditioned on an element.
    Extend {
        tower: PathBuf,
        element: String,
        /// Write the tower here instead of updating it in place.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the conditional `[x]y` and the stage it lives at.
    Cond {
        tower: PathBuf,
        x: String,
        y: String,
        /// Keep any stages the conditional needed.
        #[arg(long)]
        save: bool,
    },
    /// Probability of an element or conditional expression, e.g. `[{a,c}]{a}`.
    Prob { tower: PathBuf, dist: PathBuf, expr: String },
    /// Check the Bayesian laws and the conditional probability law at the
    /// latest stage.
    Verify { tower: PathBuf, dist: PathBuf },
    /// Look for an element of the algebra itself that behaves like `[x]y`
    /// under every given distribution, then show the extension's answer.
    Lewis {
        algebra: PathBuf,
        x: String,
        y: String,
        #[arg(required = true)]
        dists: Vec<PathBuf>,
    },
    /// Evaluate, refute or check propositions of the logic of conditionals.
    #[command(subcommand)]
    Dbl(DblCommand),
    /// `n` gives the pair `i j` with index n; `i j` gives the index.
    Pairing {
        #[arg(required = true, num_args = 1..=2)]
        numbers: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum DblCommand {
    /// Evaluate a proposition in a tower.
    Eval {
        tower: PathBuf,
        prop: String,
        /// `name=element`, repeatable.
        #[arg(short, long = "bind")]
        bindings: Vec<String>,
        #[arg(long)]
        save: bool,
    },
    /// Search small towers for a valuation falsifying a sequent.
    Search { sequent: String },
    /// Check derivation files.
    Check {
        files: Vec<PathBuf>,
        /// Check the built-in scripts as well.
        #[arg(long)]
        corpus: bool,
        /// Also test every rule application on random valuations.
        #[arg(long)]
        soundness: bool,
    },
}

/// What a command produced.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    /// False when a check ran and failed.
    pub ok: bool,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let o = &cli.opts;
    match cli.command {
        Command::Build { algebra, out } => commands::build(o, &algebra, out.as_deref()),
        Command::Extend { tower, element, out } => commands::extend(o, &tower, &element, out.as_deref()),
        Command::Cond { tower, x, y, save } => commands::cond(o, &tower, &x, &y, save),
        Command::Prob { tower, dist, expr } => commands::prob(o, &tower, &dist, &expr),
        Command::Verify { tower, dist } => commands::verify(o, &tower, &dist),
        Command::Lewis { algebra, x, y, dists } => commands::lewis(o, &algebra, &x, &y, &dists),
        Command::Dbl(DblCommand::Eval { tower, prop, bindings, save }) => {
            commands::dbl_eval(o, &tower, &prop, &bindings, save)
        }
        Command::Dbl(DblCommand::Search { sequent }) => commands::dbl_search(o, &sequent),
        Command::Dbl(DblCommand::Check { files, corpus, soundness }) => {
            commands::dbl_check(o, &files, corpus, soundness)
        }
        Command::Pairing { numbers } => commands::pairing(&numbers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.opts.format;
    match run(cli) {
        Ok(report) => {
            let out = match format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).unwrap() + "\n",
            };
            // a closed pipe (`condalg ... | head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
