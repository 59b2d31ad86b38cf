//! `pddl-forge`: PDDL authoring from the command line.

mod commands;
mod config;
mod error;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;

/// Exit status: 0 success, 1 diagnostics or failed operation, 2 usage or
/// configuration error, 3 missing executable or unusable environment.
#[derive(Debug, Parser)]
#[command(name = "pddl-forge", version, about = "PDDL authoring toolkit")]
struct Cli {
    /// Configuration file (overrides $PDDL_FORGE_CONFIG and the default location).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a project directory with domain, problem and README skeletons.
    New(NewArgs),
    /// Report syntax diagnostics; exits 1 if there are any.
    Check(CheckArgs),
    /// Print a file with each token labelled by its scope.
    Highlight(HighlightArgs),
    /// Write the type hierarchy of a domain as DOT (and optionally PNG).
    Diagram(DiagramArgs),
    /// Add pairwise distances computed from coordinate fluents to a problem.
    Distance(DistanceArgs),
    /// Print a code template.
    Snippet(SnippetArgs),
    /// Run the configured planner on a domain and problem.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct NewArgs {
    /// Project name; must be a valid PDDL name.
    pub name: String,
    /// Directory to create the project in.
    #[arg(long, default_value = ".")]
    pub dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Print diagnostics as a JSON array on standard output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct HighlightArgs {
    pub path: PathBuf,
    /// `ansi` or `json`.
    #[arg(long, default_value = "ansi")]
    pub format: String,
    /// Print the source unchanged in ANSI mode.
    #[arg(long)]
    pub no_color: bool,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    pub path: PathBuf,
    /// DOT output file; defaults to the domain path with a `.dot` extension.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also render a PNG next to the DOT file.
    #[arg(long)]
    pub png: bool,
    /// Copy the domain into `domains/` beside it, stamped with the current time.
    #[arg(long)]
    pub snapshot: bool,
    /// TB, BT, LR or RL.
    #[arg(long, default_value = "TB")]
    pub rankdir: String,
    /// Leave out the implicit `object` root.
    #[arg(long)]
    pub no_root: bool,
    /// Show the number of predicates using each type.
    #[arg(long)]
    pub annotate: bool,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub path: PathBuf,
    /// Output file; defaults to `<name>-dist.pddl` beside the input.
    #[arg(short, long, conflicts_with = "in_place")]
    pub output: Option<PathBuf>,
    /// Replace the input file.
    #[arg(long)]
    pub in_place: bool,
    #[arg(long)]
    pub decimals: Option<u32>,
    /// Emit each pair once instead of in both orders.
    #[arg(long)]
    pub one_way: bool,
    /// Replace existing distance values.
    #[arg(long)]
    pub overwrite: bool,
    /// Only objects of this type.
    #[arg(long)]
    pub target_type: Option<String>,
    #[arg(long)]
    pub distance_function: Option<String>,
}

#[derive(Debug, Args)]
pub struct SnippetArgs {
    /// Snippet name.
    #[arg(required_unless_present = "list")]
    pub name: Option<String>,
    /// Placeholder values as KEY=VALUE.
    pub params: Vec<String>,
    /// List available snippets.
    #[arg(long, conflicts_with = "name")]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub domain: PathBuf,
    pub problem: PathBuf,
    /// Directory for planner output; defaults to the project's `solutions/`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Kill the planner after this many seconds.
    #[arg(long, value_name = "SECONDS")]
    pub timeout: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Config::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::New(a) => commands::new(&a, &cfg),
        Command::Check(a) => commands::check(&a),
        Command::Highlight(a) => commands::highlight(&a, &cfg),
        Command::Diagram(a) => commands::diagram(&a, &cfg),
        Command::Distance(a) => commands::distance(&a, &cfg),
        Command::Snippet(a) => commands::snippet(&a, &cfg),
        Command::Solve(a) => solve::solve(&a, &cfg),
    });
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("pddl-forge: {e}");
            e.status.into()
        }
    }
}
