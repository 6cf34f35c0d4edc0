//! `annote-kb` command-line interface.
//!
//! Every invocation re-reads the kb file; nothing is cached between runs.
//! Concurrent writers to the same kb file need external locking.
//!
//! Exit codes: 0 success, 1 I/O or syntax error, 2 partial ingest,
//! 3 unresolved terms in strict `find`, 4 no explicitation candidates.

mod commands;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "annote-kb",
    version,
    about = "Annotation knowledge base: ingest, classify, explicate and search"
)]
struct Cli {
    /// Fact file holding the knowledge base.
    #[arg(long, global = true, value_name = "PATH")]
    kb: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Unresolved `find` terms empty the result (default).
    #[arg(long, global = true, overrides_with = "lenient")]
    strict: bool,

    /// Unresolved `find` terms are dropped with a warning.
    #[arg(long, global = true, overrides_with = "strict")]
    lenient: bool,

    /// Maximum number of explicitation candidates.
    #[arg(long, global = true, default_value = "16", value_name = "N")]
    cap: NonZeroUsize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Merge a fact file into the knowledge base.
    Ingest { file: PathBuf },
    /// Report each annotation as explicit or implicit.
    Classify,
    /// Propose explicit readings of an implicit annotation.
    Explicate { id: String },
    /// Run a classic boolean query.
    Query { expr: String },
    /// Search from bare terms, inferring their attributes.
    Find {
        #[arg(required = true)]
        terms: Vec<String>,
        /// Also print the rewrite with the stored value lists.
        #[arg(long = "show-paper-form")]
        show_value_lists: bool,
    },
    /// Follow annotation targets down to a document.
    Chain { id: String },
    /// Print the canonical fact file.
    Export,
    /// Summary counts.
    Stats,
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub kb_path: PathBuf,
    pub output_format: OutputFormat,
    pub strict: bool,
    pub cap: NonZeroUsize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(kb_path) = cli.kb else {
        eprintln!("error: no knowledge base given, pass --kb <PATH>");
        return ExitCode::from(1);
    };
    let config = CliConfig {
        kb_path,
        output_format: cli.format,
        strict: !cli.lenient,
        cap: cli.cap,
    };
    let outcome = match cli.command {
        Command::Ingest { file } => commands::ingest(&config, &file),
        Command::Classify => commands::classify(&config),
        Command::Explicate { id } => commands::explicate(&config, &id),
        Command::Query { expr } => commands::query(&config, &expr),
        Command::Find {
            terms,
            show_value_lists,
        } => commands::find(&config, &terms, show_value_lists),
        Command::Chain { id } => commands::chain(&config, &id),
        Command::Export => commands::export(&config),
        Command::Stats => commands::stats(&config),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
