//! `qexpand`: build an index from a link graph and a caption corpus, then
//! expand keyword queries into weighted structured queries.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qexpand_core::corpus::DEFAULT_MAX_NGRAM;
use qexpand_core::topology::HierarchyContainment;

#[derive(Parser)]
#[command(name = "qexpand", version, about = "Knowledge-graph query expansion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the graph and corpus and write an index directory.
    Ingest(IngestArgs),
    /// Print the expanded query.
    Expand(ExpandArgs),
    /// Print every intermediate of an expansion as JSON.
    Explain(ExpandArgs),
    /// Expand a JSON-lines file of queries.
    Batch(BatchArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Article TSV: id, title, redirect target id or "-".
    #[arg(long)]
    nodes: PathBuf,
    /// Link TSV: source id, target id.
    #[arg(long)]
    edges: PathBuf,
    /// JSON lines with `doc_id` and `text`.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_NGRAM)]
    max_ngram: usize,
}

#[derive(Args, Clone)]
struct PipelineArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    max_hops: Option<usize>,
    /// General stopword list, one term per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Visual stopword list (colours, positions, shapes).
    #[arg(long)]
    visual_stopwords: Option<PathBuf>,
    #[arg(long, value_parser = parse_containment)]
    hierarchy_containment: Option<HierarchyContainment>,
    #[arg(long, value_enum, default_value_t = Format::Indri)]
    format: Format,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    query: String,
    #[arg(long)]
    context: Option<String>,
}

#[derive(Args)]
struct BatchArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// JSON lines with `id`, `query` and optional `context`.
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Indri,
    Json,
}

fn parse_containment(s: &str) -> Result<HierarchyContainment, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => commands::ingest(&a),
        Command::Expand(a) => commands::expand(&a),
        Command::Explain(a) => commands::explain(&a),
        Command::Batch(a) => commands::batch(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qexpand: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
