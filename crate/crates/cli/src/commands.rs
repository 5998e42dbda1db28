use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use qexpand_core::corpus::{CorpusError, CorpusIndex};
use qexpand_core::graph::GraphError;
use qexpand_core::pipeline::ExpandError;
use qexpand_core::store::{self, StoreError};
use qexpand_core::text::StopwordSet;
use qexpand_core::{Expander, KnowledgeGraph, PipelineConfig, StructuredQuery, WeightVector};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::{BatchArgs, ExpandArgs, Format, IngestArgs, PipelineArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: io::Error },
    #[error(transparent)]
    Graph(GraphError),
    #[error(transparent)]
    Corpus(CorpusError),
    #[error(transparent)]
    Store(StoreError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. }
            | CliError::Graph(GraphError::Io { .. })
            | CliError::Corpus(CorpusError::Io(_))
            | CliError::Store(StoreError::Io { .. }) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |error| CliError::Io {
        path: path.to_path_buf(),
        error,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

pub fn ingest(a: &IngestArgs) -> Result<(), CliError> {
    let nodes = open(&a.nodes)?;
    let edges = open(&a.edges)?;
    let corpus = open(&a.corpus)?;
    let graph = KnowledgeGraph::load(nodes, edges).map_err(CliError::Graph)?;
    let corpus = CorpusIndex::build(corpus, a.max_ngram).map_err(CliError::Corpus)?;
    let manifest = store::save(&a.out, &graph, &corpus).map_err(CliError::Store)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&manifest).expect("manifest encodes")
    );
    Ok(())
}

fn stopwords(path: &Option<PathBuf>) -> Result<Option<StopwordSet>, CliError> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            Ok(Some(StopwordSet::from_list(&text)))
        }
        None => Ok(None),
    }
}

fn config(a: &PipelineArgs) -> Result<PipelineConfig, CliError> {
    let mut c = PipelineConfig::default();
    let d = WeightVector::DEFAULT;
    c.weights = WeightVector {
        alpha: a.alpha.unwrap_or(d.alpha),
        beta: a.beta.unwrap_or(d.beta),
        gamma: a.gamma.unwrap_or(d.gamma),
    };
    if let Some(h) = a.max_hops {
        c.max_hops = h;
    }
    if let Some(s) = stopwords(&a.stopwords)? {
        c.stopwords_general = s;
    }
    if let Some(s) = stopwords(&a.visual_stopwords)? {
        c.stopwords_visual = s;
    }
    if let Some(h) = a.hierarchy_containment {
        c.hierarchy_containment = h;
    }
    c.validate().map_err(ExpandError::from)?;
    Ok(c)
}

fn render(q: &StructuredQuery, format: Format) -> String {
    match format {
        Format::Indri => q.render_text(),
        Format::Json => q.render_json(),
    }
}

fn load_index(dir: &Path) -> Result<(KnowledgeGraph, CorpusIndex), CliError> {
    let (_, graph, corpus) = store::load(dir).map_err(CliError::Store)?;
    Ok((graph, corpus))
}

pub fn expand(a: &ExpandArgs) -> Result<(), CliError> {
    let config = config(&a.pipeline)?;
    let (graph, corpus) = load_index(&a.pipeline.index)?;
    let expander = Expander::new(&graph, &corpus, &config)?;
    let out = expander.expand(&a.query, a.context.as_deref())?;
    println!("{}", render(&out.query, a.pipeline.format));
    Ok(())
}

pub fn explain(a: &ExpandArgs) -> Result<(), CliError> {
    let config = config(&a.pipeline)?;
    let (graph, corpus) = load_index(&a.pipeline.index)?;
    let expander = Expander::new(&graph, &corpus, &config)?;
    let out = expander.expand(&a.query, a.context.as_deref())?;
    let report = json!({
        "diagnostics": out.diagnostics,
        "query": serde_json::to_value(&out.query).expect("query encodes"),
        "rendered": out.query.render_text(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report encodes")
    );
    Ok(())
}

#[derive(Deserialize)]
struct BatchRecord {
    id: Value,
    query: String,
    #[serde(default)]
    context: Option<String>,
}

fn batch_line(expander: &Expander<'_>, format: Format, line_no: usize, line: &str) -> String {
    let record: BatchRecord = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(e) => {
            let id = serde_json::from_str::<Value>(line)
                .ok()
                .and_then(|v| v.get("id").cloned())
                .unwrap_or(Value::Null);
            return json!({ "id": id, "line": line_no, "error": format!("malformed record: {e}") })
                .to_string();
        }
    };
    match expander.expand(&record.query, record.context.as_deref()) {
        Ok(out) => {
            let query = match format {
                Format::Indri => Value::String(out.query.render_text()),
                Format::Json => serde_json::to_value(&out.query).expect("query encodes"),
            };
            json!({ "id": record.id, "query": query }).to_string()
        }
        Err(e) => json!({ "id": record.id, "line": line_no, "error": e.to_string() }).to_string(),
    }
}

pub fn batch(a: &BatchArgs) -> Result<(), CliError> {
    let config = config(&a.pipeline)?;
    let input = fs::read_to_string(&a.queries).map_err(io_err(&a.queries))?;
    let (graph, corpus) = load_index(&a.pipeline.index)?;
    let expander = Expander::new(&graph, &corpus, &config)?;
    let lines: Vec<(usize, &str)> = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let outputs: Vec<String> = lines
        .par_iter()
        .map(|&(n, l)| batch_line(&expander, a.pipeline.format, n, l))
        .collect();
    let mut text = String::new();
    for o in outputs {
        text.push_str(&o);
        text.push('\n');
    }
    let mut file = File::create(&a.out).map_err(io_err(&a.out))?;
    file.write_all(text.as_bytes()).map_err(io_err(&a.out))?;
    Ok(())
}
