//! Index directory: `manifest.json`, `graph.bin`, `corpus.bin`.
//!
//! The binary files are bincode-encoded snapshots. The manifest records the
//! format version and counts; loading refuses a version it does not know.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusIndex, Document};
use crate::graph::{EdgeRecord, GraphError, KnowledgeGraph, NodeRecord};

pub const FORMAT_NAME: &str = "qexpand-index";
pub const FORMAT_VERSION: u32 = 1;

const MANIFEST: &str = "manifest.json";
const GRAPH: &str = "graph.bin";
const CORPUS: &str = "corpus.bin";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {error}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        error: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("index format version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub format_version: u32,
    pub articles: usize,
    pub redirects: usize,
    pub edges: usize,
    pub documents: usize,
    pub ngrams: usize,
    pub max_ngram: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphSnapshot {
    nodes: Vec<(u64, String, Option<u64>)>,
    edges: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct CorpusSnapshot {
    max_n: usize,
    documents: Vec<Document>,
}

fn graph_snapshot(g: &KnowledgeGraph) -> GraphSnapshot {
    let nodes = g
        .articles()
        .iter()
        .map(|a| {
            let target = a.redirect_target.map(|t| g.article(t).key);
            (a.key, a.raw_title.clone(), target)
        })
        .collect();
    let mut edges = Vec::with_capacity(g.edge_count());
    for a in g.articles() {
        for &b in g.out_neighbors(a.id) {
            edges.push((a.key, g.article(b).key));
        }
    }
    GraphSnapshot { nodes, edges }
}

fn graph_from_snapshot(s: GraphSnapshot) -> Result<KnowledgeGraph, GraphError> {
    let nodes = s
        .nodes
        .into_iter()
        .enumerate()
        .map(|(i, (key, title, redirect_to))| NodeRecord {
            line: i + 1,
            key,
            title,
            redirect_to,
        })
        .collect();
    let edges = s
        .edges
        .into_iter()
        .enumerate()
        .map(|(i, (src, dst))| EdgeRecord {
            line: i + 1,
            src,
            dst,
        })
        .collect();
    KnowledgeGraph::from_records(nodes, edges)
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<(), StoreError> {
    fs::write(&path, bytes).map_err(|error| StoreError::Io { path, error })
}

fn read(path: PathBuf) -> Result<(PathBuf, Vec<u8>), StoreError> {
    match fs::read(&path) {
        Ok(bytes) => Ok((path, bytes)),
        Err(error) => Err(StoreError::Io { path, error }),
    }
}

pub fn save(dir: &Path, graph: &KnowledgeGraph, corpus: &CorpusIndex) -> Result<Manifest, StoreError> {
    fs::create_dir_all(dir).map_err(|error| StoreError::Io {
        path: dir.to_path_buf(),
        error,
    })?;
    let graph_bytes = bincode::serialize(&graph_snapshot(graph)).expect("snapshot encodes");
    let corpus_bytes = bincode::serialize(&CorpusSnapshot {
        max_n: corpus.max_n(),
        documents: corpus.documents().to_vec(),
    })
    .expect("snapshot encodes");
    let manifest = Manifest {
        format: FORMAT_NAME.to_string(),
        format_version: FORMAT_VERSION,
        articles: graph.article_count() - graph.redirect_count(),
        redirects: graph.redirect_count(),
        edges: graph.edge_count(),
        documents: corpus.documents().len(),
        ngrams: corpus.ngram_count(),
        max_ngram: corpus.max_n(),
    };
    write(dir.join(GRAPH), &graph_bytes)?;
    write(dir.join(CORPUS), &corpus_bytes)?;
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest encodes");
    text.push('\n');
    write(dir.join(MANIFEST), text.as_bytes())?;
    Ok(manifest)
}

pub fn load(dir: &Path) -> Result<(Manifest, KnowledgeGraph, CorpusIndex), StoreError> {
    let (path, bytes) = read(dir.join(MANIFEST))?;
    let manifest: Manifest = serde_json::from_slice(&bytes).map_err(|e| StoreError::Format {
        path: path.clone(),
        message: e.to_string(),
    })?;
    if manifest.format != FORMAT_NAME {
        return Err(StoreError::Format {
            path,
            message: format!("unexpected format {:?}", manifest.format),
        });
    }
    if manifest.format_version != FORMAT_VERSION {
        return Err(StoreError::Version {
            found: manifest.format_version,
            expected: FORMAT_VERSION,
        });
    }

    let (path, bytes) = read(dir.join(GRAPH))?;
    let snapshot: GraphSnapshot = bincode::deserialize(&bytes).map_err(|e| StoreError::Format {
        path,
        message: e.to_string(),
    })?;
    let graph = graph_from_snapshot(snapshot)?;

    let (path, bytes) = read(dir.join(CORPUS))?;
    let snapshot: CorpusSnapshot = bincode::deserialize(&bytes).map_err(|e| StoreError::Format {
        path,
        message: e.to_string(),
    })?;
    let corpus = CorpusIndex::from_documents(snapshot.documents, snapshot.max_n)?;
    Ok((manifest, graph, corpus))
}
