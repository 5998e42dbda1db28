//! N-gram index over the target document collection.
//!
//! The expander only needs to know whether a phrase occurs verbatim in at
//! least one document, so the index maps each contiguous token n-gram
//! (`1 <= n <= max_n`) to the number of documents containing it.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{tokenize, Phrase, Term};

pub const DEFAULT_MAX_NGRAM: usize = 6;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("corpus line {line}: duplicate doc_id {doc_id:?}")]
    DuplicateDocId { line: usize, doc_id: String },
    #[error("max n-gram size must be at least 2, got {0}")]
    InvalidMaxNgram(usize),
    #[error("phrase has {len} terms but the index only holds n-grams up to {max_n}")]
    PhraseTooLong { len: usize, max_n: usize },
    #[error("I/O error reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusIndex {
    documents: Vec<Document>,
    tokens: Vec<Vec<Term>>,
    ngrams: HashMap<String, u32>,
    max_n: usize,
}

fn ngram_key(terms: &[Term]) -> String {
    let mut key = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            key.push(' ');
        }
        key.push_str(t.as_str());
    }
    key
}

impl CorpusIndex {
    /// Reads a JSON-lines corpus (`{"doc_id": ..., "text": ...}` per line).
    pub fn build<R: Read>(source: R, max_n: usize) -> Result<CorpusIndex, CorpusError> {
        if max_n < 2 {
            return Err(CorpusError::InvalidMaxNgram(max_n));
        }
        let mut documents = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in BufReader::new(source).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            if !seen.insert(doc.doc_id.clone()) {
                return Err(CorpusError::DuplicateDocId {
                    line: i + 1,
                    doc_id: doc.doc_id,
                });
            }
            documents.push(doc);
        }
        CorpusIndex::from_documents(documents, max_n)
    }

    pub fn from_documents(documents: Vec<Document>, max_n: usize) -> Result<CorpusIndex, CorpusError> {
        if max_n < 2 {
            return Err(CorpusError::InvalidMaxNgram(max_n));
        }
        let tokens: Vec<Vec<Term>> = documents.iter().map(|d| tokenize(&d.text)).collect();
        let mut ngrams: HashMap<String, u32> = HashMap::new();
        let mut in_doc = HashSet::new();
        for doc in &tokens {
            in_doc.clear();
            for n in 1..=max_n.min(doc.len()) {
                for w in doc.windows(n) {
                    in_doc.insert(ngram_key(w));
                }
            }
            for key in in_doc.drain() {
                *ngrams.entry(key).or_insert(0) += 1;
            }
        }
        Ok(CorpusIndex {
            documents,
            tokens,
            ngrams,
            max_n,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn ngram_count(&self) -> usize {
        self.ngrams.len()
    }

    /// Number of documents containing `p` verbatim.
    pub fn document_frequency(&self, p: &Phrase) -> Result<u32, CorpusError> {
        if p.len() > self.max_n {
            return Err(CorpusError::PhraseTooLong {
                len: p.len(),
                max_n: self.max_n,
            });
        }
        Ok(self.ngrams.get(&ngram_key(p.terms())).copied().unwrap_or(0))
    }

    pub fn phrase_exists(&self, p: &Phrase) -> Result<bool, CorpusError> {
        self.document_frequency(p).map(|df| df > 0)
    }

    /// Like [`phrase_exists`](Self::phrase_exists), but phrases longer than
    /// the indexed n-gram size are checked against the token streams.
    pub fn occurs(&self, p: &Phrase) -> bool {
        match self.phrase_exists(p) {
            Ok(found) => found,
            Err(_) => self
                .tokens
                .iter()
                .any(|doc| doc.windows(p.len()).any(|w| w == p.terms())),
        }
    }

    /// Indexed n-grams with their document frequency, sorted by key.
    pub fn sorted_ngrams(&self) -> Vec<(&str, u32)> {
        let mut v: Vec<_> = self.ngrams.iter().map(|(k, &df)| (k.as_str(), df)).collect();
        v.sort_unstable();
        v
    }
}
