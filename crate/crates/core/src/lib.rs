//! Query expansion over a knowledge graph of articles, redirects and links.
//!
//! A keyword query (and an optional natural-language context) is enriched
//! in two ways:
//!
//! * lexically, by swapping query terms for redirect synonyms and keeping
//!   the resulting phrases that occur verbatim in the document collection;
//! * topologically, by linking query-side and context-side articles with
//!   shortest paths, growing WCC communities around the best paths and
//!   weighting community articles by their distance from the query terms.
//!
//! The pieces are combined into a weighted structured query
//! ([`query::StructuredQuery`]) rendered for an Indri-style engine.

pub mod config;
pub mod corpus;
pub mod graph;
pub mod lexical;
pub mod pipeline;
pub mod query;
pub mod store;
pub mod text;
pub mod topology;
pub mod wcc;
pub mod weighted;

pub use config::PipelineConfig;
pub use corpus::CorpusIndex;
pub use graph::{ArticleId, KnowledgeGraph};
pub use pipeline::{Expander, Expansion};
pub use query::{StructuredQuery, WeightVector};
pub use text::{Phrase, Term};
pub use weighted::{WeightedPhrase, WeightedQuery};
