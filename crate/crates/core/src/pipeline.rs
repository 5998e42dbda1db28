//! End-to-end expansion: stopword filtering, lexical and topological
//! expansion, combination.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, PipelineConfig};
use crate::corpus::CorpusIndex;
use crate::graph::{ArticleId, KnowledgeGraph};
use crate::lexical::{build_lexical_query, screen_synonyms, LexicalError, SynonymCheck, SynonymLattice};
use crate::query::{build_original_query, combine, QueryError, StructuredQuery};
use crate::text::{filter_terms, Phrase, Term};
use crate::topology::{
    build_hierarchy, build_topological_query, compute_paths, grow_community, score_community,
    select_relevant, select_relevant_lattice, top_communities, top_paths, ConceptPath, GrowthEvent,
    Hierarchy, Origin, RelevantSet,
};
use crate::wcc::Community;
use crate::weighted::WeightedQuery;

#[derive(Debug, Error, PartialEq)]
pub enum ExpandError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Lexical(#[from] LexicalError),
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
}

pub struct Expander<'a> {
    graph: &'a KnowledgeGraph,
    corpus: &'a CorpusIndex,
    config: &'a PipelineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub query: StructuredQuery,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelevantSummary {
    pub size: usize,
    pub matched: usize,
    pub truncated: bool,
    pub articles: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSummary {
    pub articles: Vec<String>,
    pub score: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEntry {
    Accepted {
        round: usize,
        article: String,
        objective_before: f64,
        objective_after: f64,
    },
    Removed {
        round: usize,
        article: String,
        wcc: f64,
        threshold: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunitySummary {
    pub seed_path: Vec<String>,
    pub members: Vec<String>,
    pub score: u64,
    pub kept: bool,
    pub rounds: usize,
    pub final_wcc: f64,
    pub cap_hit: bool,
    pub fell_back: bool,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchySummary {
    pub terms: Vec<Term>,
    pub levels: Vec<Vec<String>>,
    pub depth: usize,
}

/// Every intermediate of one expansion, for inspection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub query: Phrase,
    pub context: Phrase,
    pub context_defaulted: bool,
    pub synonyms: Vec<SynonymCheck>,
    pub lexical: WeightedQuery,
    pub context_variants: Vec<Vec<Term>>,
    pub relevant_query: RelevantSummary,
    pub relevant_context: RelevantSummary,
    pub paths: Vec<PathSummary>,
    pub kept_paths: Vec<PathSummary>,
    pub communities: Vec<CommunitySummary>,
    pub hierarchies: Vec<HierarchySummary>,
    pub topological: WeightedQuery,
}

impl<'a> Expander<'a> {
    pub fn new(
        graph: &'a KnowledgeGraph,
        corpus: &'a CorpusIndex,
        config: &'a PipelineConfig,
    ) -> Result<Expander<'a>, ExpandError> {
        config.validate()?;
        Ok(Expander {
            graph,
            corpus,
            config,
        })
    }

    fn filter(&self, text: &str) -> Vec<Term> {
        filter_terms(
            text,
            &[&self.config.stopwords_general, &self.config.stopwords_visual],
        )
    }

    fn title(&self, id: ArticleId) -> String {
        self.graph.article(id).raw_title.clone()
    }

    fn titles<'i>(&self, ids: impl IntoIterator<Item = &'i ArticleId>) -> Vec<String> {
        ids.into_iter().map(|&id| self.title(id)).collect()
    }

    /// Expands `query`. Without a context the query text doubles as the
    /// context.
    pub fn expand(&self, query: &str, context: Option<&str>) -> Result<Expansion, ExpandError> {
        let g = self.graph;
        let cfg = self.config;

        let query_terms = self.filter(query);
        let original = build_original_query(&query_terms)?;
        let q = Phrase::from_terms(query_terms).expect("checked non-empty");
        let context_terms = self.filter(context.unwrap_or(query));
        let context_defaulted = context_terms.is_empty();
        let c = Phrase::from_terms(context_terms).unwrap_or_else(|| q.clone());

        let query_lattice = SynonymLattice::new(g, &q);
        let synonyms = query_lattice.expand(cfg.synonym_cap)?;
        let checks = screen_synonyms(&synonyms, self.corpus, &q);
        let lexical = build_lexical_query(&synonyms, self.corpus, &q);

        let rq = select_relevant(g, &synonyms, Origin::Query, cfg.relevant_cap);
        let context_lattice = SynonymLattice::new(g, &c);
        let rc = select_relevant_lattice(g, &context_lattice, Origin::Context, cfg.relevant_cap);

        let paths = compute_paths(g, &rq, &rc, cfg.max_hops, &q, &c);
        let kept = top_paths(&paths);

        let outcomes: Vec<_> = kept
            .par_iter()
            .map(|p| grow_community(g, p, cfg.wcc_iteration_cap))
            .collect();
        let communities: Vec<Community> = outcomes
            .iter()
            .map(|o| Community {
                score: Some(score_community(g, &o.community.members, &q, &c)),
                ..o.community.clone()
            })
            .collect();
        let selected = top_communities(&communities);
        let hierarchies: Vec<Hierarchy> = selected
            .iter()
            .map(|k| build_hierarchy(g, k, &q, cfg.hierarchy_containment))
            .collect();
        let topological = build_topological_query(&hierarchies, g);

        let structured = combine(original, lexical.clone(), topological.clone(), cfg.weights)?;

        let diagnostics = Diagnostics {
            query: q,
            context: c,
            context_defaulted,
            synonyms: checks,
            lexical,
            context_variants: context_lattice.positions().to_vec(),
            relevant_query: self.summarize_set(&rq),
            relevant_context: self.summarize_set(&rc),
            paths: paths.iter().map(|p| self.summarize_path(p)).collect(),
            kept_paths: kept.iter().map(|p| self.summarize_path(p)).collect(),
            communities: outcomes
                .iter()
                .zip(&communities)
                .map(|(o, k)| CommunitySummary {
                    seed_path: self.titles(&k.seed_path),
                    members: self.titles(&k.members),
                    score: k.score.unwrap_or(0),
                    kept: selected.contains(k),
                    rounds: o.trace.rounds,
                    final_wcc: o.trace.final_wcc,
                    cap_hit: o.trace.cap_hit,
                    fell_back: o.trace.fell_back,
                    trace: o.trace.events.iter().map(|e| self.trace_entry(e)).collect(),
                })
                .collect(),
            hierarchies: hierarchies
                .iter()
                .map(|h| HierarchySummary {
                    terms: h.terms.clone(),
                    levels: h.levels.iter().map(|l| self.titles(l)).collect(),
                    depth: h.depth(),
                })
                .collect(),
            topological,
        };
        Ok(Expansion {
            query: structured,
            diagnostics,
        })
    }

    fn summarize_set(&self, set: &RelevantSet) -> RelevantSummary {
        RelevantSummary {
            size: set.members.len(),
            matched: set.matched,
            truncated: set.truncated,
            articles: self.titles(&set.members),
        }
    }

    fn summarize_path(&self, p: &ConceptPath) -> PathSummary {
        PathSummary {
            articles: self.titles(&p.articles),
            score: format!("{}/{}", p.score.numer(), p.score.denom()),
        }
    }

    fn trace_entry(&self, e: &GrowthEvent) -> TraceEntry {
        match *e {
            GrowthEvent::Accepted {
                round,
                article,
                objective_before,
                objective_after,
            } => TraceEntry::Accepted {
                round,
                article: self.title(article),
                objective_before,
                objective_after,
            },
            GrowthEvent::Removed {
                round,
                article,
                wcc,
                threshold,
            } => TraceEntry::Removed {
                round,
                article: self.title(article),
                wcc,
                threshold,
            },
        }
    }
}
