//! Topological expansion: relevant articles, concept paths, communities and
//! the hierarchy-weighted topological query.

mod community;
mod hierarchy;
mod paths;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{ArticleId, KnowledgeGraph};
use crate::lexical::SynonymLattice;
use crate::text::{Phrase, Term};

pub use community::{
    grow_community, score_community, top_communities, GrowthEvent, GrowthOutcome, GrowthTrace,
    DEFAULT_WCC_ITERATION_CAP,
};
pub use hierarchy::{
    build_hierarchy, build_topological_query, Hierarchy, HierarchyContainment, HierarchyError,
};
pub use paths::{compute_paths, score_path, top_paths, ConceptPath, DEFAULT_MAX_HOPS};

pub const DEFAULT_RELEVANT_CAP: usize = 5000;

/// Number of distinct terms shared by two phrases.
pub fn term_overlap(a: &Phrase, b: &Phrase) -> usize {
    let b = b.term_set();
    a.term_set().iter().filter(|t| b.contains(*t)).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Query,
    Context,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelevantSet {
    pub origin: Origin,
    pub members: BTreeSet<ArticleId>,
    /// Matches found before the size cap was applied.
    pub matched: usize,
    pub truncated: bool,
}

/// Articles relevant to a set of phrases: titles (or redirect titles)
/// containing one of their bigrams, and titles containing one of their terms.
pub fn select_relevant(g: &KnowledgeGraph, phrases: &[Phrase], origin: Origin, cap: usize) -> RelevantSet {
    let unigrams: BTreeSet<Term> = phrases.iter().flat_map(|p| p.terms().iter().cloned()).collect();
    let bigrams: BTreeSet<[Term; 2]> = phrases
        .iter()
        .flat_map(|p| p.bigrams().map(|b| [b[0].clone(), b[1].clone()]))
        .collect();
    select_by_ngrams(g, &unigrams, &bigrams, origin, cap)
}

/// Same selection as [`select_relevant`] over every phrase of the lattice,
/// without materializing the phrases.
pub fn select_relevant_lattice(
    g: &KnowledgeGraph,
    lattice: &SynonymLattice,
    origin: Origin,
    cap: usize,
) -> RelevantSet {
    select_by_ngrams(g, &lattice.unigrams(), &lattice.bigrams(), origin, cap)
}

fn select_by_ngrams(
    g: &KnowledgeGraph,
    unigrams: &BTreeSet<Term>,
    bigrams: &BTreeSet<[Term; 2]>,
    origin: Origin,
    cap: usize,
) -> RelevantSet {
    let mut found = BTreeSet::new();
    for [a, b] in bigrams {
        let (pa, pb) = (g.articles_with_term(a), g.articles_with_term(b));
        let (short, long) = if pa.len() <= pb.len() { (pa, pb) } else { (pb, pa) };
        for &id in short {
            if long.binary_search(&id).is_err() {
                continue;
            }
            if g.title(id).contains_run(&[a.clone(), b.clone()]) {
                found.insert(g.article(id).redirect_target.unwrap_or(id));
            }
        }
    }
    for t in unigrams {
        found.extend(
            g.articles_with_term(t)
                .iter()
                .copied()
                .filter(|&id| !g.article(id).is_redirect()),
        );
    }
    let matched = found.len();
    let truncated = matched > cap;
    let members = if truncated {
        found.into_iter().take(cap).collect()
    } else {
        found
    };
    RelevantSet {
        origin,
        members,
        matched,
        truncated,
    }
}
