//! Redirect-based synonyms and the lexical query.
//!
//! A term's synonyms are the single-term titles that share its article: the
//! redirects of the article titled by the term, plus the article's own title
//! when the term itself was a redirect. A phrase's synonyms are every
//! position-wise combination of term variants, original terms included.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::CorpusIndex;
use crate::graph::KnowledgeGraph;
use crate::text::{Phrase, Term};
use crate::weighted::WeightedQuery;

pub const DEFAULT_SYNONYM_CAP: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexicalError {
    #[error("synonym expansion would produce {size} phrases, above the cap of {cap}")]
    Overflow { size: u128, cap: usize },
}

/// Single-term synonyms of `t`, sorted. Never contains `t`.
pub fn term_synonyms(g: &KnowledgeGraph, t: &Term) -> Vec<Term> {
    let key = Phrase::from_terms(vec![t.clone()]).expect("one term");
    let Some(article) = g.resolve_title(&key) else {
        return Vec::new();
    };
    let mut out = BTreeSet::new();
    let own = g.title(article);
    let aliases = g.redirect_ids(article).iter().map(|&r| g.title(r));
    for title in std::iter::once(own).chain(aliases) {
        if let [single] = title.terms() {
            if single != t {
                out.insert(single.clone());
            }
        }
    }
    out.into_iter().collect()
}

/// Per-position term variants of a phrase: the original term first, then
/// its synonyms in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynonymLattice {
    positions: Vec<Vec<Term>>,
}

impl SynonymLattice {
    pub fn new(g: &KnowledgeGraph, q: &Phrase) -> SynonymLattice {
        let positions = q
            .terms()
            .iter()
            .map(|t| {
                let mut variants = vec![t.clone()];
                variants.extend(term_synonyms(g, t));
                variants
            })
            .collect();
        SynonymLattice { positions }
    }

    pub fn positions(&self) -> &[Vec<Term>] {
        &self.positions
    }

    /// Number of phrases the lattice expands to (saturating).
    pub fn size(&self) -> u128 {
        self.positions
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.len() as u128))
    }

    /// All phrases, original first, in odometer order (last position varies fastest).
    pub fn expand(&self, cap: usize) -> Result<Vec<Phrase>, LexicalError> {
        let size = self.size();
        if size > cap as u128 {
            return Err(LexicalError::Overflow { size, cap });
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut digits = vec![0usize; self.positions.len()];
        loop {
            let terms = digits
                .iter()
                .zip(&self.positions)
                .map(|(&d, v)| v[d].clone())
                .collect();
            out.push(Phrase::from_terms(terms).expect("lattice has at least one position"));
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < self.positions[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Every term appearing in any expanded phrase.
    pub fn unigrams(&self) -> BTreeSet<Term> {
        self.positions.iter().flatten().cloned().collect()
    }

    /// Every contiguous bigram of any expanded phrase, without expanding.
    pub fn bigrams(&self) -> BTreeSet<[Term; 2]> {
        self.positions
            .windows(2)
            .flat_map(|w| {
                w[0].iter()
                    .flat_map(move |a| w[1].iter().map(move |b| [a.clone(), b.clone()]))
            })
            .collect()
    }
}

/// Every combination of term synonyms in the original order, `q` included.
pub fn phrase_synonyms(g: &KnowledgeGraph, q: &Phrase, cap: usize) -> Result<Vec<Phrase>, LexicalError> {
    SynonymLattice::new(g, q).expand(cap)
}

/// Corpus check outcome for one synonym phrase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynonymCheck {
    pub phrase: Phrase,
    pub in_corpus: bool,
    pub is_original: bool,
}

pub fn screen_synonyms(synonyms: &[Phrase], idx: &CorpusIndex, original: &Phrase) -> Vec<SynonymCheck> {
    synonyms
        .iter()
        .map(|p| SynonymCheck {
            phrase: p.clone(),
            in_corpus: idx.occurs(p),
            is_original: p == original,
        })
        .collect()
}

/// Synonym phrases found verbatim in the corpus, equally weighted. The
/// original phrase is left out since the original query already carries it.
pub fn build_lexical_query(synonyms: &[Phrase], idx: &CorpusIndex, original: &Phrase) -> WeightedQuery {
    let survivors: BTreeSet<Phrase> = screen_synonyms(synonyms, idx, original)
        .into_iter()
        .filter(|c| c.in_corpus && !c.is_original)
        .map(|c| c.phrase)
        .collect();
    if survivors.is_empty() {
        return WeightedQuery::empty();
    }
    WeightedQuery::uniform(survivors.into_iter().collect()).expect("distinct phrases, weight 1/n")
}
