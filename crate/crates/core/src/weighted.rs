use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::Phrase;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPhrase {
    pub phrase: Phrase,
    pub weight: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum WeightedQueryError {
    #[error("phrase {0:?} appears more than once")]
    DuplicatePhrase(String),
    #[error("weight {weight} of phrase {phrase:?} is outside [0, 1]")]
    WeightOutOfRange { phrase: String, weight: f64 },
}

/// A set of `<weight, phrase>` pairs.
///
/// Entries are kept in canonical order: descending weight, then phrase text.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeightedPhrase>", into = "Vec<WeightedPhrase>")]
pub struct WeightedQuery {
    entries: Vec<WeightedPhrase>,
}

fn canonical(a: &WeightedPhrase, b: &WeightedPhrase) -> Ordering {
    b.weight
        .total_cmp(&a.weight)
        .then_with(|| a.phrase.to_string().cmp(&b.phrase.to_string()))
}

impl WeightedQuery {
    pub fn new(mut entries: Vec<WeightedPhrase>) -> Result<WeightedQuery, WeightedQueryError> {
        for e in &entries {
            if !(0.0..=1.0).contains(&e.weight) {
                return Err(WeightedQueryError::WeightOutOfRange {
                    phrase: e.phrase.to_string(),
                    weight: e.weight,
                });
            }
        }
        entries.sort_by(canonical);
        let mut seen = std::collections::HashSet::new();
        for e in &entries {
            if !seen.insert(&e.phrase) {
                return Err(WeightedQueryError::DuplicatePhrase(e.phrase.to_string()));
            }
        }
        Ok(WeightedQuery { entries })
    }

    /// Every phrase with the same weight `1 / n`.
    pub fn uniform(phrases: Vec<Phrase>) -> Result<WeightedQuery, WeightedQueryError> {
        let w = 1.0 / phrases.len() as f64;
        WeightedQuery::new(
            phrases
                .into_iter()
                .map(|phrase| WeightedPhrase { phrase, weight: w })
                .collect(),
        )
    }

    pub fn empty() -> WeightedQuery {
        WeightedQuery::default()
    }

    pub fn entries(&self) -> &[WeightedPhrase] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weight associated with `p`, if present.
    pub fn weight_of(&self, p: &Phrase) -> Option<f64> {
        self.entries.iter().find(|e| &e.phrase == p).map(|e| e.weight)
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

impl TryFrom<Vec<WeightedPhrase>> for WeightedQuery {
    type Error = WeightedQueryError;

    fn try_from(value: Vec<WeightedPhrase>) -> Result<Self, Self::Error> {
        WeightedQuery::new(value)
    }
}

impl From<WeightedQuery> for Vec<WeightedPhrase> {
    fn from(q: WeightedQuery) -> Self {
        q.entries
    }
}
