//! Terms, phrases and the shared tokenizer.
//!
//! Every piece of text that enters the engine (article titles, corpus
//! documents, queries, contexts, stopword lists) goes through [`tokenize`],
//! so that equality between a query phrase, a title and a corpus n-gram is
//! plain token-sequence equality.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// A single normalized token: NFC, lowercase, alphanumeric characters only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Term(String);

impl Term {
    /// Normalizes `raw` into a single term. Returns `None` when the input
    /// yields zero or more than one token.
    pub fn new(raw: &str) -> Option<Term> {
        let mut tokens = tokenize(raw);
        if tokens.len() == 1 {
            tokens.pop()
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits text into normalized terms.
///
/// The text is NFC-normalized and lowercased, then split on every character
/// that is not alphanumeric. Whitespace runs and punctuation both act as
/// separators, so `"Beetle (insect)"` yields `["beetle", "insect"]`.
pub fn tokenize(text: &str) -> Vec<Term> {
    let normalized: String = text.nfc().flat_map(char::to_lowercase).collect();
    normalized
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(|s| Term(s.nfc().collect()))
        .collect()
}

/// An ordered, non-empty list of terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Phrase(Vec<Term>);

impl Phrase {
    /// Tokenizes `text` into a phrase; `None` if no terms remain.
    pub fn parse(text: &str) -> Option<Phrase> {
        Phrase::from_terms(tokenize(text))
    }

    pub fn from_terms(terms: Vec<Term>) -> Option<Phrase> {
        if terms.is_empty() {
            None
        } else {
            Some(Phrase(terms))
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct terms of the phrase.
    pub fn term_set(&self) -> BTreeSet<&Term> {
        self.0.iter().collect()
    }

    /// True when `needle` occurs as a contiguous run of terms.
    pub fn contains_run(&self, needle: &[Term]) -> bool {
        !needle.is_empty() && self.0.windows(needle.len()).any(|w| w == needle)
    }

    pub fn contains_term(&self, term: &Term) -> bool {
        self.0.contains(term)
    }

    /// Contiguous term pairs, in order.
    pub fn bigrams(&self) -> impl Iterator<Item = &[Term]> {
        self.0.windows(2)
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t.as_str())?;
        }
        Ok(())
    }
}

impl From<Phrase> for String {
    fn from(p: Phrase) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Phrase {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Phrase::parse(&value).ok_or_else(|| format!("phrase {value:?} has no terms"))
    }
}

/// A set of terms removed from queries and contexts before expansion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordSet {
    terms: BTreeSet<Term>,
}

impl StopwordSet {
    /// Parses a one-term-per-line list. Blank lines and `#` comments are
    /// skipped; a line that tokenizes into several terms contributes all of
    /// them.
    pub fn from_list(text: &str) -> StopwordSet {
        let terms = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(tokenize)
            .collect();
        StopwordSet { terms }
    }

    pub fn contains(&self, term: &Term) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Tokenizes `text` and drops every term found in any of `stopwords`.
pub fn filter_terms(text: &str, stopwords: &[&StopwordSet]) -> Vec<Term> {
    tokenize(text)
        .into_iter()
        .filter(|t| !stopwords.iter().any(|s| s.contains(t)))
        .collect()
}
