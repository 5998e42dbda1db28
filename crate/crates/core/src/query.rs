//! Combination of the original, lexical and topological queries into one
//! weighted structured query, rendered in Indri syntax or canonical JSON.
//!
//! Text form:
//!
//! ```text
//! query    := '#weight(' branch (' ' branch)* ')'
//! branch   := FLOAT ' ' node
//! node     := '#combine(' term (' ' term)* ')'
//!           | '#weight(' FLOAT ' ' phraseop (' ' FLOAT ' ' phraseop)* ')'
//! phraseop := '#od1(' term (' ' term)* ')'
//!           | '#uw' INT '(' term (' ' term)* ')'
//! ```
//!
//! Branches appear in the order original, lexical, topological, context.
//! Empty or zero-weighted branches are omitted and the remaining branch
//! weights renormalized to sum to 1. Floats are printed with six decimals.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{Phrase, Term};
use crate::weighted::WeightedQuery;

/// Unordered-window size per phrase term for topological phrases.
pub const WINDOW_PER_TERM: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("empty query")]
    EmptyQuery,
    #[error("degenerate query: no branch has both entries and a positive weight")]
    DegenerateQuery,
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("invalid query JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl WeightVector {
    pub const DEFAULT: WeightVector = WeightVector {
        alpha: 0.08,
        beta: 0.05,
        gamma: 0.87,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<WeightVector, QueryError> {
        let w = WeightVector { alpha, beta, gamma };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() || v < 0.0 {
                return Err(QueryError::InvalidWeights(format!(
                    "{name} = {v} must be finite and >= 0"
                )));
            }
        }
        if self.alpha + self.beta + self.gamma <= 0.0 {
            return Err(QueryError::InvalidWeights(
                "alpha + beta + gamma must be > 0".into(),
            ));
        }
        Ok(())
    }
}

impl Default for WeightVector {
    fn default() -> Self {
        WeightVector::DEFAULT
    }
}

/// Context-only baseline branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextBranch {
    pub weight: f64,
    pub query: WeightedQuery,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStructuredQuery")]
pub struct StructuredQuery {
    pub weights: WeightVector,
    pub original: WeightedQuery,
    pub lexical: WeightedQuery,
    pub topological: WeightedQuery,
    pub context: Option<ContextBranch>,
}

#[derive(Deserialize)]
struct RawStructuredQuery {
    weights: WeightVector,
    original: WeightedQuery,
    lexical: WeightedQuery,
    topological: WeightedQuery,
    context: Option<ContextBranch>,
}

impl TryFrom<RawStructuredQuery> for StructuredQuery {
    type Error = QueryError;

    fn try_from(raw: RawStructuredQuery) -> Result<Self, Self::Error> {
        let sq = StructuredQuery {
            weights: raw.weights,
            original: raw.original,
            lexical: raw.lexical,
            topological: raw.topological,
            context: raw.context,
        };
        sq.validate()?;
        Ok(sq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    Original,
    Lexical,
    Topological,
    Context,
}

/// A rendered branch with its renormalized weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch<'a> {
    pub kind: BranchKind,
    pub weight: f64,
    pub query: &'a WeightedQuery,
}

/// `<1, q>` over the filtered query terms.
pub fn build_original_query(terms: &[Term]) -> Result<WeightedQuery, QueryError> {
    let phrase = Phrase::from_terms(terms.to_vec()).ok_or(QueryError::EmptyQuery)?;
    Ok(WeightedQuery::uniform(vec![phrase]).expect("single phrase"))
}

/// One entry per distinct context term, equally weighted.
pub fn build_context_query(c: &Phrase) -> WeightedQuery {
    let distinct: BTreeSet<&Term> = c.term_set();
    let phrases = distinct
        .into_iter()
        .map(|t| Phrase::from_terms(vec![t.clone()]).expect("one term"))
        .collect();
    WeightedQuery::uniform(phrases).expect("distinct terms")
}

pub fn combine(
    qo: WeightedQuery,
    ql: WeightedQuery,
    qt: WeightedQuery,
    w: WeightVector,
) -> Result<StructuredQuery, QueryError> {
    let sq = StructuredQuery {
        weights: w,
        original: qo,
        lexical: ql,
        topological: qt,
        context: None,
    };
    sq.validate()?;
    Ok(sq)
}

/// The `<Q_O, Q_C>` baseline: original terms and context terms, each branch
/// weighted 1/2.
pub fn combine_baseline(qo: WeightedQuery, qc: WeightedQuery) -> Result<StructuredQuery, QueryError> {
    let sq = StructuredQuery {
        weights: WeightVector::new(0.5, 0.0, 0.0)?,
        original: qo,
        lexical: WeightedQuery::empty(),
        topological: WeightedQuery::empty(),
        context: Some(ContextBranch {
            weight: 0.5,
            query: qc,
        }),
    };
    sq.validate()?;
    Ok(sq)
}

impl StructuredQuery {
    fn validate(&self) -> Result<(), QueryError> {
        self.weights.validate()?;
        if self.original.is_empty() {
            return Err(QueryError::EmptyQuery);
        }
        if let Some(ctx) = &self.context {
            if !ctx.weight.is_finite() || ctx.weight < 0.0 {
                return Err(QueryError::InvalidWeights(format!(
                    "context weight {}",
                    ctx.weight
                )));
            }
        }
        if self.branches().is_empty() {
            return Err(QueryError::DegenerateQuery);
        }
        Ok(())
    }

    /// Present branches with weights renormalized to sum to 1.
    pub fn branches(&self) -> Vec<Branch<'_>> {
        let mut raw = vec![
            (BranchKind::Original, self.weights.alpha, &self.original),
            (BranchKind::Lexical, self.weights.beta, &self.lexical),
            (BranchKind::Topological, self.weights.gamma, &self.topological),
        ];
        if let Some(ctx) = &self.context {
            raw.push((BranchKind::Context, ctx.weight, &ctx.query));
        }
        raw.retain(|(_, w, q)| *w > 0.0 && !q.is_empty());
        let total: f64 = raw.iter().map(|(_, w, _)| w).sum();
        raw.into_iter()
            .map(|(kind, w, query)| Branch {
                kind,
                weight: w / total,
                query,
            })
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from("#weight(");
        for (i, branch) in self.branches().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{:.6} ", branch.weight).unwrap();
            match branch.kind {
                BranchKind::Original => {
                    out.push_str("#combine(");
                    let terms: Vec<&str> = branch
                        .query
                        .entries()
                        .iter()
                        .flat_map(|e| e.phrase.terms().iter().map(Term::as_str))
                        .collect();
                    out.push_str(&terms.join(" "));
                    out.push(')');
                }
                BranchKind::Lexical | BranchKind::Context => {
                    render_phrases(&mut out, branch.query, |_| "#od1".to_string())
                }
                BranchKind::Topological => render_phrases(&mut out, branch.query, |p| {
                    format!("#uw{}", WINDOW_PER_TERM * p.len())
                }),
            }
        }
        out.push(')');
        out
    }

    /// Canonical JSON: sorted keys, shortest round-trip float formatting.
    pub fn render_json(&self) -> String {
        let value = serde_json::to_value(self).expect("query serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    pub fn parse_json(text: &str) -> Result<StructuredQuery, QueryError> {
        serde_json::from_str(text).map_err(|e| QueryError::Json(e.to_string()))
    }
}

fn render_phrases(out: &mut String, q: &WeightedQuery, op: impl Fn(&Phrase) -> String) {
    out.push_str("#weight(");
    for (i, e) in q.entries().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{:.6} {}({})", e.weight, op(&e.phrase), e.phrase).unwrap();
    }
    out.push(')');
}
