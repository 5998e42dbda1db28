//! Average-WCC maximization around a seed path.
//!
//! Each outer round first grows the community one article at a time, always
//! taking the neighbour that raises `|K| * WCC(K)` the most, then sweeps out
//! members whose own WCC is below a quarter of the community average. Rounds
//! repeat until a round leaves `WCC(K)` unchanged.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{term_overlap, ConceptPath};
use crate::graph::{ArticleId, KnowledgeGraph};
use crate::text::Phrase;
use crate::wcc::{Community, CommunityState, WccEvaluator};

pub const DEFAULT_WCC_ITERATION_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum GrowthEvent {
    /// `objective_*` are `|K| * WCC(K)` before and after the insertion.
    Accepted {
        round: usize,
        article: ArticleId,
        objective_before: f64,
        objective_after: f64,
    },
    Removed {
        round: usize,
        article: ArticleId,
        wcc: f64,
        threshold: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthTrace {
    pub events: Vec<GrowthEvent>,
    pub rounds: usize,
    pub final_wcc: f64,
    /// The round limit stopped the procedure before convergence.
    pub cap_hit: bool,
    /// Removal emptied the community; the seed path was returned instead.
    pub fell_back: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthOutcome {
    pub community: Community,
    pub trace: GrowthTrace,
}

fn candidates(g: &KnowledgeGraph, state: &CommunityState) -> BTreeSet<ArticleId> {
    let mut out = BTreeSet::new();
    for x in state.members() {
        out.extend(
            g.undirected_neighbors(x)
                .iter()
                .copied()
                .filter(|v| !state.contains(*v)),
        );
    }
    out
}

/// Grows a community around `path`. Ties between equally good candidates go
/// to the lowest article id.
pub fn grow_community(g: &KnowledgeGraph, path: &ConceptPath, round_cap: usize) -> GrowthOutcome {
    let seed: BTreeSet<ArticleId> = path.articles.iter().copied().collect();
    let mut ev = WccEvaluator::new(g);
    let mut state = CommunityState::new(g, &seed);
    let mut events = Vec::new();
    let mut rounds = 0;
    let mut cap_hit = false;
    let mut fell_back = false;

    loop {
        if rounds == round_cap {
            cap_hit = true;
            break;
        }
        rounds += 1;
        let current = state.wcc(&mut ev).expect("community is never empty here");

        loop {
            let base = state.objective(&mut ev);
            let mut best = base;
            let mut best_candidate = None;
            for c in candidates(g, &state) {
                // With fewer than two links into K, c closes no triangle
                // inside K and the member scores cannot change.
                if state.links_into(g, c) < 2 {
                    continue;
                }
                let objective = state.objective_with(&mut ev, c);
                if objective > best {
                    best = objective;
                    best_candidate = Some(c);
                }
            }
            let Some(c) = best_candidate else { break };
            state.insert(g, c);
            events.push(GrowthEvent::Accepted {
                round: rounds,
                article: c,
                objective_before: base,
                objective_after: best,
            });
        }

        loop {
            let threshold = state.wcc(&mut ev).expect("non-empty") / 4.0;
            let mut modified = false;
            for a in state.members() {
                let w = state.vertex_wcc(&mut ev, a).expect("member");
                if w < threshold {
                    state.remove(g, a);
                    modified = true;
                    events.push(GrowthEvent::Removed {
                        round: rounds,
                        article: a,
                        wcc: w,
                        threshold,
                    });
                    if state.is_empty() {
                        break;
                    }
                }
            }
            if state.is_empty() || !modified {
                break;
            }
        }

        if state.is_empty() {
            fell_back = true;
            state = CommunityState::new(g, &seed);
            break;
        }
        if state.wcc(&mut ev).expect("non-empty") == current {
            break;
        }
    }

    let final_wcc = state.wcc(&mut ev).expect("non-empty");
    GrowthOutcome {
        community: Community {
            members: state.members(),
            seed_path: path.articles.clone(),
            score: None,
        },
        trace: GrowthTrace {
            events,
            rounds,
            final_wcc,
            cap_hit,
            fell_back,
        },
    }
}

/// Total overlap of member titles with the query and the context.
pub fn score_community(g: &KnowledgeGraph, members: &BTreeSet<ArticleId>, q: &Phrase, c: &Phrase) -> u64 {
    members
        .iter()
        .map(|&a| {
            let title = g.title(a);
            (term_overlap(title, q) + term_overlap(title, c)) as u64
        })
        .sum()
}

/// Communities sharing the best score, ordered by member list. Unscored
/// communities count as 0. Communities grown to the same member set from
/// different seeds are kept once, with the first seed path.
pub fn top_communities(ks: &[Community]) -> Vec<Community> {
    let score = |k: &Community| k.score.unwrap_or(0);
    let Some(best) = ks.iter().map(score).max() else {
        return Vec::new();
    };
    let mut kept: Vec<Community> = ks.iter().filter(|k| score(k) == best).cloned().collect();
    kept.sort_by(|a, b| a.members.iter().cmp(b.members.iter()));
    kept.dedup_by(|later, first| later.members == first.members);
    kept
}
