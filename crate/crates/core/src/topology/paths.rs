use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{term_overlap, RelevantSet};
use crate::graph::{ArticleId, KnowledgeGraph};
use crate::text::Phrase;

pub const DEFAULT_MAX_HOPS: usize = 4;

/// A shortest directed path from a query-side article to a context-side one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptPath {
    pub articles: Vec<ArticleId>,
    #[serde(serialize_with = "ratio_string")]
    pub score: Ratio<u64>,
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Mean overlap of the path's titles with the query and the context.
pub fn score_path(g: &KnowledgeGraph, articles: &[ArticleId], q: &Phrase, c: &Phrase) -> Ratio<u64> {
    let total: usize = articles
        .iter()
        .map(|&a| {
            let title = g.title(a);
            term_overlap(title, q) + term_overlap(title, c)
        })
        .sum();
    Ratio::new(total as u64, articles.len() as u64)
}

/// Shortest paths from every query-side article to the context side.
///
/// Only `rq -> rc` directions are explored. Output is ordered by source
/// article, then by article sequence.
pub fn compute_paths(
    g: &KnowledgeGraph,
    rq: &RelevantSet,
    rc: &RelevantSet,
    max_hops: usize,
    q: &Phrase,
    c: &Phrase,
) -> Vec<ConceptPath> {
    let sources: Vec<ArticleId> = rq.members.iter().copied().collect();
    sources
        .par_iter()
        .map(|&source| g.shortest_paths(source, &rc.members, max_hops))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .map(|articles| ConceptPath {
            score: score_path(g, &articles, q, c),
            articles,
        })
        .collect()
}

/// Paths sharing the best score, ordered by article sequence.
pub fn top_paths(paths: &[ConceptPath]) -> Vec<ConceptPath> {
    let Some(best) = paths.iter().map(|p| p.score).max() else {
        return Vec::new();
    };
    let mut kept: Vec<ConceptPath> = paths.iter().filter(|p| p.score == best).cloned().collect();
    kept.sort_by(|a, b| a.articles.cmp(&b.articles));
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Origin;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Phrase {
        Phrase::parse(s).unwrap()
    }

    fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> KnowledgeGraph {
        let key = |t: &str| nodes.iter().position(|n| *n == t).unwrap();
        let n: String = nodes
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{i}\t{t}\t-\n"))
            .collect();
        let e: String = edges
            .iter()
            .map(|(a, b)| format!("{}\t{}\n", key(a), key(b)))
            .collect();
        KnowledgeGraph::load(n.as_bytes(), e.as_bytes()).unwrap()
    }

    fn set(g: &KnowledgeGraph, origin: Origin, titles: &[&str]) -> RelevantSet {
        let members: BTreeSet<ArticleId> = titles.iter().map(|t| g.lookup_title(&p(t)).unwrap()).collect();
        RelevantSet {
            origin,
            matched: members.len(),
            members,
            truncated: false,
        }
    }

    #[test]
    fn score_examples() {
        let g = graph(&["volkswagen", "volkswagen beetle", "tokyo"], &[]);
        let [vw, beetle, tokyo] =
            ["volkswagen", "volkswagen beetle", "tokyo"].map(|t| g.lookup_title(&p(t)).unwrap());
        let q = p("volkswagen beetles");
        let c = p("volkswagen beetles example");
        // overlaps (1,1) and (1,1) -> 4/2
        assert_eq!(score_path(&g, &[vw, beetle], &q, &c), Ratio::new(2, 1));
        // overlaps (1,1) and (0,1)
        let c2 = p("volkswagen tokyo");
        assert_eq!(score_path(&g, &[vw, tokyo], &q, &c2), Ratio::new(3, 2));
        assert_eq!(score_path(&g, &[tokyo], &q, &c), Ratio::new(0, 1));
    }

    #[test]
    fn overlapping_member_without_route_has_no_path() {
        let g = graph(&["a", "b"], &[("b", "a")]);
        let rq = set(&g, Origin::Query, &["a"]);
        let rc = set(&g, Origin::Context, &["a"]);
        assert!(compute_paths(&g, &rq, &rc, 4, &p("a"), &p("a")).is_empty());
    }

    #[test]
    fn disconnected_sets() {
        let g = graph(&["a", "b", "c"], &[("b", "c")]);
        let rq = set(&g, Origin::Query, &["a"]);
        let rc = set(&g, Origin::Context, &["c"]);
        assert!(compute_paths(&g, &rq, &rc, 4, &p("a"), &p("c")).is_empty());
    }

    #[test]
    fn top_paths_keeps_ties() {
        let mk = |ids: &[u32], n, d| ConceptPath {
            articles: ids.iter().map(|&i| ArticleId::new(i)).collect(),
            score: Ratio::new(n, d),
        };
        let paths = vec![mk(&[3, 4], 1, 1), mk(&[2, 5], 3, 2), mk(&[1, 5], 3, 2)];
        let top = top_paths(&paths);
        assert_eq!(top, vec![mk(&[1, 5], 3, 2), mk(&[2, 5], 3, 2)]);
        assert_eq!(top_paths(&paths[..1]), vec![mk(&[3, 4], 1, 1)]);
        assert!(top_paths(&[]).is_empty());
    }

    #[test]
    fn score_serializes_as_fraction() {
        let path = ConceptPath {
            articles: vec![ArticleId::new(0), ArticleId::new(1)],
            score: Ratio::new(3, 2),
        };
        assert_eq!(
            serde_json::to_string(&path).unwrap(),
            r#"{"articles":[0,1],"score":"3/2"}"#
        );
    }
}
