//! Hierarchies rooted at the query terms, and the topological query built
//! from them.
//!
//! Level 1 holds the query terms. Level 2 holds community members whose
//! titles match the query terms; each further level holds the unplaced
//! members linked from the previous level. An article at level `i` of an
//! `L`-level hierarchy weighs `(L - i) / (L - 1)`, except that a two-level
//! hierarchy gives its only article level full weight.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArticleId, KnowledgeGraph};
use crate::text::{Phrase, Term};
use crate::wcc::Community;
use crate::weighted::{WeightedPhrase, WeightedQuery};

/// How level-2 articles are matched against the query terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HierarchyContainment {
    /// Every title term is a query term.
    #[default]
    Formula,
    /// The title contains every query term.
    Prose,
}

impl HierarchyContainment {
    fn admits(self, title: &Phrase, query_terms: &BTreeSet<&Term>) -> bool {
        let title_terms = title.term_set();
        match self {
            HierarchyContainment::Formula => title_terms.is_subset(query_terms),
            HierarchyContainment::Prose => query_terms.is_subset(&title_terms),
        }
    }
}

impl std::str::FromStr for HierarchyContainment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "formula" => Ok(HierarchyContainment::Formula),
            "prose" => Ok(HierarchyContainment::Prose),
            other => Err(format!(
                "unknown containment {other:?}, expected formula or prose"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("article {0} is not placed in the hierarchy")]
    NotPlaced(ArticleId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hierarchy {
    /// Level 1: the distinct query terms, in query order.
    pub terms: Vec<Term>,
    /// Levels 2..=L, each sorted by article id.
    pub levels: Vec<Vec<ArticleId>>,
    /// Placed articles whose title is exactly one query term.
    pub term_articles: BTreeSet<ArticleId>,
}

impl Hierarchy {
    /// Total level count `L`, the term level included.
    pub fn depth(&self) -> usize {
        1 + self.levels.len()
    }

    /// Level of `a` (2-based), if placed.
    pub fn level_of(&self, a: ArticleId) -> Option<usize> {
        self.levels
            .iter()
            .position(|level| level.binary_search(&a).is_ok())
            .map(|i| i + 2)
    }

    pub fn placed(&self) -> impl Iterator<Item = (ArticleId, usize)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(i, level)| level.iter().map(move |&a| (a, i + 2)))
    }

    /// Weight from the level alone: `(L - i) / (L - 1)`, or 1 when `L = 2`.
    pub fn level_weight(&self, level: usize) -> f64 {
        let depth = self.depth();
        if depth == 2 {
            1.0
        } else {
            (depth - level) as f64 / (depth - 1) as f64
        }
    }

    /// Weight of a placed article. An article titled by a query term also
    /// receives the term level's weight of 1, capped at 1 overall.
    pub fn article_weight(&self, a: ArticleId) -> Result<f64, HierarchyError> {
        let level = self.level_of(a).ok_or(HierarchyError::NotPlaced(a))?;
        let w = self.level_weight(level);
        if self.term_articles.contains(&a) {
            Ok((1.0 + w).min(1.0))
        } else {
            Ok(w)
        }
    }
}

pub fn build_hierarchy(
    g: &KnowledgeGraph,
    k: &Community,
    q: &Phrase,
    containment: HierarchyContainment,
) -> Hierarchy {
    let mut terms = Vec::new();
    for t in q.terms() {
        if !terms.contains(t) {
            terms.push(t.clone());
        }
    }
    let query_terms = q.term_set();

    let mut unplaced: BTreeSet<ArticleId> = k.members.clone();
    let top: Vec<ArticleId> = k
        .members
        .iter()
        .copied()
        .filter(|&a| containment.admits(g.title(a), &query_terms))
        .collect();
    let mut levels = Vec::new();
    let mut current = top;
    while !current.is_empty() {
        for a in &current {
            unplaced.remove(a);
        }
        let next: Vec<ArticleId> = unplaced
            .iter()
            .copied()
            .filter(|&b| current.iter().any(|&a| g.has_edge(a, b)))
            .collect();
        levels.push(current);
        current = next;
    }

    let term_articles = levels
        .iter()
        .flatten()
        .copied()
        .filter(|&a| matches!(g.title(a).terms(), [t] if query_terms.contains(t)))
        .collect();

    Hierarchy {
        terms,
        levels,
        term_articles,
    }
}

/// Averages article weights over all hierarchies (0 where absent) and emits
/// each article's title and redirect titles at that weight. Zero weights are
/// dropped.
pub fn build_topological_query(hs: &[Hierarchy], g: &KnowledgeGraph) -> WeightedQuery {
    if hs.is_empty() {
        return WeightedQuery::empty();
    }
    let mut sums: BTreeMap<ArticleId, f64> = BTreeMap::new();
    for h in hs {
        for (a, _) in h.placed() {
            let w = h.article_weight(a).expect("placed article");
            *sums.entry(a).or_insert(0.0) += w;
        }
    }
    let n = hs.len() as f64;
    let mut entries = Vec::new();
    for (a, sum) in sums {
        let weight = sum / n;
        if weight <= 0.0 {
            continue;
        }
        entries.push(WeightedPhrase {
            phrase: g.title(a).clone(),
            weight,
        });
        for &r in g.redirect_ids(a) {
            entries.push(WeightedPhrase {
                phrase: g.title(r).clone(),
                weight,
            });
        }
    }
    WeightedQuery::new(entries).expect("titles are unique and weights lie in (0, 1]")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Phrase {
        Phrase::parse(s).unwrap()
    }

    fn setup(nodes: &str, edges: &str) -> KnowledgeGraph {
        KnowledgeGraph::load(nodes.as_bytes(), edges.as_bytes()).unwrap()
    }

    fn community(g: &KnowledgeGraph, titles: &[&str]) -> Community {
        Community {
            members: titles.iter().map(|t| g.lookup_title(&p(t)).unwrap()).collect(),
            seed_path: vec![],
            score: None,
        }
    }

    fn id(g: &KnowledgeGraph, t: &str) -> ArticleId {
        g.lookup_title(&p(t)).unwrap()
    }

    #[test]
    fn title_contained_article_on_level_two() {
        let g = setup("1\tvolkswagen\t-\n2\tgerman cars\t-\n", "1\t2\n");
        let h = build_hierarchy(
            &g,
            &community(&g, &["volkswagen", "german cars"]),
            &p("volkswagen beetles"),
            HierarchyContainment::Formula,
        );
        assert_eq!(h.level_of(id(&g, "volkswagen")), Some(2));
        assert_eq!(h.level_of(id(&g, "german cars")), Some(3));
        assert_eq!(h.depth(), 3);
        assert_eq!(h.article_weight(id(&g, "volkswagen")).unwrap(), 1.0);
        assert_eq!(h.article_weight(id(&g, "german cars")).unwrap(), 0.0);
    }

    #[test]
    fn no_level_two_gives_no_weights() {
        let g = setup("1\ttokyo\t-\n2\tjapan\t-\n", "1\t2\n");
        let k = community(&g, &["tokyo", "japan"]);
        let h = build_hierarchy(&g, &k, &p("volkswagen"), HierarchyContainment::Formula);
        assert_eq!(h.depth(), 1);
        assert_eq!(h.placed().count(), 0);
        assert_eq!(
            h.article_weight(id(&g, "tokyo")),
            Err(HierarchyError::NotPlaced(id(&g, "tokyo")))
        );
        assert!(build_topological_query(&[h], &g).is_empty());
    }

    #[test]
    fn chain_levels_propagate() {
        let g = setup(
            "1\tbeetle car\t-\n2\tx\t-\n3\ty\t-\n4\tz\t-\n",
            "1\t2\n2\t3\n4\t1\n",
        );
        let k = community(&g, &["beetle car", "x", "y", "z"]);
        let h = build_hierarchy(&g, &k, &p("beetle car"), HierarchyContainment::Formula);
        assert_eq!(h.level_of(id(&g, "beetle car")), Some(2));
        assert_eq!(h.level_of(id(&g, "x")), Some(3));
        assert_eq!(h.level_of(id(&g, "y")), Some(4));
        // z links into the hierarchy but nothing links to z
        assert_eq!(h.level_of(id(&g, "z")), None);
        assert_eq!(h.depth(), 4);
        assert_eq!(h.article_weight(id(&g, "beetle car")).unwrap(), 2.0 / 3.0);
        assert_eq!(h.article_weight(id(&g, "x")).unwrap(), 1.0 / 3.0);
        assert_eq!(h.article_weight(id(&g, "y")).unwrap(), 0.0);
    }

    #[test]
    fn level_weight_arithmetic() {
        let h = Hierarchy {
            terms: vec![],
            levels: vec![vec![ArticleId::new(0)], vec![ArticleId::new(1)]],
            term_articles: BTreeSet::new(),
        };
        assert_eq!(h.level_weight(2), 0.5);
        assert_eq!(h.level_weight(3), 0.0);
        let two = Hierarchy {
            levels: vec![vec![ArticleId::new(0)]],
            ..h
        };
        assert_eq!(two.article_weight(ArticleId::new(0)).unwrap(), 1.0);
    }

    #[test]
    fn prose_containment() {
        let g = setup("1\tvolkswagen\t-\n2\tvolkswagen beetles club\t-\n", "");
        let k = community(&g, &["volkswagen", "volkswagen beetles club"]);
        let q = p("volkswagen beetles");
        let formula = build_hierarchy(&g, &k, &q, HierarchyContainment::Formula);
        let prose = build_hierarchy(&g, &k, &q, HierarchyContainment::Prose);
        assert_eq!(formula.levels, vec![vec![id(&g, "volkswagen")]]);
        assert_eq!(prose.levels, vec![vec![id(&g, "volkswagen beetles club")]]);
        assert_eq!("prose".parse(), Ok(HierarchyContainment::Prose));
        assert!("other".parse::<HierarchyContainment>().is_err());
    }

    #[test]
    fn redirects_share_the_article_weight() {
        let g = setup("1\tvolkswagen\t-\n2\tvw\t1\n", "");
        let k = community(&g, &["volkswagen"]);
        let h = build_hierarchy(&g, &k, &p("volkswagen"), HierarchyContainment::Formula);
        let qt = build_topological_query(&[h], &g);
        let got: Vec<(String, f64)> = qt
            .entries()
            .iter()
            .map(|e| (e.phrase.to_string(), e.weight))
            .collect();
        assert_eq!(got, [("volkswagen".into(), 1.0), ("vw".into(), 1.0)]);
    }

    #[test]
    fn averaged_over_all_hierarchies() {
        let g = setup("1\tvolkswagen\t-\n2\tbeetle\t-\n", "");
        let q = p("volkswagen beetle");
        let h1 = build_hierarchy(
            &g,
            &community(&g, &["volkswagen"]),
            &q,
            HierarchyContainment::Formula,
        );
        let h2 = build_hierarchy(&g, &community(&g, &["beetle"]), &q, HierarchyContainment::Formula);
        let qt = build_topological_query(&[h1, h2], &g);
        assert_eq!(qt.weight_of(&p("volkswagen")), Some(0.5));
        assert_eq!(qt.weight_of(&p("beetle")), Some(0.5));
    }
}
