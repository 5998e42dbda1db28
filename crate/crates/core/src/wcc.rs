//! Weighted Community Clustering.
//!
//! For a vertex `x` in community `K`, with triangles counted on the
//! undirected view:
//!
//! ```text
//! WCC(x, K) = t(x, K) / t(x, V) * vt(x, V) / (|K \ {x}| + vt(x, V \ K))
//! ```
//!
//! where `t(x, S)` counts triangles through `x` whose other two vertices lie
//! in `S` and `vt(x, S)` counts vertices of `S` closing at least one triangle
//! with `x`. The score is 0 when `x` has no triangles at all. `WCC(K)` is
//! the mean over members.
//!
//! [`CommunityState`] keeps per-member counts so that growing or shrinking a
//! community does not recount every triangle; it produces the same numbers
//! as the from-scratch functions bit for bit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{for_each_common, ArticleId, KnowledgeGraph, TriangleStats};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WccError {
    #[error("article {0} is not a member of the community")]
    NotMember(ArticleId),
    #[error("community is empty")]
    EmptyCommunity,
}

/// A set of articles grown around a seed path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Community {
    pub members: BTreeSet<ArticleId>,
    pub seed_path: Vec<ArticleId>,
    pub score: Option<u64>,
}

impl Community {
    pub fn from_path(path: &[ArticleId]) -> Community {
        Community {
            members: path.iter().copied().collect(),
            seed_path: path.to_vec(),
            score: None,
        }
    }
}

/// The per-vertex formula on raw counts. `others` is `|K| - 1`.
pub fn vertex_score(inside: TriangleStats, global: TriangleStats, others: usize) -> f64 {
    if global.triangles == 0 {
        return 0.0;
    }
    let outside_closers = global.closers - inside.closers;
    (inside.triangles as f64 / global.triangles as f64)
        * (global.closers as f64 / (others as u64 + outside_closers) as f64)
}

pub fn wcc_vertex(g: &KnowledgeGraph, x: ArticleId, members: &BTreeSet<ArticleId>) -> Result<f64, WccError> {
    if !members.contains(&x) {
        return Err(WccError::NotMember(x));
    }
    let inside = g.triangle_stats_by(x, |v| v != x && members.contains(&v));
    let global = g.triangle_stats_global(x);
    Ok(vertex_score(inside, global, members.len() - 1))
}

pub fn wcc_community(g: &KnowledgeGraph, members: &BTreeSet<ArticleId>) -> Result<f64, WccError> {
    if members.is_empty() {
        return Err(WccError::EmptyCommunity);
    }
    let mut sum = 0.0;
    for &x in members {
        sum += wcc_vertex(g, x, members)?;
    }
    Ok(sum / members.len() as f64)
}

/// Memoized whole-graph triangle counts.
#[derive(Debug)]
pub struct WccEvaluator<'g> {
    graph: &'g KnowledgeGraph,
    global: HashMap<ArticleId, TriangleStats>,
}

impl<'g> WccEvaluator<'g> {
    pub fn new(graph: &'g KnowledgeGraph) -> Self {
        WccEvaluator {
            graph,
            global: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &'g KnowledgeGraph {
        self.graph
    }

    pub fn global(&mut self, x: ArticleId) -> TriangleStats {
        let g = self.graph;
        *self.global.entry(x).or_insert_with(|| g.triangle_stats_global(x))
    }
}

/// Members of a community with their in-community triangle counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityState {
    members: BTreeMap<ArticleId, TriangleStats>,
}

/// Contribution of a newcomer `c` to its neighbours inside `K`.
struct Join {
    /// member -> (extra triangles, 1 if it closes a triangle with c)
    deltas: BTreeMap<ArticleId, (u64, u64)>,
    newcomer: TriangleStats,
}

impl CommunityState {
    pub fn new(g: &KnowledgeGraph, members: &BTreeSet<ArticleId>) -> CommunityState {
        let members = members
            .iter()
            .map(|&x| (x, g.triangle_stats_by(x, |v| v != x && members.contains(&v))))
            .collect();
        CommunityState { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: ArticleId) -> bool {
        self.members.contains_key(&x)
    }

    pub fn members(&self) -> BTreeSet<ArticleId> {
        self.members.keys().copied().collect()
    }

    pub fn vertex_wcc(&self, ev: &mut WccEvaluator<'_>, x: ArticleId) -> Result<f64, WccError> {
        let inside = *self.members.get(&x).ok_or(WccError::NotMember(x))?;
        Ok(vertex_score(inside, ev.global(x), self.members.len() - 1))
    }

    /// Sum of member scores, i.e. `|K| * WCC(K)`.
    pub fn objective(&self, ev: &mut WccEvaluator<'_>) -> f64 {
        let others = self.members.len().saturating_sub(1);
        let mut sum = 0.0;
        for (&x, &inside) in &self.members {
            sum += vertex_score(inside, ev.global(x), others);
        }
        sum
    }

    pub fn wcc(&self, ev: &mut WccEvaluator<'_>) -> Result<f64, WccError> {
        if self.members.is_empty() {
            return Err(WccError::EmptyCommunity);
        }
        Ok(self.objective(ev) / self.members.len() as f64)
    }

    fn join(&self, g: &KnowledgeGraph, c: ArticleId) -> Join {
        let nc = g.undirected_neighbors(c);
        let inside: Vec<ArticleId> = nc.iter().copied().filter(|v| self.contains(*v)).collect();
        let mut deltas = BTreeMap::new();
        let mut pair_count = 0;
        let mut closers = 0;
        for &x in &inside {
            let nx = g.undirected_neighbors(x);
            let mut shared = 0;
            for_each_common(nx, &inside, |_| shared += 1);
            let mut closes = false;
            for_each_common(nx, nc, |_| closes = true);
            pair_count += shared;
            closers += closes as u64;
            deltas.insert(x, (shared, closes as u64));
        }
        Join {
            deltas,
            newcomer: TriangleStats {
                triangles: pair_count / 2,
                closers,
            },
        }
    }

    /// `WCC(K ∪ {c})` for a non-member `c`, without modifying the state.
    pub fn wcc_with(&self, ev: &mut WccEvaluator<'_>, c: ArticleId) -> f64 {
        self.objective_with(ev, c) / (self.members.len() + 1) as f64
    }

    /// `|K ∪ {c}| * WCC(K ∪ {c})` for a non-member `c`.
    pub fn objective_with(&self, ev: &mut WccEvaluator<'_>, c: ArticleId) -> f64 {
        debug_assert!(!self.contains(c));
        let join = self.join(ev.graph(), c);
        let others = self.members.len();
        let mut sum = 0.0;
        let mut newcomer_added = false;
        for (&x, &inside) in &self.members {
            if !newcomer_added && c < x {
                sum += vertex_score(join.newcomer, ev.global(c), others);
                newcomer_added = true;
            }
            let inside = match join.deltas.get(&x) {
                Some(&(t, v)) => TriangleStats {
                    triangles: inside.triangles + t,
                    closers: inside.closers + v,
                },
                None => inside,
            };
            sum += vertex_score(inside, ev.global(x), others);
        }
        if !newcomer_added {
            sum += vertex_score(join.newcomer, ev.global(c), others);
        }
        sum
    }

    /// Number of members adjacent to `c` in the undirected view.
    pub fn links_into(&self, g: &KnowledgeGraph, c: ArticleId) -> usize {
        g.undirected_neighbors(c)
            .iter()
            .filter(|v| self.contains(**v))
            .count()
    }

    pub fn insert(&mut self, g: &KnowledgeGraph, c: ArticleId) {
        if self.contains(c) {
            return;
        }
        let join = self.join(g, c);
        for (x, (t, v)) in join.deltas {
            let s = self.members.get_mut(&x).expect("delta for member");
            s.triangles += t;
            s.closers += v;
        }
        self.members.insert(c, join.newcomer);
    }

    pub fn remove(&mut self, g: &KnowledgeGraph, a: ArticleId) {
        if self.members.remove(&a).is_none() {
            return;
        }
        let join = self.join(g, a);
        for (x, (t, v)) in join.deltas {
            let s = self.members.get_mut(&x).expect("delta for member");
            s.triangles -= t;
            s.closers -= v;
        }
    }
}
