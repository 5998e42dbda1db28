//! The knowledge graph: articles, redirects and directed links.
//!
//! Articles get dense [`ArticleId`]s in the order they appear in the nodes
//! file. Redirect chains are collapsed to their terminal article while
//! loading, and every link touching a redirect is moved onto that article,
//! so adjacency only ever mentions real concepts.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{Phrase, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArticleId(u32);

impl ArticleId {
    pub fn new(index: u32) -> ArticleId {
        ArticleId(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ArticleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub id: ArticleId,
    /// Identifier used in the source TSV files.
    pub key: u64,
    pub title: Phrase,
    /// Title as written in the source, for display.
    pub raw_title: String,
    /// Terminal (non-redirect) article this one redirects to.
    pub redirect_target: Option<ArticleId>,
}

impl Article {
    pub fn is_redirect(&self) -> bool {
        self.redirect_target.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{source_name} line {line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },
    #[error("nodes line {line}: duplicate article id {key}")]
    DuplicateId { line: usize, key: u64 },
    #[error("nodes line {line}: title {title:?} duplicates an earlier title after normalization")]
    DuplicateTitle { line: usize, title: String },
    #[error("nodes line {line}: redirect target {target} is not a known article id")]
    UnknownRedirectTarget { line: usize, target: u64 },
    #[error("edges line {line}: unknown article id {key}")]
    UnknownEdgeEndpoint { line: usize, key: u64 },
    #[error("redirect cycle: {}", .0.iter().map(u64::to_string).collect::<Vec<_>>().join(" -> "))]
    RedirectCycle(Vec<u64>),
    #[error("article {0} is a redirect")]
    IsRedirect(ArticleId),
    #[error("I/O error reading {source_name}: {error}")]
    Io {
        source_name: &'static str,
        #[source]
        error: std::io::Error,
    },
}

/// One line of the nodes file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub line: usize,
    pub key: u64,
    pub title: String,
    pub redirect_to: Option<u64>,
}

/// One line of the edges file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub line: usize,
    pub src: u64,
    pub dst: u64,
}

/// Compressed adjacency: the neighbours of node `i` are
/// `targets[offsets[i]..offsets[i + 1]]`, sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<ArticleId>,
}

impl Csr {
    /// `pairs` must be sorted and deduplicated.
    fn from_sorted_pairs(node_count: usize, pairs: &[(ArticleId, ArticleId)]) -> Csr {
        let mut offsets = vec![0usize; node_count + 1];
        for &(src, _) in pairs {
            offsets[src.index() + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        Csr {
            offsets,
            targets: pairs.iter().map(|&(_, dst)| dst).collect(),
        }
    }

    fn row(&self, id: ArticleId) -> &[ArticleId] {
        let i = id.index();
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Immutable article graph with title and redirect indexes.
#[derive(Debug, Clone)]
pub struct KnowledgeGraph {
    articles: Vec<Article>,
    out_adj: Csr,
    in_adj: Csr,
    undirected: Csr,
    redirects: Csr,
    title_index: HashMap<Phrase, ArticleId>,
    /// Every article (redirects included) whose title contains the term.
    term_postings: HashMap<Term, Vec<ArticleId>>,
    edge_count: usize,
}

impl KnowledgeGraph {
    /// Parses the nodes and edges TSV streams and builds the graph.
    pub fn load<N: Read, E: Read>(nodes: N, edges: E) -> Result<KnowledgeGraph, GraphError> {
        let nodes = parse_nodes(nodes)?;
        let edges = parse_edges(edges)?;
        KnowledgeGraph::from_records(nodes, edges)
    }

    pub fn from_records(
        nodes: Vec<NodeRecord>,
        edges: Vec<EdgeRecord>,
    ) -> Result<KnowledgeGraph, GraphError> {
        let mut by_key: HashMap<u64, ArticleId> = HashMap::with_capacity(nodes.len());
        let mut titles = Vec::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            let id = ArticleId(u32::try_from(i).expect("more than u32::MAX articles"));
            if by_key.insert(node.key, id).is_some() {
                return Err(GraphError::DuplicateId {
                    line: node.line,
                    key: node.key,
                });
            }
            let title = Phrase::parse(&node.title).ok_or_else(|| GraphError::Parse {
                source_name: "nodes",
                line: node.line,
                message: format!("title {:?} contains no terms", node.title),
            })?;
            titles.push(title);
        }

        let targets = collapse_redirects(&nodes, &by_key)?;

        let mut title_index = HashMap::with_capacity(nodes.len());
        let mut term_postings: HashMap<Term, Vec<ArticleId>> = HashMap::new();
        let mut articles = Vec::with_capacity(nodes.len());
        for ((node, title), target) in nodes.into_iter().zip(titles).zip(targets) {
            let id = ArticleId(articles.len() as u32);
            if title_index.insert(title.clone(), id).is_some() {
                return Err(GraphError::DuplicateTitle {
                    line: node.line,
                    title: node.title,
                });
            }
            for term in title.term_set() {
                term_postings.entry(term.clone()).or_default().push(id);
            }
            articles.push(Article {
                id,
                key: node.key,
                title,
                raw_title: node.title,
                redirect_target: target,
            });
        }

        let concept = |key: u64, line: usize| -> Result<ArticleId, GraphError> {
            let id = *by_key
                .get(&key)
                .ok_or(GraphError::UnknownEdgeEndpoint { line, key })?;
            Ok(articles[id.index()].redirect_target.unwrap_or(id))
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for e in &edges {
            let src = concept(e.src, e.line)?;
            let dst = concept(e.dst, e.line)?;
            if src != dst {
                pairs.push((src, dst));
            }
        }
        Ok(KnowledgeGraph::assemble(
            articles,
            pairs,
            title_index,
            term_postings,
        ))
    }

    fn assemble(
        articles: Vec<Article>,
        mut pairs: Vec<(ArticleId, ArticleId)>,
        title_index: HashMap<Phrase, ArticleId>,
        term_postings: HashMap<Term, Vec<ArticleId>>,
    ) -> KnowledgeGraph {
        let n = articles.len();
        pairs.sort_unstable();
        pairs.dedup();
        let out_adj = Csr::from_sorted_pairs(n, &pairs);

        let mut reversed: Vec<_> = pairs.iter().map(|&(s, d)| (d, s)).collect();
        reversed.sort_unstable();
        let in_adj = Csr::from_sorted_pairs(n, &reversed);

        let mut both = pairs.clone();
        both.extend_from_slice(&reversed);
        both.sort_unstable();
        both.dedup();
        let undirected = Csr::from_sorted_pairs(n, &both);

        let mut redirect_pairs: Vec<_> = articles
            .iter()
            .filter_map(|a| a.redirect_target.map(|t| (t, a.id)))
            .collect();
        redirect_pairs.sort_unstable();
        let redirects = Csr::from_sorted_pairs(n, &redirect_pairs);

        KnowledgeGraph {
            articles,
            out_adj,
            in_adj,
            undirected,
            redirects,
            title_index,
            term_postings,
            edge_count: pairs.len(),
        }
    }

    pub fn article_count(&self) -> usize {
        self.articles.len()
    }

    pub fn redirect_count(&self) -> usize {
        self.redirects.targets.len()
    }

    /// Number of distinct directed links between non-redirect articles.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn article(&self, id: ArticleId) -> &Article {
        &self.articles[id.index()]
    }

    pub fn title(&self, id: ArticleId) -> &Phrase {
        &self.articles[id.index()].title
    }

    pub fn by_key(&self, key: u64) -> Option<ArticleId> {
        // Linear, only used by tooling and tests.
        self.articles.iter().find(|a| a.key == key).map(|a| a.id)
    }

    /// Article whose normalized title equals `p` exactly, redirect or not.
    pub fn lookup_title(&self, p: &Phrase) -> Option<ArticleId> {
        self.title_index.get(p).copied()
    }

    /// Article titled `p`, with redirects followed to their target.
    pub fn resolve_title(&self, p: &Phrase) -> Option<ArticleId> {
        self.lookup_title(p)
            .map(|id| self.article(id).redirect_target.unwrap_or(id))
    }

    /// Redirect articles pointing at `id`, ascending.
    pub fn redirect_ids(&self, id: ArticleId) -> &[ArticleId] {
        self.redirects.row(id)
    }

    /// Titles of every redirect of `id` (the alias set, without `id`'s own title).
    pub fn redirects_of(&self, id: ArticleId) -> Result<Vec<&Phrase>, GraphError> {
        if self.article(id).is_redirect() {
            return Err(GraphError::IsRedirect(id));
        }
        Ok(self.redirect_ids(id).iter().map(|&r| self.title(r)).collect())
    }

    pub fn out_neighbors(&self, id: ArticleId) -> &[ArticleId] {
        self.out_adj.row(id)
    }

    pub fn in_neighbors(&self, id: ArticleId) -> &[ArticleId] {
        self.in_adj.row(id)
    }

    /// Neighbours in the undirected view: linked in either direction.
    pub fn undirected_neighbors(&self, id: ArticleId) -> &[ArticleId] {
        self.undirected.row(id)
    }

    pub fn neighbors(&self, id: ArticleId, direction: Direction) -> Vec<ArticleId> {
        match direction {
            Direction::Out => self.out_neighbors(id).to_vec(),
            Direction::In => self.in_neighbors(id).to_vec(),
            Direction::Both => self.undirected_neighbors(id).to_vec(),
        }
    }

    pub fn has_edge(&self, src: ArticleId, dst: ArticleId) -> bool {
        self.out_neighbors(src).binary_search(&dst).is_ok()
    }

    pub fn adjacent_undirected(&self, a: ArticleId, b: ArticleId) -> bool {
        self.undirected_neighbors(a).binary_search(&b).is_ok()
    }

    /// All articles (redirects included) whose title contains `term`.
    pub fn articles_with_term(&self, term: &Term) -> &[ArticleId] {
        self.term_postings.get(term).map_or(&[], Vec::as_slice)
    }

    /// Every minimum-length directed path from `source` to the nearest
    /// members of `targets` (excluding `source` itself), at most `max_hops`
    /// links long.
    ///
    /// All returned paths have the same length `d`, the smallest distance
    /// from `source` to any reachable target. Paths are sorted by their
    /// article-id sequence.
    pub fn shortest_paths(
        &self,
        source: ArticleId,
        targets: &BTreeSet<ArticleId>,
        max_hops: usize,
    ) -> Vec<Vec<ArticleId>> {
        let is_target = |id: ArticleId| id != source && targets.contains(&id);
        // predecessors on shortest paths, for every node discovered so far
        let mut preds: HashMap<ArticleId, Vec<ArticleId>> = HashMap::new();
        preds.insert(source, Vec::new());
        let mut frontier = vec![source];
        let mut hits = Vec::new();

        for _ in 0..max_hops {
            let mut next: Vec<ArticleId> = Vec::new();
            let mut discovered: HashMap<ArticleId, Vec<ArticleId>> = HashMap::new();
            for &u in &frontier {
                for &v in self.out_neighbors(u) {
                    if preds.contains_key(&v) {
                        continue;
                    }
                    let entry = discovered.entry(v).or_default();
                    if entry.is_empty() {
                        next.push(v);
                    }
                    entry.push(u);
                }
            }
            preds.extend(discovered);
            hits.extend(next.iter().copied().filter(|&v| is_target(v)));
            if !hits.is_empty() || next.is_empty() {
                break;
            }
            frontier = next;
        }

        hits.sort_unstable();
        let mut paths = Vec::new();
        for target in hits {
            let mut stack = vec![target];
            unwind(&preds, source, &mut stack, &mut paths);
        }
        paths.sort();
        paths
    }

    /// Triangle counts for `x` in the undirected view, restricted to `s`.
    pub fn triangle_stats(&self, x: ArticleId, s: &BTreeSet<ArticleId>) -> TriangleStats {
        self.triangle_stats_by(x, |v| s.contains(&v))
    }

    /// Triangles of `x` anywhere in the graph.
    pub fn triangle_stats_global(&self, x: ArticleId) -> TriangleStats {
        self.triangle_stats_by(x, |_| true)
    }

    /// `triangles`: triangles through `x` whose other two vertices both
    /// satisfy `in_set`. `closers`: vertices satisfying `in_set` that close
    /// at least one triangle with `x`, with the third vertex unrestricted.
    pub fn triangle_stats_by(&self, x: ArticleId, in_set: impl Fn(ArticleId) -> bool) -> TriangleStats {
        let nx = self.undirected_neighbors(x);
        let mut triangles = 0u64;
        let mut closers = 0u64;
        for &y in nx.iter().filter(|&&y| y != x && in_set(y)) {
            let ny = self.undirected_neighbors(y);
            let mut closes = false;
            for_each_common(nx, ny, |z| {
                if z == x || z == y {
                    return;
                }
                closes = true;
                if z > y && in_set(z) {
                    triangles += 1;
                }
            });
            if closes {
                closers += 1;
            }
        }
        TriangleStats { triangles, closers }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TriangleStats {
    pub triangles: u64,
    pub closers: u64,
}

fn unwind(
    preds: &HashMap<ArticleId, Vec<ArticleId>>,
    source: ArticleId,
    stack: &mut Vec<ArticleId>,
    out: &mut Vec<Vec<ArticleId>>,
) {
    let top = *stack.last().expect("non-empty stack");
    if top == source {
        out.push(stack.iter().rev().copied().collect());
        return;
    }
    for &p in &preds[&top] {
        stack.push(p);
        unwind(preds, source, stack, out);
        stack.pop();
    }
}

/// Calls `f` for every element present in both sorted slices.
pub(crate) fn for_each_common(a: &[ArticleId], b: &[ArticleId], mut f: impl FnMut(ArticleId)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Resolves each node's redirect chain to its terminal article.
fn collapse_redirects(
    nodes: &[NodeRecord],
    by_key: &HashMap<u64, ArticleId>,
) -> Result<Vec<Option<ArticleId>>, GraphError> {
    let mut next: Vec<Option<ArticleId>> = Vec::with_capacity(nodes.len());
    for node in nodes {
        next.push(match node.redirect_to {
            None => None,
            Some(target) => Some(*by_key.get(&target).ok_or(GraphError::UnknownRedirectTarget {
                line: node.line,
                target,
            })?),
        });
    }

    let mut resolved: Vec<Option<ArticleId>> = vec![None; nodes.len()];
    for start in 0..nodes.len() {
        if next[start].is_none() || resolved[start].is_some() {
            continue;
        }
        let mut chain = vec![start];
        let mut on_chain: HashSet<usize> = HashSet::from([start]);
        let terminal = loop {
            let cur = *chain.last().unwrap();
            match next[cur] {
                None => break ArticleId(cur as u32),
                Some(t) => {
                    let t = t.index();
                    if let Some(done) = resolved[t] {
                        break done;
                    }
                    if !on_chain.insert(t) {
                        let from = chain.iter().position(|&c| c == t).unwrap();
                        let mut cycle: Vec<u64> = chain[from..].iter().map(|&c| nodes[c].key).collect();
                        cycle.push(nodes[t].key);
                        return Err(GraphError::RedirectCycle(cycle));
                    }
                    chain.push(t);
                }
            }
        };
        for c in chain {
            if next[c].is_some() {
                resolved[c] = Some(terminal);
            }
        }
    }
    Ok(resolved)
}

fn lines<R: Read>(
    source: R,
    source_name: &'static str,
) -> impl Iterator<Item = Result<(usize, String), GraphError>> {
    BufReader::new(source)
        .lines()
        .enumerate()
        .map(move |(i, l)| {
            l.map(|l| (i + 1, l))
                .map_err(|error| GraphError::Io { source_name, error })
        })
        .filter(|r| match r {
            Ok((_, l)) => !l.trim().is_empty() && !l.starts_with('#'),
            Err(_) => true,
        })
}

fn parse_id(field: &str, source_name: &'static str, line: usize) -> Result<u64, GraphError> {
    field.trim().parse().map_err(|_| GraphError::Parse {
        source_name,
        line,
        message: format!("invalid article id {field:?}"),
    })
}

/// Parses `id<TAB>title<TAB>redirect_target` records.
pub fn parse_nodes<R: Read>(source: R) -> Result<Vec<NodeRecord>, GraphError> {
    let mut out = Vec::new();
    for item in lines(source, "nodes") {
        let (line, text) = item?;
        let text = text.strip_suffix('\r').unwrap_or(&text);
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 3 {
            return Err(GraphError::Parse {
                source_name: "nodes",
                line,
                message: format!("expected 3 tab-separated columns, found {}", cols.len()),
            });
        }
        let key = parse_id(cols[0], "nodes", line)?;
        let redirect_to = match cols[2].trim() {
            "-" => None,
            other => Some(parse_id(other, "nodes", line)?),
        };
        out.push(NodeRecord {
            line,
            key,
            title: cols[1].to_string(),
            redirect_to,
        });
    }
    Ok(out)
}

/// Parses `src_id<TAB>dst_id` records.
pub fn parse_edges<R: Read>(source: R) -> Result<Vec<EdgeRecord>, GraphError> {
    let mut out = Vec::new();
    for item in lines(source, "edges") {
        let (line, text) = item?;
        let text = text.strip_suffix('\r').unwrap_or(&text);
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 2 {
            return Err(GraphError::Parse {
                source_name: "edges",
                line,
                message: format!("expected 2 tab-separated columns, found {}", cols.len()),
            });
        }
        out.push(EdgeRecord {
            line,
            src: parse_id(cols[0], "edges", line)?,
            dst: parse_id(cols[1], "edges", line)?,
        });
    }
    Ok(out)
}
