//! Brute-force reference implementations over adjacency matrices.

#![allow(dead_code)]

use qexpand_core::graph::ArticleId;
use qexpand_core::KnowledgeGraph;

/// Graph with articles `0..n` titled `v0..v{n-1}`, keys equal to ids.
pub fn numbered_graph(n: usize, edges: &[(usize, usize)]) -> KnowledgeGraph {
    let nodes: String = (0..n).map(|i| format!("{i}\tv{i}\t-\n")).collect();
    let edges: String = edges.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    KnowledgeGraph::load(nodes.as_bytes(), edges.as_bytes()).unwrap()
}

pub fn id(i: usize) -> ArticleId {
    ArticleId::new(i as u32)
}

/// Undirected adjacency, self-loops ignored.
pub struct Matrix {
    pub n: usize,
    adj: Vec<Vec<bool>>,
    directed: Vec<Vec<bool>>,
}

impl Matrix {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Matrix {
        let mut adj = vec![vec![false; n]; n];
        let mut directed = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
                directed[a][b] = true;
            }
        }
        Matrix { n, adj, directed }
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn arc(&self, a: usize, b: usize) -> bool {
        self.directed[a][b]
    }

    /// Triangles through `x` whose other two vertices satisfy `keep`.
    pub fn triangles(&self, x: usize, keep: impl Fn(usize) -> bool) -> u64 {
        let mut t = 0;
        for y in 0..self.n {
            for z in y + 1..self.n {
                if y != x
                    && z != x
                    && keep(y)
                    && keep(z)
                    && self.adj[x][y]
                    && self.adj[x][z]
                    && self.adj[y][z]
                {
                    t += 1;
                }
            }
        }
        t
    }

    /// Vertices satisfying `keep` that close a triangle with `x` through any third vertex.
    pub fn closers(&self, x: usize, keep: impl Fn(usize) -> bool) -> u64 {
        (0..self.n)
            .filter(|&y| y != x && keep(y) && self.adj[x][y])
            .filter(|&y| (0..self.n).any(|z| z != x && z != y && self.adj[x][z] && self.adj[y][z]))
            .count() as u64
    }

    pub fn wcc_vertex(&self, x: usize, k: &[usize]) -> f64 {
        let inside = |v: usize| v != x && k.contains(&v);
        let t_all = self.triangles(x, |_| true);
        if t_all == 0 {
            return 0.0;
        }
        let t_in = self.triangles(x, inside);
        let vt_all = self.closers(x, |_| true);
        let vt_out = self.closers(x, |v| !k.contains(&v));
        (t_in as f64 / t_all as f64) * (vt_all as f64 / ((k.len() - 1) as u64 + vt_out) as f64)
    }

    /// Member scores summed in ascending order.
    pub fn objective(&self, k: &[usize]) -> f64 {
        let mut sorted = k.to_vec();
        sorted.sort_unstable();
        sorted.iter().map(|&x| self.wcc_vertex(x, &sorted)).sum()
    }

    pub fn wcc(&self, k: &[usize]) -> f64 {
        self.objective(k) / k.len() as f64
    }

    /// Every minimum-length simple directed path from `s` to a target other
    /// than `s`, up to `max_hops` arcs, sorted.
    pub fn shortest_paths(&self, s: usize, targets: &[usize], max_hops: usize) -> Vec<Vec<usize>> {
        let mut all = Vec::new();
        let mut stack = vec![s];
        self.walk(&mut stack, targets, max_hops, &mut all);
        let Some(best) = all.iter().map(Vec::len).min() else {
            return all;
        };
        let mut out: Vec<_> = all.into_iter().filter(|p| p.len() == best).collect();
        out.sort();
        out
    }

    fn walk(&self, stack: &mut Vec<usize>, targets: &[usize], max_hops: usize, out: &mut Vec<Vec<usize>>) {
        let u = *stack.last().unwrap();
        if stack.len() > 1 && targets.contains(&u) {
            out.push(stack.clone());
        }
        if stack.len() > max_hops {
            return;
        }
        for v in 0..self.n {
            if self.directed[u][v] && !stack.contains(&v) {
                stack.push(v);
                self.walk(stack, targets, max_hops, out);
                stack.pop();
            }
        }
    }
}

/// Reference run of the average-WCC growth procedure. Returns the final
/// members (sorted) and the accepted candidates in order.
pub fn grow(m: &Matrix, seed: &[usize], round_cap: usize) -> (Vec<usize>, Vec<usize>) {
    let mut k: Vec<usize> = seed.to_vec();
    k.sort_unstable();
    k.dedup();
    let mut accepted = Vec::new();
    for _ in 0..round_cap {
        let start = m.wcc(&k);
        loop {
            let base = m.objective(&k);
            let mut best = base;
            let mut pick = None;
            for c in 0..m.n {
                if k.contains(&c) || !k.iter().any(|&x| m.adjacent(x, c)) {
                    continue;
                }
                let mut with = k.clone();
                with.push(c);
                let o = m.objective(&with);
                if o > best {
                    best = o;
                    pick = Some(c);
                }
            }
            let Some(c) = pick else { break };
            k.push(c);
            k.sort_unstable();
            accepted.push(c);
        }
        loop {
            let threshold = m.wcc(&k) / 4.0;
            let before = k.len();
            for x in k.clone() {
                if k.contains(&x) && m.wcc_vertex(x, &k) < threshold {
                    k.retain(|&v| v != x);
                    if k.is_empty() {
                        break;
                    }
                }
            }
            if k.is_empty() || k.len() == before {
                break;
            }
        }
        if k.is_empty() {
            let mut s = seed.to_vec();
            s.sort_unstable();
            s.dedup();
            return (s, accepted);
        }
        if m.wcc(&k) == start {
            break;
        }
    }
    (k, accepted)
}
