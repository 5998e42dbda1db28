//! Reference implementations for the acceptance suite.

use std::collections::BTreeSet;

/// Undirected adjacency matrix.
pub struct Undirected {
    pub n: usize,
    adj: Vec<Vec<bool>>,
}

impl Undirected {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Undirected {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        Undirected { n, adj }
    }

    /// Every triangle of the graph, as sorted triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if self.adj[a][b] && self.adj[a][c] && self.adj[b][c] {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    pub fn wcc_vertex(&self, x: usize, k: &BTreeSet<usize>) -> f64 {
        let mine: Vec<[usize; 3]> = self.triangles().into_iter().filter(|t| t.contains(&x)).collect();
        if mine.is_empty() {
            return 0.0;
        }
        let others = |t: &[usize; 3]| t.iter().copied().filter(|&v| v != x).collect::<Vec<_>>();
        let t_in = mine
            .iter()
            .filter(|t| others(t).iter().all(|v| k.contains(v)))
            .count();
        let closers: BTreeSet<usize> = mine.iter().flat_map(others).collect();
        let vt_out = closers.iter().filter(|v| !k.contains(v)).count();
        (t_in as f64 / mine.len() as f64) * (closers.len() as f64 / ((k.len() - 1) + vt_out) as f64)
    }

    pub fn wcc(&self, k: &BTreeSet<usize>) -> f64 {
        k.iter().map(|&x| self.wcc_vertex(x, k)).sum::<f64>() / k.len() as f64
    }
}

/// Hierarchy levels 2..=L by breadth-first placement inside the community.
pub fn hierarchy_levels(
    members: &BTreeSet<usize>,
    titles: &[Vec<String>],
    arcs: &BTreeSet<(usize, usize)>,
    q: &BTreeSet<String>,
    prose: bool,
) -> Vec<Vec<usize>> {
    let admits = |a: usize| {
        let t: BTreeSet<String> = titles[a].iter().cloned().collect();
        if prose {
            q.is_subset(&t)
        } else {
            t.is_subset(q)
        }
    };
    let mut placed = BTreeSet::new();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = members.iter().copied().filter(|&a| admits(a)).collect();
    while !current.is_empty() {
        placed.extend(current.iter().copied());
        let next = members
            .iter()
            .copied()
            .filter(|b| !placed.contains(b) && current.iter().any(|a| arcs.contains(&(*a, *b))))
            .collect();
        levels.push(current);
        current = next;
    }
    levels
}

/// Parsed form of a rendered text query.
#[derive(Debug, PartialEq)]
pub enum Node {
    Combine(Vec<String>),
    Phrases(Vec<(f64, String, Vec<String>)>),
}

pub struct Parser<'a> {
    s: &'a str,
}

impl<'a> Parser<'a> {
    pub fn parse(s: &'a str) -> Result<Vec<(f64, Node)>, String> {
        let mut p = Parser { s };
        p.expect("#weight(")?;
        let mut branches = vec![p.branch()?];
        while p.eat(" ") {
            branches.push(p.branch()?);
        }
        p.expect(")")?;
        if !p.s.is_empty() {
            return Err(format!("trailing input {:?}", p.s));
        }
        Ok(branches)
    }

    fn eat(&mut self, tok: &str) -> bool {
        match self.s.strip_prefix(tok) {
            Some(rest) => {
                self.s = rest;
                true
            }
            None => false,
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), String> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(format!("expected {tok:?} at {:?}", self.s))
        }
    }

    fn float(&mut self) -> Result<f64, String> {
        let end = self
            .s
            .find(|c: char| !(c.is_ascii_digit() || c == '.'))
            .unwrap_or(self.s.len());
        let (num, rest) = self.s.split_at(end);
        self.s = rest;
        num.parse().map_err(|_| format!("bad number {num:?}"))
    }

    fn terms(&mut self) -> Result<Vec<String>, String> {
        let end = self.s.find(')').ok_or("unclosed operator")?;
        let (inner, rest) = self.s.split_at(end);
        self.s = &rest[1..];
        let terms: Vec<String> = inner.split(' ').map(str::to_string).collect();
        if terms
            .iter()
            .any(|t| t.is_empty() || !t.chars().all(char::is_alphanumeric))
        {
            return Err(format!("bad term list {inner:?}"));
        }
        Ok(terms)
    }

    fn branch(&mut self) -> Result<(f64, Node), String> {
        let w = self.float()?;
        self.expect(" ")?;
        if self.eat("#combine(") {
            return Ok((w, Node::Combine(self.terms()?)));
        }
        self.expect("#weight(")?;
        let mut entries = Vec::new();
        loop {
            let ew = self.float()?;
            self.expect(" #")?;
            let end = self.s.find('(').ok_or("operator without arguments")?;
            let op = self.s[..end].to_string();
            if op != "od1" && !(op.starts_with("uw") && op[2..].parse::<usize>().is_ok()) {
                return Err(format!("unknown operator {op:?}"));
            }
            self.s = &self.s[end + 1..];
            entries.push((ew, op, self.terms()?));
            if !self.eat(" ") {
                break;
            }
        }
        self.expect(")")?;
        Ok((w, Node::Phrases(entries)))
    }
}
