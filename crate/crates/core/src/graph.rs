//! Simple undirected graphs and the edge-list file format.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..n`.
///
/// Edges are stored normalized as `(u, v)` with `u < v`, so the set is
/// free of duplicates and self-loops by construction and iterates in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at node {u}")));
            }
            if !g.edges.insert(normalize(u, v)) {
                return Err(Error::param(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order, each with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&normalize(u, v))
    }

    /// Inserts an edge; returns false if it was already present.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.edges.insert(normalize(u, v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Number of connected components, counted by breadth-first search.
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Complement graph on the same node set.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.edges.contains(&(u, v)) {
                    g.edges.insert((u, v));
                }
            }
        }
        g
    }

    /// Serializes to the edge-list text format: a `# n=<N>` header followed
    /// by one `u v` line per edge, `u < v`, in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.edges.len());
        let _ = writeln!(out, "# n={}", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate();
        let n = loop {
            match lines.next() {
                Some((_, line)) if line.trim().is_empty() => continue,
                Some((_, line)) => {
                    let header = line.trim();
                    let value = header
                        .strip_prefix('#')
                        .map(str::trim)
                        .and_then(|h| h.strip_prefix("n="))
                        .ok_or_else(|| {
                            Error::Parse(format!("expected `# n=<N>` header, found `{header}`"))
                        })?;
                    break value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad node count `{value}`: {e}")))?;
                }
                None => return Err(Error::Parse("empty graph file".into())),
            }
        };
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut endpoint = || -> Result<usize> {
                let tok = fields
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected `u v`", lineno + 1)))?;
                tok.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {}: `{tok}`: {e}", lineno + 1)))
            };
            let u = endpoint()?;
            let v = endpoint()?;
            if fields.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: trailing fields after `u v`",
                    lineno + 1
                )));
            }
            edges.push((u, v));
        }
        Graph::from_edges(n, edges)
    }
}

#[inline]
fn normalize(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}
