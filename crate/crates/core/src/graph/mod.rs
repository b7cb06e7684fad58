//! Undirected simple graphs on node ids `0..n`, plus the brute-force oracles
//! every protocol is checked against.

mod cycles;
mod dsu;
mod gen;
mod io;
mod oracle;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use cycles::{has_short_cycle, short_cycles, tilde_global, tilde_row_local, TildeResult};
pub use dsu::DisjointSet;
pub use gen::{gen_graph, GraphKind};
pub use io::{load_graph, serialize_graph};
pub use oracle::{ball, components_and_forest, core_peel, is_spanning_forest, Ball, Components, Peel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("node {node} out of range for n = {n}")]
    OutOfRange { node: usize, n: usize },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("unknown graph kind {0:?}")]
    UnknownKind(String),
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

/// A normalized undirected edge `(u, v)` with `u < v`.
///
/// The derived ordering is lexicographic on `(u, v)`, which is the fixed
/// total edge order used to pick the maximum edge of a cycle and to drive
/// every union-find pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Edge {
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Adjacency rows kept as sorted neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting self-loops, out-of-range ids and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for node in [u, v] {
            if node >= n {
                return Err(GraphError::OutOfRange { node, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(Edge::new(u, v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let back = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(back, u);
                Ok(())
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges, sorted in the canonical edge order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&&v| v > u).map(|&v| Edge(u, v)));
        }
        out
    }

    /// Row `v` of the adjacency matrix.
    pub fn row(&self, v: usize) -> Vec<bool> {
        let mut row = vec![false; self.n()];
        for &u in &self.adj[v] {
            row[u] = true;
        }
        row
    }

    /// Copy of the graph without the given edges.
    pub fn without_edges<'a, I>(&self, removed: I) -> Graph
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut g = self.clone();
        for e in removed {
            g.adj[e.0].retain(|&x| x != e.1);
            g.adj[e.1].retain(|&x| x != e.0);
        }
        g
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (v, row) in self.adj.iter().enumerate() {
            adj[perm[v]] = row.iter().map(|&u| perm[u]).collect();
            adj[perm[v]].sort_unstable();
        }
        Graph { adj }
    }
}
