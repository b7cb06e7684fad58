use std::collections::VecDeque;

use serde::Serialize;

use super::{DisjointSet, Edge, Graph, GraphError};

/// Connected components labeled by their smallest member, and a maximal
/// spanning forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub labels: Vec<usize>,
    pub forest: Vec<Edge>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(v, l)| v == *l).count()
    }
}

/// Union-find over the edges in canonical order.
pub fn components_and_forest(g: &Graph) -> Components {
    let mut ds = DisjointSet::new(g.n());
    let forest = g.edges().into_iter().filter(|e| ds.union(e.0, e.1)).collect();
    Components {
        labels: ds.min_labels(),
        forest,
    }
}

/// True iff `forest` is a maximal spanning forest of `g`: real edges, no
/// cycle, and one edge fewer than nodes per component.
pub fn is_spanning_forest(g: &Graph, forest: &[Edge]) -> bool {
    let mut ds = DisjointSet::new(g.n());
    let acyclic = forest.iter().all(|e| g.has_edge(e.0, e.1) && ds.union(e.0, e.1));
    acyclic && forest.len() == g.n() - components_and_forest(g).count()
}

/// Result of greedily peeling nodes of residual degree at most `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Peel {
    /// Removed nodes in order, with their neighbors still present at removal.
    pub sequence: Vec<(usize, Vec<usize>)>,
    /// The (d+1)-core, sorted.
    pub remaining: Vec<usize>,
}

/// Repeatedly removes the smallest-id node whose residual degree is at
/// most `d` until none is left.
pub fn core_peel(g: &Graph, d: usize) -> Peel {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut sequence = Vec::new();

    while let Some(k) = (0..n).find(|&v| alive[v] && degree[v] <= d) {
        alive[k] = false;
        let live: Vec<usize> = g.neighbors(k).iter().copied().filter(|&u| alive[u]).collect();
        for &u in &live {
            degree[u] -= 1;
        }
        sequence.push((k, live));
    }
    Peel {
        sequence,
        remaining: (0..n).filter(|&v| alive[v]).collect(),
    }
}

/// The subgraph induced by the nodes within distance `radius` of `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    /// Member ids, sorted.
    pub members: Vec<usize>,
    /// Same id space as the source graph; only edges among members.
    pub graph: Graph,
}

impl Ball {
    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

pub fn ball(g: &Graph, center: usize, radius: usize) -> Result<Ball, GraphError> {
    let n = g.n();
    if center >= n {
        return Err(GraphError::OutOfRange { node: center, n });
    }
    let mut dist = vec![usize::MAX; n];
    dist[center] = 0;
    let mut queue = VecDeque::from([center]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| dist[v] != usize::MAX).collect();
    let mut graph = Graph::empty(n);
    for &v in &members {
        graph.adj[v] = g.neighbors(v).iter().copied().filter(|&u| dist[u] != usize::MAX).collect();
    }
    Ok(Ball {
        center,
        radius,
        members,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn forest_of_c4() {
        let c = components_and_forest(&cycle(4));
        assert_eq!(c.labels, vec![0; 4]);
        assert_eq!(c.forest, vec![Edge(0, 1), Edge(0, 3), Edge(1, 2)]);
    }

    #[test]
    fn forest_of_isolated_and_path() {
        let c = components_and_forest(&Graph::empty(2));
        assert_eq!(c.labels, vec![0, 1]);
        assert!(c.forest.is_empty());
        assert_eq!(c.count(), 2);
        let p = components_and_forest(&path(3));
        assert_eq!(p.forest, vec![Edge(0, 1), Edge(1, 2)]);
    }

    #[test]
    fn spanning_forest_check() {
        let c4 = cycle(4);
        assert!(is_spanning_forest(&c4, &[Edge(0, 1), Edge(1, 2), Edge(2, 3)]));
        assert!(!is_spanning_forest(&c4, &[Edge(0, 1), Edge(1, 2)]));
        assert!(!is_spanning_forest(&c4, &[Edge(0, 1), Edge(1, 2), Edge(0, 2)]));
        assert!(!is_spanning_forest(&c4, &[Edge(0, 1), Edge(1, 2), Edge(2, 3), Edge(0, 3)]));
    }

    #[test]
    fn peel_p4() {
        let p = core_peel(&path(4), 1);
        assert_eq!(
            p.sequence,
            vec![(0, vec![1]), (1, vec![2]), (2, vec![3]), (3, vec![])]
        );
        assert!(p.remaining.is_empty());
    }

    #[test]
    fn peel_c4() {
        let stuck = core_peel(&cycle(4), 1);
        assert!(stuck.sequence.is_empty());
        assert_eq!(stuck.remaining, vec![0, 1, 2, 3]);

        let full = core_peel(&cycle(4), 2);
        assert_eq!(
            full.sequence,
            vec![(0, vec![1, 3]), (1, vec![2]), (2, vec![3]), (3, vec![])]
        );
        assert!(full.remaining.is_empty());
    }

    #[test]
    fn balls() {
        let p4 = path(4);
        let b = ball(&p4, 1, 1).unwrap();
        assert_eq!(b.members, vec![0, 1, 2]);
        assert_eq!(b.graph.edges(), vec![Edge(0, 1), Edge(1, 2)]);

        let whole = ball(&p4, 0, 3).unwrap();
        assert_eq!(whole.graph, p4);

        let lonely = ball(&Graph::empty(3), 2, 3).unwrap();
        assert_eq!(lonely.members, vec![2]);
        assert_eq!(lonely.graph.edge_count(), 0);

        assert!(ball(&p4, 4, 1).is_err());
    }

    #[test]
    fn ball_includes_edges_between_frontier_nodes() {
        // Triangle 0-1-2 with r = 1 around 0: edge (1, 2) is induced.
        let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(ball(&g, 0, 1).unwrap().graph, g);
    }
}
