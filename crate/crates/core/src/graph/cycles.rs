//! Short cycles and the short-cycle-free subgraph.
//!
//! Removing the maximum edge (in canonical edge order) of every cycle of
//! length at most `2r` leaves a graph with girth above `2r` and the same
//! connected components. Two independent routes compute it here: a global
//! enumeration of short cycles, and a per-node rule that only looks inside
//! the node's radius-`r` ball.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{Ball, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TildeResult {
    #[serde(skip)]
    pub tilde: Graph,
    pub removed: BTreeSet<Edge>,
}

/// Depth-first walk from `anchor` over nodes greater than `anchor`, calling
/// `found` with every simple cycle of length at most `max_len` through it.
/// Each cycle is reported once, oriented so its second node is smaller than
/// its last. Returning false from `found` stops the walk.
fn walk_cycles<F>(g: &Graph, anchor: usize, max_len: usize, found: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    fn extend<F: FnMut(&[usize]) -> bool>(
        g: &Graph,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        max_len: usize,
        found: &mut F,
    ) -> bool {
        let anchor = path[0];
        let tail = *path.last().unwrap();
        for &next in g.neighbors(tail) {
            if next == anchor && path.len() >= 3 && path[1] < tail && !found(path) {
                return false;
            }
            if next <= anchor || on_path[next] || path.len() == max_len {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            let go_on = extend(g, path, on_path, max_len, found);
            on_path[next] = false;
            path.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    let mut on_path = vec![false; g.n()];
    on_path[anchor] = true;
    let mut path = vec![anchor];
    extend(g, &mut path, &mut on_path, max_len, found)
}

/// Every simple cycle of length at most `max_len`, each listed once starting
/// from its smallest node.
pub fn short_cycles(g: &Graph, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for anchor in 0..g.n() {
        walk_cycles(g, anchor, max_len, &mut |c: &[usize]| {
            out.push(c.to_vec());
            true
        });
    }
    out
}

/// True iff `g` has a simple cycle of length at most `max_len`.
pub fn has_short_cycle(g: &Graph, max_len: usize) -> bool {
    (0..g.n()).any(|anchor| !walk_cycles(g, anchor, max_len, &mut |_: &[usize]| false))
}

fn max_edge(cycle: &[usize]) -> Edge {
    (0..cycle.len())
        .map(|i| Edge::new(cycle[i], cycle[(i + 1) % cycle.len()]))
        .max()
        .expect("cycles are non-empty")
}

/// Drops the maximum edge of every cycle of length at most `2r`, found by
/// enumerating those cycles.
pub fn tilde_global(g: &Graph, r: usize) -> TildeResult {
    let mut removed = BTreeSet::new();
    for anchor in 0..g.n() {
        walk_cycles(g, anchor, 2 * r, &mut |c: &[usize]| {
            removed.insert(max_edge(c));
            true
        });
    }
    TildeResult {
        tilde: g.without_edges(&removed),
        removed,
    }
}

/// The center's row of the short-cycle-free graph, computed from its ball.
///
/// Edge `e = (v, u)` is the maximum of some cycle of length at most `2r`
/// exactly when `u` can be reached from `v` in at most `2r - 1` steps using
/// only edges smaller than `e`. Any such cycle stays within distance `r` of
/// `v`, so the ball holds everything needed.
pub fn tilde_row_local(ball: &Ball) -> Vec<usize> {
    let v = ball.center;
    let g = &ball.graph;
    let reach = (2 * ball.radius).saturating_sub(1);
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| !reachable_below(g, v, u, Edge::new(v, u), reach))
        .collect()
}

fn reachable_below(g: &Graph, from: usize, to: usize, bound: Edge, max_steps: usize) -> bool {
    let mut dist = vec![usize::MAX; g.n()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if dist[x] == max_steps {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX && Edge::new(x, y) < bound {
                if y == to {
                    return true;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn short_cycle_detection() {
        let c4 = cycle(4);
        assert!(!has_short_cycle(&c4, 3));
        assert!(has_short_cycle(&c4, 4));
        let tree = Graph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert!(!has_short_cycle(&tree, 10));
    }

    #[test]
    fn enumerates_each_cycle_once() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // 4 triangles and 3 four-cycles.
        assert_eq!(short_cycles(&k4, 3).len(), 4);
        assert_eq!(short_cycles(&k4, 4).len(), 7);
        assert_eq!(short_cycles(&cycle(4), 4), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn tilde_c4() {
        let t = tilde_global(&cycle(4), 2);
        assert_eq!(t.removed, BTreeSet::from([Edge(2, 3)]));
        assert_eq!(t.tilde.edges(), vec![Edge(0, 1), Edge(0, 3), Edge(1, 2)]);
    }

    #[test]
    fn tilde_leaves_long_cycles() {
        assert!(tilde_global(&cycle(5), 2).removed.is_empty());
        assert!(tilde_global(&cycle(3), 1).removed.is_empty());
    }

    #[test]
    fn local_rows() {
        let c4 = cycle(4);
        assert_eq!(tilde_row_local(&ball(&c4, 2, 2).unwrap()), vec![1]);
        assert_eq!(tilde_row_local(&ball(&c4, 0, 2).unwrap()), vec![1, 3]);
        let c5 = cycle(5);
        assert_eq!(tilde_row_local(&ball(&c5, 0, 2).unwrap()), vec![1, 4]);
    }
}
