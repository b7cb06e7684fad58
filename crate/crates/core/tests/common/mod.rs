//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's own oracle module.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::io::Write;

use bclique::graph::{gen_graph, Edge, Graph, GraphKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Writes straight to the process stderr so the line survives output capture.
pub fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

/// 200-ish seeded graphs with `n <= max_n`, mixing sparse, dense and
/// structured families.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = match i % 10 {
            0 => rng.gen_range(1..=4),
            _ => rng.gen_range(3..=max_n),
        };
        let kind = match i % 9 {
            0 => GraphKind::Path,
            1 if n >= 3 => GraphKind::Cycle,
            2 => GraphKind::Star,
            3 => GraphKind::RandomForest,
            4 => GraphKind::RandomDegenerate(rng.gen_range(1..=4)),
            5 => GraphKind::Gnp((rng.gen_range(0.5..1.5) / n as f64).min(1.0)),
            6 => GraphKind::Gnp((rng.gen_range(1.5..4.0) / n as f64).min(1.0)),
            7 if n <= 12 => GraphKind::Complete,
            _ => GraphKind::Gnp(0.15),
        };
        let seed = rng.gen::<u64>();
        let g = gen_graph(kind, n, seed).unwrap();
        out.push((format!("#{i} {kind} n={n} seed={seed}"), g));
    }
    out
}

pub fn bfs_labels(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                if label[u] == usize::MAX {
                    label[u] = s;
                    queue.push_back(u);
                }
            }
        }
    }
    label
}

/// Edges of `forest` belong to `g`, form no cycle, and connect every
/// component of `g`.
pub fn forest_is_maximal(g: &Graph, forest: &[Edge]) -> bool {
    if !forest.iter().all(|e| e.0 < e.1 && g.has_edge(e.0, e.1)) {
        return false;
    }
    let f = match Graph::from_edges(g.n(), forest.iter().map(|e| (e.0, e.1))) {
        Ok(f) => f,
        Err(_) => return false,
    };
    let components = |labels: &[usize]| labels.iter().enumerate().filter(|(v, l)| v == *l).count();
    let lf = bfs_labels(&f);
    lf == bfs_labels(g) && forest.len() + components(&lf) == g.n()
}

/// Brute-force peel: rescans every degree from scratch each step.
pub fn naive_peel(g: &Graph, d: usize) -> (Vec<(usize, Vec<usize>)>, Vec<usize>) {
    let mut alive = vec![true; g.n()];
    let mut seq = Vec::new();
    loop {
        let pick = (0..g.n()).find(|&v| alive[v] && g.neighbors(v).iter().filter(|&&u| alive[u]).count() <= d);
        match pick {
            None => break,
            Some(v) => {
                alive[v] = false;
                seq.push((v, g.neighbors(v).iter().copied().filter(|&u| alive[u]).collect()));
            }
        }
    }
    (seq, (0..g.n()).filter(|&v| alive[v]).collect())
}

/// Length of the shortest cycle through edge `(u, v)`, if any.
fn shortest_cycle_through(g: &Graph, u: usize, v: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[u] = 0;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if (x == u && y == v) || dist[y] != usize::MAX {
                continue;
            }
            dist[y] = dist[x] + 1;
            if y == v {
                return Some(dist[y] + 1);
            }
            queue.push_back(y);
        }
    }
    None
}

/// Shortest cycle length in `g`, if `g` has a cycle.
pub fn girth(g: &Graph) -> Option<usize> {
    g.edges().iter().filter_map(|e| shortest_cycle_through(g, e.0, e.1)).min()
}

pub fn ceil_log2(x: u128) -> u64 {
    if x <= 1 {
        0
    } else {
        128 - u64::from((x - 1).leading_zeros())
    }
}
