//! Seeded graph generators. Output depends only on `(kind, n, seed)`.

use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphKind {
    Path,
    Cycle,
    Complete,
    Star,
    /// Erdős–Rényi with edge probability `p`.
    Gnp(f64),
    RandomForest,
    /// Each node joins up to `d` earlier nodes, then ids are shuffled.
    RandomDegenerate(usize),
}

impl GraphKind {
    /// Parses `name` with its numeric parameters. The parameter may also be
    /// written inline, as in `gnp(0.1)` or `random_degenerate(3)`.
    pub fn parse(name: &str, params: &[f64]) -> Result<GraphKind, GraphError> {
        let (base, inline) = match name.split_once('(') {
            Some((base, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| GraphError::UnknownKind(name.into()))?;
                let value: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| GraphError::BadParams(format!("cannot parse {inner:?}")))?;
                (base.trim(), Some(value))
            }
            None => (name.trim(), None),
        };
        let param = inline.or_else(|| params.first().copied());
        let need = |what: &str| param.ok_or_else(|| GraphError::BadParams(format!("{base} needs {what}")));

        Ok(match base {
            "path" => GraphKind::Path,
            "cycle" => GraphKind::Cycle,
            "complete" => GraphKind::Complete,
            "star" => GraphKind::Star,
            "random_forest" => GraphKind::RandomForest,
            "gnp" => {
                let p = need("an edge probability")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(GraphError::BadParams(format!("probability {p} not in [0, 1]")));
                }
                GraphKind::Gnp(p)
            }
            "random_degenerate" => {
                let d = need("a degeneracy bound")?;
                if d < 0.0 || d.fract() != 0.0 {
                    return Err(GraphError::BadParams(format!("degeneracy {d} is not a count")));
                }
                GraphKind::RandomDegenerate(d as usize)
            }
            _ => return Err(GraphError::UnknownKind(name.into())),
        })
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Path => write!(f, "path"),
            GraphKind::Cycle => write!(f, "cycle"),
            GraphKind::Complete => write!(f, "complete"),
            GraphKind::Star => write!(f, "star"),
            GraphKind::Gnp(p) => write!(f, "gnp({p})"),
            GraphKind::RandomForest => write!(f, "random_forest"),
            GraphKind::RandomDegenerate(d) => write!(f, "random_degenerate({d})"),
        }
    }
}

pub fn gen_graph(kind: GraphKind, n: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = match kind {
        GraphKind::Path => (1..n).map(|i| (i - 1, i)).collect(),
        GraphKind::Cycle => {
            if n < 3 {
                return Err(GraphError::BadParams(format!("a cycle needs n >= 3, got {n}")));
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect()
        }
        GraphKind::Complete => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        GraphKind::Star => (1..n).map(|i| (0, i)).collect(),
        GraphKind::Gnp(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::BadParams(format!("edge probability must lie in [0, 1], got {p}")));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        GraphKind::RandomForest => {
            // Random attachment with occasional new roots, over shuffled ids.
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges = Vec::new();
            for i in 1..n {
                if rng.gen_bool(0.8) {
                    let parent = rng.gen_range(0..i);
                    edges.push((order[parent], order[i]));
                }
            }
            edges
        }
        GraphKind::RandomDegenerate(d) => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges = Vec::new();
            for i in 1..n {
                let k = rng.gen_range(0..=d.min(i));
                for j in index::sample(&mut rng, i, k) {
                    edges.push((order[j], order[i]));
                }
            }
            edges
        }
    };
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{core_peel, has_short_cycle};

    #[test]
    fn parse_kinds() {
        assert_eq!(GraphKind::parse("cycle", &[]).unwrap(), GraphKind::Cycle);
        assert_eq!(GraphKind::parse("gnp", &[0.25]).unwrap(), GraphKind::Gnp(0.25));
        assert_eq!(
            GraphKind::parse("random_degenerate(3)", &[]).unwrap(),
            GraphKind::RandomDegenerate(3)
        );
        assert!(matches!(GraphKind::parse("hypercube", &[]), Err(GraphError::UnknownKind(_))));
        assert!(matches!(GraphKind::parse("gnp", &[]), Err(GraphError::BadParams(_))));
        assert!(matches!(GraphKind::parse("gnp", &[1.5]), Err(GraphError::BadParams(_))));
        assert!(matches!(GraphKind::parse("random_degenerate", &[2.5]), Err(GraphError::BadParams(_))));
    }

    #[test]
    fn cycle_of_four() {
        let g = gen_graph(GraphKind::Cycle, 4, 0).unwrap();
        assert_eq!(g, Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        assert!(gen_graph(GraphKind::Cycle, 2, 0).is_err());
    }

    #[test]
    fn forests_are_acyclic_and_one_degenerate() {
        for seed in 0..20 {
            let g = gen_graph(GraphKind::RandomForest, 30, seed).unwrap();
            assert!(!has_short_cycle(&g, 30));
            assert!(core_peel(&g, 1).remaining.is_empty());
        }
    }

    #[test]
    fn degenerate_graphs_peel_completely() {
        let g = gen_graph(GraphKind::RandomDegenerate(3), 32, 7).unwrap();
        assert!(core_peel(&g, 3).remaining.is_empty());
        assert!(g.edge_count() > 0);
    }

    #[test]
    fn deterministic() {
        for kind in [GraphKind::Gnp(0.2), GraphKind::RandomForest, GraphKind::RandomDegenerate(2)] {
            assert_eq!(gen_graph(kind, 40, 11).unwrap(), gen_graph(kind, 40, 11).unwrap());
        }
    }
}
