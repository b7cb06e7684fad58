//! Oracle-equivalence suites behind `bclique verify`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{
    components_and_forest, core_peel, gen_graph, has_short_cycle, is_spanning_forest, tilde_global, Graph, GraphKind,
};
use crate::protocols::{connectivity_one_round_r, prune_one_round, spanning_forest_multiround, Epsilon};
use crate::sketch::{ceil_log2, SketchParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Small,
    Full,
}

impl Suite {
    fn graphs(self) -> usize {
        match self {
            Suite::Small => 24,
            Suite::Full => 200,
        }
    }

    fn max_n(self) -> usize {
        match self {
            Suite::Small => 24,
            Suite::Full => 64,
        }
    }

    fn sketch_grid(self) -> usize {
        match self {
            Suite::Small => 10,
            Suite::Full => 16,
        }
    }

    fn linearity_pairs(self) -> usize {
        match self {
            Suite::Small => 100,
            Suite::Full => 1000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> CheckResult {
        CheckResult {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(describe);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A deterministic mix of test graphs with `n <= max_n`.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(3..=max_n.max(3));
            let kind = match i % 8 {
                0 => GraphKind::Path,
                1 => GraphKind::Cycle,
                2 => GraphKind::Star,
                3 => GraphKind::RandomForest,
                4 => GraphKind::RandomDegenerate(rng.gen_range(1..=3)),
                5 => GraphKind::Gnp(rng.gen_range(1.0..3.0) / n as f64),
                6 if n <= 10 => GraphKind::Complete,
                _ => GraphKind::Gnp(rng.gen_range(0.5..2.0) / n as f64),
            };
            let s = rng.gen();
            let g = gen_graph(kind, n, s).expect("generator parameters are valid");
            (format!("{kind} n={n} seed={s}"), g)
        })
        .collect()
}

fn sketch_checks(max_n: usize) -> (CheckResult, CheckResult) {
    let mut roundtrip = CheckResult::new("sketch_roundtrip");
    let mut size = CheckResult::new("sketch_size_bound");
    for n in 1..=max_n {
        for d in 0..=3.min(n) {
            let params = match SketchParams::build(n, d) {
                Ok(p) => p,
                Err(e) => {
                    roundtrip.record(false, || format!("build({n}, {d}): {e}"));
                    continue;
                }
            };
            let bound = 2 * d as u64 * ceil_log2(&(n as u64 + 1).into()) + ceil_log2(&(n as u64).into()) + 2;
            size.record(params.modulus_bits() <= bound, || format!("({n}, {d}): log2 p too large"));

            let mut seen = HashSet::new();
            let mut ok = true;
            for mask in 0u32..(1 << n) {
                let weight = mask.count_ones() as usize;
                if weight > d {
                    continue;
                }
                let b: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let y = params.encode_bool(&b).unwrap();
                ok &= seen.insert(y.clone());
                ok &= params.decode_bool(&y, Some(weight)).ok().as_ref() == Some(&b);
            }
            roundtrip.record(ok, || format!("({n}, {d}): collision or round-trip failure"));
        }
    }
    (roundtrip, size)
}

fn linearity_check(max_n: usize, pairs: usize) -> CheckResult {
    let mut check = CheckResult::new("sketch_linearity");
    let mut rng = ChaCha8Rng::seed_from_u64(0x11ea);
    for n in [1, 4, max_n] {
        for d in 0..=3.min(n) {
            let params = SketchParams::build(n, d).unwrap();
            let bound = n as i64;
            for _ in 0..pairs {
                let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
                let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
                let sum: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
                let diff: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
                let (fu, fv) = (params.encode(&u).unwrap(), params.encode(&v).unwrap());
                let ok = params.encode(&sum).unwrap() == params.add(&fu, &fv)
                    && params.encode(&diff).unwrap() == params.sub(&fu, &fv);
                check.record(ok, || format!("({n}, {d}): u = {u:?}, v = {v:?}"));
            }
        }
    }
    check
}

fn pruning_check(graphs: &[(String, Graph)]) -> CheckResult {
    let mut check = CheckResult::new("pruning_equals_core_peel");
    for (name, g) in graphs {
        for d in 0..=3 {
            let ok = match prune_one_round(g, d) {
                Ok(run) => {
                    let oracle = core_peel(g, d);
                    run.result.sequence == oracle.sequence
                        && run.result.remaining == oracle.remaining
                        && run.transcript.rounds_used() == 1
                        && run.transcript.per_node_bits()
                            <= ceil_log2(&(g.n() as u64).into()) + run.params.modulus_bits()
                }
                Err(_) => false,
            };
            check.record(ok, || format!("{name}, d = {d}"));
        }
    }
    check
}

fn reconstruction_check(count: usize, max_n: usize) -> CheckResult {
    let mut check = CheckResult::new("degenerate_reconstruction");
    for i in 0..count {
        let d = 1 + i % 3;
        let n = 4 + (i * 7) % (max_n - 3);
        let g = gen_graph(GraphKind::RandomDegenerate(d), n, 1000 + i as u64).unwrap();
        let ok = prune_one_round(&g, d)
            .map(|run| run.result.fully_reconstructed && run.result.reconstructed.as_ref() == Some(&g))
            .unwrap_or(false);
        check.record(ok, || format!("random_degenerate({d}) n={n} seed={}", 1000 + i));
    }
    check
}

fn forest_check(graphs: &[(String, Graph)]) -> CheckResult {
    let mut check = CheckResult::new("spanning_forest_multiround");
    let epsilons = [Epsilon::one(), Epsilon::new(1, 2).unwrap(), Epsilon::new(1, 3).unwrap()];
    for (name, g) in graphs {
        let oracle = components_and_forest(g);
        let n_bits = ceil_log2(&(g.n() as u64).into());
        for eps in epsilons {
            let ok = match spanning_forest_multiround(g, eps) {
                Ok(run) => {
                    let budget = ceil_log2(&(g.n() as u64 + 1).into()) + run.neighbor_cap as u64 * n_bits;
                    run.transcript.rounds_used() <= eps.rounds()
                        && run.components.labels == oracle.labels
                        && is_spanning_forest(g, &run.components.forest)
                        && run.transcript.per_node_bits() <= budget
                }
                Err(_) => false,
            };
            check.record(ok, || format!("{name}, eps = {eps}"));
        }
    }
    check
}

fn radius_check(graphs: &[(String, Graph)]) -> CheckResult {
    let mut check = CheckResult::new("radius_connectivity");
    for (name, g) in graphs {
        let oracle = components_and_forest(g);
        for r in 1..=3 {
            let global = tilde_global(g, r);
            let ok = match connectivity_one_round_r(g, r) {
                Ok(run) => {
                    run.transcript.rounds_used() == 1
                        && run.tilde == global.tilde
                        && !has_short_cycle(&global.tilde, 2 * r)
                        && components_and_forest(&global.tilde).labels == oracle.labels
                        && run.components.labels == oracle.labels
                        && is_spanning_forest(g, &run.components.forest)
                        && run.components.forest.iter().all(|e| global.tilde.has_edge(e.0, e.1))
                }
                Err(_) => false,
            };
            check.record(ok, || format!("{name}, r = {r}"));
        }
    }
    check
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    let graphs = corpus(suite.graphs(), suite.max_n(), 20_240_501);
    let (roundtrip, size) = sketch_checks(suite.sketch_grid());
    vec![
        roundtrip,
        size,
        linearity_check(suite.sketch_grid(), suite.linearity_pairs()),
        pruning_check(&graphs),
        reconstruction_check(suite.graphs() / 2, suite.max_n()),
        forest_check(&graphs),
        radius_check(&graphs),
    ]
}
