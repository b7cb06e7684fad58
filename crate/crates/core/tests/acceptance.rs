//! Acceptance gate. Each test checks one criterion and prints a single
//! `criterion N: PASS|FAIL ...` line to stderr (bypassing output capture).

mod common;

use std::collections::HashSet;
use std::process::Command;
use std::time::Instant;

use bclique::graph::{ball, gen_graph, tilde_global, tilde_row_local, Graph, GraphKind};
use bclique::protocols::{connectivity_one_round_r, prune_one_round, spanning_forest_multiround, Epsilon};
use bclique::sketch::SketchParams;
use common::{bfs_labels, ceil_log2, corpus, forest_is_maximal, girth, naive_peel, report};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 0x5eed_0001;

/// Accumulates failures for one criterion and prints the verdict line.
struct Gate {
    id: u32,
    title: &'static str,
    cases: usize,
    failures: Vec<String>,
    started: Instant,
}

impl Gate {
    fn new(id: u32, title: &'static str) -> Gate {
        Gate {
            id,
            title,
            cases: 0,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn finish(self, time_limit_s: Option<f64>) {
        let elapsed = self.started.elapsed().as_secs_f64();
        let mut ok = self.failures.is_empty();
        let mut note = String::new();
        if let Some(limit) = time_limit_s {
            if elapsed > limit {
                ok = false;
                note = format!(" (limit {limit:.0}s exceeded)");
            }
        }
        report(&format!(
            "criterion {}: {} {} [{} cases, {} failures, {:.2}s{}]",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.title,
            self.cases,
            self.failures.len(),
            elapsed,
            note
        ));
        assert!(ok, "criterion {} failed: {:?}{note}", self.id, self.failures.iter().take(5).collect::<Vec<_>>());
    }
}

fn sketch_grid() -> impl Iterator<Item = (usize, usize)> {
    (1..=16usize).flat_map(|n| (0..=3.min(n)).map(move |d| (n, d)))
}

fn small(x: &num_bigint::BigUint) -> u128 {
    x.to_u128().expect("grid moduli fit in 128 bits")
}

#[test]
fn criterion_1_sketch_injectivity_and_round_trip() {
    let mut gate = Gate::new(1, "sketch injectivity and round-trip, n in 1..=16, d in 0..=3");
    for (n, d) in sketch_grid() {
        let params = SketchParams::build(n, d).unwrap();
        let (p, x) = (small(params.p()), small(params.xbar()));
        let powers: Vec<u128> = std::iter::successors(Some(1u128), |&a| Some(a * x % p)).take(n).collect();
        let mut seen = HashSet::new();
        for mask in 0u32..(1 << n) {
            let weight = mask.count_ones() as usize;
            if weight > d {
                continue;
            }
            let b: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let expected = (0..n).filter(|&i| b[i]).map(|i| powers[i]).sum::<u128>() % p;
            let y = params.encode_bool(&b).unwrap();
            let decoded = params.decode_bool(&y, None).ok();
            gate.check(
                small(y.value()) == expected && seen.insert(expected) && decoded.as_ref() == Some(&b),
                || format!("n={n} d={d} mask={mask:#b}"),
            );
        }
    }
    gate.finish(Some(60.0));
}

#[test]
fn criterion_2_sketch_size() {
    let mut gate = Gate::new(2, "ceil(log2 p) <= 2d*ceil(log2(n+1)) + ceil(log2 n) + 2");
    for (n, d) in sketch_grid() {
        let params = SketchParams::build(n, d).unwrap();
        let p = small(params.p());
        let lhs = ceil_log2(p);
        let rhs = 2 * d as u64 * ceil_log2(n as u128 + 1) + ceil_log2(n as u128) + 2;
        gate.check(lhs <= rhs && lhs == params.modulus_bits(), || format!("n={n} d={d}: {lhs} > {rhs}"));
    }
    gate.finish(None);
}

#[test]
fn criterion_3_linearity() {
    let mut gate = Gate::new(3, "encode(u +- v) = encode(u) +- encode(v) mod p, 1000 pairs per params");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, d) in sketch_grid() {
        let params = SketchParams::build(n, d).unwrap();
        let p = BigInt::from(params.p().clone());
        let bound = n as i64;
        for _ in 0..1000 {
            let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
            let sum: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let diff: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
            let value = |w: &[i64]| BigInt::from(params.encode(w).unwrap().into_value());
            let (eu, ev) = (value(&u), value(&v));
            let reduce = |z: BigInt| ((z % &p) + &p) % &p;
            gate.check(
                value(&sum) == reduce(&eu + &ev) && value(&diff) == reduce(&eu - &ev),
                || format!("n={n} d={d} u={u:?} v={v:?}"),
            );
        }
    }
    gate.finish(None);
}

#[test]
fn criterion_4_pruning_matches_core_peel() {
    let mut gate = Gate::new(4, "one-round d-pruning equals core peel on 200 graphs, d in 0..=3");
    for (name, g) in corpus(200, 64, CORPUS_SEED) {
        let n = g.n();
        for d in 0..=3 {
            let (sequence, remaining) = naive_peel(&g, d);
            let ok = match prune_one_round(&g, d) {
                Ok(run) => {
                    let budget = ceil_log2(n as u128) + ceil_log2(small(run.params.p()));
                    run.result.sequence == sequence
                        && run.result.remaining == remaining
                        && run.transcript.rounds_used() == 1
                        && run.transcript.per_node_bits() <= budget
                }
                Err(_) => false,
            };
            gate.check(ok, || format!("{name} d={d}"));
        }
    }
    gate.finish(Some(180.0));
}

#[test]
fn criterion_5_degenerate_reconstruction() {
    let mut gate = Gate::new(5, "reconstruction of 100 random d-degenerate graphs, d <= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let d = i % 4;
        let n = rng.gen_range(1..=64);
        let seed = rng.gen::<u64>();
        let g = gen_graph(GraphKind::RandomDegenerate(d), n, seed).unwrap();
        let ok = match prune_one_round(&g, d) {
            Ok(run) => run.result.fully_reconstructed && run.result.reconstructed.as_ref() == Some(&g),
            Err(_) => false,
        };
        gate.check(ok, || format!("d={d} n={n} seed={seed}"));
    }
    gate.finish(None);
}

/// Smallest k with k^den >= n^num, i.e. ceil(n^(num/den)).
fn ceil_root_power(n: usize, num: u32, den: u32) -> usize {
    let target = (n as u128).pow(num);
    (1..).find(|&k: &usize| (k as u128).pow(den) >= target).unwrap()
}

#[test]
fn criterion_6_multiround_spanning_forest() {
    let mut gate = Gate::new(6, "multi-round spanning forest on 200 graphs, eps in {1, 1/2, 1/3}");
    for (name, g) in corpus(200, 64, CORPUS_SEED) {
        let n = g.n();
        let labels = bfs_labels(&g);
        for (num, den) in [(1u32, 1u32), (1, 2), (1, 3)] {
            let eps = Epsilon::new(num as u64, den as u64).unwrap();
            let max_rounds = den.div_ceil(num) as usize;
            let budget = ceil_log2(n as u128 + 1) + ceil_root_power(n, num, den) as u64 * ceil_log2(n as u128);
            let ok = match spanning_forest_multiround(&g, eps) {
                Ok(run) => {
                    run.transcript.rounds_used() <= max_rounds
                        && run.components.labels == labels
                        && forest_is_maximal(&g, &run.components.forest)
                        && run.transcript.per_node_bits() <= budget
                }
                Err(_) => false,
            };
            gate.check(ok, || format!("{name} eps={num}/{den}"));
        }
    }
    gate.finish(None);
}

fn sparsity(n: usize, r: u32) -> usize {
    (1..).find(|&s: &usize| (s as u128).pow(r) >= n as u128).unwrap()
}

#[test]
fn criterion_7_one_round_radius_connectivity() {
    let mut gate = Gate::new(7, "one-round connectivity from radius-r views on 200 graphs, r in 1..=3");
    for (name, g) in corpus(200, 64, CORPUS_SEED) {
        let labels = bfs_labels(&g);
        for r in 1..=3usize {
            let global = tilde_global(&g, r).tilde;
            let local_rows_match = (0..g.n()).all(|v| {
                let b = ball(&g, v, r).unwrap();
                tilde_row_local(&b) == global.neighbors(v)
            });
            let girth_ok = girth(&global).is_none_or(|len| len > 2 * r);
            let tilde_components_ok = bfs_labels(&global) == labels;
            let ok = match connectivity_one_round_r(&g, r) {
                Ok(run) => {
                    run.transcript.rounds_used() == 1
                        && run.s == sparsity(g.n(), r as u32)
                        && run.tilde == global
                        && run.components.labels == labels
                        && forest_is_maximal(&g, &run.components.forest)
                }
                Err(_) => false,
            };
            gate.check(ok && local_rows_match && girth_ok && tilde_components_ok, || {
                format!("{name} r={r} local={local_rows_match} girth={girth_ok} comps={tilde_components_ok} run={ok}")
            });
        }
    }
    gate.finish(Some(300.0));
}

fn write_graph(dir: &std::path::Path, name: &str, g: &Graph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, bclique::graph::serialize_graph(g)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn criterion_8_cli_determinism() {
    let mut gate = Gate::new(8, "every CLI invocation repeated twice yields byte-identical reports");
    let dir = tempfile::tempdir().unwrap();
    let dense = write_graph(dir.path(), "dense.txt", &gen_graph(GraphKind::Gnp(0.3), 24, 7).unwrap());
    let sparse = write_graph(dir.path(), "sparse.txt", &gen_graph(GraphKind::RandomDegenerate(2), 40, 8).unwrap());
    let cycle = write_graph(dir.path(), "cycle.txt", &gen_graph(GraphKind::Cycle, 9, 0).unwrap());
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3\n0 7\n").unwrap();
    let bad = bad.to_str().unwrap().to_string();
    let out = dir.path().join("gen.txt").to_str().unwrap().to_string();

    let invocations: Vec<Vec<&str>> = vec![
        vec!["params", "--n", "16", "--d", "3"],
        vec!["params", "--n", "64", "--d", "64"],
        vec!["gen", "--kind", "gnp", "--n", "30", "--seed", "4", "--param", "0.2"],
        vec!["gen", "--kind", "random_degenerate", "--n", "30", "--seed", "4", "--param", "3", "--out", &out],
        vec!["prune", "--graph", &sparse, "--d", "2"],
        vec!["prune", "--graph", &dense, "--d", "3", "--transcript"],
        vec!["components", "--graph", &dense, "--eps", "1/3", "--transcript"],
        vec!["components", "--graph", &sparse, "--eps", "0.5"],
        vec!["one-round", "--graph", &cycle, "--r", "2", "--transcript"],
        vec!["one-round", "--graph", &dense, "--r", "3"],
        vec!["one-round", "--graph", &sparse, "--r", "1"],
        vec!["verify", "--suite", "small"],
        vec!["components", "--graph", "missing.txt", "--eps", "0.5"],
        vec!["prune", "--graph", &bad, "--d", "1"],
        vec!["params", "--n", "0", "--d", "0"],
    ];
    let exe = env!("CARGO_BIN_EXE_bclique");
    for args in &invocations {
        let first = Command::new(exe).args(args).output().unwrap();
        let second = Command::new(exe).args(args).output().unwrap();
        gate.check(
            first.stdout == second.stdout && first.stderr == second.stderr && first.status == second.status,
            || format!("{args:?}"),
        );
        let in_process = bclique::cli::run_command(std::iter::once("bclique").chain(args.iter().copied()));
        gate.check(
            in_process.stdout.as_bytes() == first.stdout && Some(in_process.code) == first.status.code(),
            || format!("in-process {args:?}"),
        );
    }
    gate.finish(None);
}
