//! Deterministic protocols for the broadcast congested clique.
//!
//! Each of `n` nodes holds part of an undirected graph (its adjacency row, or
//! its radius-r ball) and, in every synchronous round, broadcasts a single
//! message to all others. This crate provides:
//!
//! * [`sketch`]: a deterministic linear sketch `Z^n -> F_p` that is
//!   invertible on Boolean vectors with at most `d` ones;
//! * [`graph`]: graphs, generators, and brute-force oracles;
//! * [`clique`]: the round simulator with exact bit accounting;
//! * [`protocols`]: multi-round spanning forest, one-round d-pruning, and
//!   one-round connectivity from radius-r views;
//! * [`cli`] and [`verify`]: the `bclique` command line and its oracle
//!   suites.

pub mod cli;
pub mod clique;
pub mod graph;
pub mod protocols;
pub mod sketch;
pub mod verify;
