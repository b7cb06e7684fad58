//! One-round connectivity when every node sees its radius-r ball.
//!
//! Each node first computes, without communicating, its row of the graph
//! obtained by dropping the maximum edge of every cycle of length at most
//! `2r`. That graph has girth above `2r` and the same components; by the
//! Moore bound any subgraph of minimum degree `s + 1` would need more than
//! `s^r >= n` nodes, so it is `s`-degenerate for `s = min{s : s^r >= n}`.
//! One round of s-pruning therefore reconstructs it completely.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use super::pruning::{peel_from_messages, sketch_messages};
use super::ProtocolError;
use crate::clique::{run_protocol, Message, NodeInput, Payload, Protocol, Step, Transcript};
use crate::graph::{components_and_forest, tilde_row_local, Components, Edge, Graph};
use crate::sketch::SketchParams;

/// `min{s >= 1 : s^r >= n}`, in integer arithmetic.
pub fn sparsity_parameter(n: usize, r: usize) -> usize {
    let reaches = |s: usize| {
        let mut acc: u128 = 1;
        for _ in 0..r {
            acc = acc.saturating_mul(s as u128);
            if acc >= n as u128 {
                return true;
            }
        }
        acc >= n as u128
    };
    let (mut lo, mut hi) = (1usize, n.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

#[derive(Clone, Debug)]
pub struct RadiusProtocol {
    r: usize,
    s: usize,
    params: Arc<SketchParams>,
}

impl RadiusProtocol {
    pub fn new(n: usize, r: usize) -> Result<RadiusProtocol, ProtocolError> {
        let s = sparsity_parameter(n, r);
        Ok(RadiusProtocol {
            r,
            s,
            params: SketchParams::shared(n, s)?,
        })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn params(&self) -> &Arc<SketchParams> {
        &self.params
    }
}

pub struct RadiusState {
    row: Vec<usize>,
    out: Option<RadiusOutput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusOutput {
    pub labels: Vec<usize>,
    pub forest: Vec<Edge>,
    #[serde(skip)]
    pub tilde: Graph,
}

impl Protocol for RadiusProtocol {
    type State = RadiusState;
    type Output = RadiusOutput;
    type Error = ProtocolError;

    fn round_budget(&self) -> usize {
        1
    }

    fn modulus(&self) -> Option<&BigUint> {
        Some(self.params.p())
    }

    fn init(&self, id: usize, input: &NodeInput) -> Result<RadiusState, ProtocolError> {
        match input {
            NodeInput::RadiusBall(ball) if ball.center == id && ball.radius == self.r => Ok(RadiusState {
                row: tilde_row_local(ball),
                out: None,
            }),
            NodeInput::RadiusBall(_) => Err(ProtocolError::WrongInput("ball center or radius mismatch")),
            _ => Err(ProtocolError::WrongInput("expected a radius ball")),
        }
    }

    fn broadcast(&self, state: &RadiusState, _round: usize) -> Result<Payload, ProtocolError> {
        Ok(Payload::DegreeAndSketch {
            degree: state.row.len(),
            sketch: self.params.encode_support(&state.row)?,
        })
    }

    fn receive(&self, state: &mut RadiusState, _round: usize, inbox: &[Message]) -> Result<Step, ProtocolError> {
        let msgs = sketch_messages(inbox)?;
        let peeled = peel_from_messages(&msgs, &self.params, self.s)?;
        let Some(tilde) = peeled.reconstructed else {
            return Err(ProtocolError::DegeneracyExceeded {
                s: self.s,
                remaining: peeled.remaining.len(),
            });
        };
        let Components { labels, forest } = components_and_forest(&tilde);
        state.out = Some(RadiusOutput { labels, forest, tilde });
        Ok(Step::Halt)
    }

    fn output(&self, state: &RadiusState) -> Result<RadiusOutput, ProtocolError> {
        state
            .out
            .clone()
            .ok_or_else(|| ProtocolError::InvalidTranscript("no round was received".into()))
    }
}

#[derive(Clone, Debug)]
pub struct RadiusRun {
    pub components: Components,
    pub tilde: Graph,
    pub s: usize,
    pub params: Arc<SketchParams>,
    pub transcript: Transcript,
}

pub fn connectivity_one_round_r(g: &Graph, r: usize) -> Result<RadiusRun, ProtocolError> {
    let protocol = RadiusProtocol::new(g.n(), r)?;
    let (out, transcript) = run_protocol(&protocol, &NodeInput::balls(g, r)?)?;
    Ok(RadiusRun {
        components: Components {
            labels: out.labels,
            forest: out.forest,
        },
        tilde: out.tilde,
        s: protocol.s,
        params: protocol.params,
        transcript,
    })
}
