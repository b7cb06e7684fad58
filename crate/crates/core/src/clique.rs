//! Synchronous broadcast congested clique simulator.
//!
//! Every round, each node computes one message from its local state; every
//! node then receives the full vector of messages (ordered by sender id) and
//! updates its state. After the last round every node emits an output, and
//! all outputs must agree. Each message is charged a fixed number of bits:
//!
//! * neighbor list: `ceil(log2(n + 1))` for the length, plus `ceil(log2 n)`
//!   per id;
//! * degree and sketch: `ceil(log2 n) + ceil(log2 p)`.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{ball, Ball, Graph, GraphError};
use crate::sketch::{ceil_log2, FieldElement};

/// What a node knows before the first round.
#[derive(Clone, Debug)]
pub enum NodeInput {
    /// Its row of the adjacency matrix.
    AdjacencyRow(Vec<bool>),
    /// The subgraph induced by its radius-r neighborhood.
    RadiusBall(Ball),
}

impl NodeInput {
    pub fn rows(g: &Graph) -> Vec<NodeInput> {
        (0..g.n()).map(|v| NodeInput::AdjacencyRow(g.row(v))).collect()
    }

    pub fn balls(g: &Graph, r: usize) -> Result<Vec<NodeInput>, GraphError> {
        (0..g.n()).map(|v| ball(g, v, r).map(NodeInput::RadiusBall)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    NeighborList { ids: Vec<usize> },
    DegreeAndSketch { degree: usize, sketch: FieldElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub payload: Payload,
    pub bits: u64,
}

fn ceil_log2_usize(x: usize) -> u64 {
    ceil_log2(&BigUint::from(x))
}

/// Exact encoded size of a payload in a clique of `n` nodes. Sketch values
/// are charged `ceil(log2 p)` bits; without a modulus, their own bit length.
pub fn message_bits(payload: &Payload, n: usize, p: Option<&BigUint>) -> u64 {
    match payload {
        Payload::NeighborList { ids } => ceil_log2_usize(n + 1) + ids.len() as u64 * ceil_log2_usize(n),
        Payload::DegreeAndSketch { sketch, .. } => {
            ceil_log2_usize(n) + p.map_or_else(|| sketch.value().bits(), ceil_log2)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    Halt,
}

/// A protocol run identically by every node.
pub trait Protocol {
    type State;
    type Output: Clone + PartialEq + fmt::Debug;
    type Error: std::error::Error;

    /// Maximum number of communication rounds.
    fn round_budget(&self) -> usize;

    /// Modulus used when charging sketch payloads.
    fn modulus(&self) -> Option<&BigUint> {
        None
    }

    fn init(&self, id: usize, input: &NodeInput) -> Result<Self::State, Self::Error>;

    /// The message node `state` broadcasts in `round` (0-based).
    fn broadcast(&self, state: &Self::State, round: usize) -> Result<Payload, Self::Error>;

    /// Handles the messages of `round`, indexed by sender.
    fn receive(&self, state: &mut Self::State, round: usize, inbox: &[Message]) -> Result<Step, Self::Error>;

    fn output(&self, state: &Self::State) -> Result<Self::Output, Self::Error>;
}

#[derive(Debug, Error)]
pub enum RunError<E: std::error::Error> {
    #[error("a clique needs at least one node")]
    NoNodes,
    #[error("nodes {first} and {second} produced different outputs")]
    OutputDivergence { first: usize, second: usize },
    #[error("nodes disagree on halting after round {round}")]
    HaltDivergence { round: usize },
    #[error("protocol did not halt within {budget} rounds")]
    RoundBudgetExceeded { budget: usize },
    #[error("evaluation order is not a permutation of 0..{n}")]
    BadOrder { n: usize },
    #[error("node {node}: {source}")]
    Node {
        node: usize,
        #[source]
        source: E,
    },
}

/// Every message of every round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub n: usize,
    /// `rounds[t][v]` is what node `v` broadcast in round `t`.
    pub rounds: Vec<Vec<Message>>,
}

impl Transcript {
    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }

    /// Largest message any node broadcast in any round.
    pub fn per_node_bits(&self) -> u64 {
        self.rounds.iter().flatten().map(|m| m.bits).max().unwrap_or(0)
    }

    pub fn total_bits(&self) -> u64 {
        self.rounds.iter().flatten().map(|m| m.bits).sum()
    }

    pub fn to_json(&self) -> Value {
        let rounds: Vec<Value> = self
            .rounds
            .iter()
            .enumerate()
            .map(|(t, msgs)| {
                let messages: Vec<Value> = msgs
                    .iter()
                    .enumerate()
                    .map(|(node, m)| {
                        let mut entry = serde_json::to_value(&m.payload).expect("payload serializes");
                        entry["node"] = json!(node);
                        entry["bits"] = json!(m.bits);
                        entry
                    })
                    .collect();
                json!({ "round": t + 1, "messages": messages })
            })
            .collect();
        json!({
            "n": self.n,
            "rounds_used": self.rounds_used(),
            "per_node_bits": self.per_node_bits(),
            "total_bits": self.total_bits(),
            "rounds": rounds,
        })
    }
}

/// Runs protocols. Nodes are evaluated in id order unless an explicit order
/// is set; since every message is computed before any is delivered, the
/// order cannot change the result.
#[derive(Clone, Debug, Default)]
pub struct Simulator {
    order: Option<Vec<usize>>,
}

impl Simulator {
    pub fn new() -> Simulator {
        Simulator::default()
    }

    pub fn with_order(order: Vec<usize>) -> Simulator {
        Simulator { order: Some(order) }
    }

    pub fn run<P: Protocol>(
        &self,
        protocol: &P,
        inputs: &[NodeInput],
    ) -> Result<(P::Output, Transcript), RunError<P::Error>> {
        let n = inputs.len();
        if n == 0 {
            return Err(RunError::NoNodes);
        }
        let order: Vec<usize> = match &self.order {
            Some(order) => {
                let mut seen = vec![false; n];
                if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
                    return Err(RunError::BadOrder { n });
                }
                order.clone()
            }
            None => (0..n).collect(),
        };
        let node_err = |node| move |source| RunError::Node { node, source };

        let mut states: Vec<Option<P::State>> = (0..n).map(|_| None).collect();
        for &v in &order {
            states[v] = Some(protocol.init(v, &inputs[v]).map_err(node_err(v))?);
        }
        let mut states: Vec<P::State> = states.into_iter().map(Option::unwrap).collect();

        let mut rounds = Vec::new();
        loop {
            let round = rounds.len();
            if round == protocol.round_budget() {
                return Err(RunError::RoundBudgetExceeded {
                    budget: protocol.round_budget(),
                });
            }
            let mut outbox: Vec<Option<Message>> = vec![None; n];
            for &v in &order {
                let payload = protocol.broadcast(&states[v], round).map_err(node_err(v))?;
                let bits = message_bits(&payload, n, protocol.modulus());
                outbox[v] = Some(Message { payload, bits });
            }
            let inbox: Vec<Message> = outbox.into_iter().map(Option::unwrap).collect();

            let mut steps = vec![Step::Continue; n];
            for &v in &order {
                steps[v] = protocol.receive(&mut states[v], round, &inbox).map_err(node_err(v))?;
            }
            rounds.push(inbox);
            if steps.iter().any(|&s| s != steps[0]) {
                return Err(RunError::HaltDivergence { round: round + 1 });
            }
            if steps[0] == Step::Halt {
                break;
            }
        }

        let mut outputs: Vec<Option<P::Output>> = vec![None; n];
        for &v in &order {
            outputs[v] = Some(protocol.output(&states[v]).map_err(node_err(v))?);
        }
        let outputs: Vec<P::Output> = outputs.into_iter().map(Option::unwrap).collect();
        if let Some(second) = (1..n).find(|&v| outputs[v] != outputs[0]) {
            return Err(RunError::OutputDivergence { first: 0, second });
        }
        let output = outputs.into_iter().next().unwrap();
        Ok((output, Transcript { n, rounds }))
    }
}

/// Runs `protocol` with nodes evaluated in id order.
pub fn run_protocol<P: Protocol>(
    protocol: &P,
    inputs: &[NodeInput],
) -> Result<(P::Output, Transcript), RunError<P::Error>> {
    Simulator::new().run(protocol, inputs)
}
