//! Multi-round spanning forest by supernode merging.
//!
//! Every node tracks the same partition of the nodes into supernodes. Each
//! round a node announces up to `k = max(1, ceil(n^eps))` of its neighbors,
//! one per foreign supernode it can see (smallest labels first, smallest
//! neighbor id within each), and every node merges along the announced
//! edges. A supernode that is not yet a whole component absorbs at least
//! `k + 1` earlier supernodes per round, so after `ceil(1/eps)` rounds every
//! supernode is a component.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Epsilon, ProtocolError};
use crate::clique::{run_protocol, Message, NodeInput, Payload, Protocol, Step, Transcript};
use crate::graph::{Components, DisjointSet, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupernodePartition {
    /// Supernode label of each node: the smallest member id.
    pub assignment: Vec<usize>,
    /// Edges that merged two supernodes, in merge order.
    pub forest: Vec<Edge>,
    /// Activity of each current supernode, by label.
    pub active: BTreeMap<usize, bool>,
}

impl SupernodePartition {
    pub fn singletons(n: usize) -> SupernodePartition {
        SupernodePartition {
            assignment: (0..n).collect(),
            forest: Vec::new(),
            active: (0..n).map(|v| (v, true)).collect(),
        }
    }

    pub fn label(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn supernode_count(&self) -> usize {
        self.active.len()
    }

    pub fn active_count(&self) -> usize {
        self.active.values().filter(|&&a| a).count()
    }

    /// Merges supernodes along `announced` (processed in canonical edge
    /// order). A merged supernode is active iff it absorbed at least
    /// `threshold` supernodes. If no edge joins two supernodes, nothing
    /// changes.
    pub fn merge(&self, announced: &[Edge], threshold: usize) -> SupernodePartition {
        let n = self.assignment.len();
        let mut ds = DisjointSet::new(n);
        for v in 0..n {
            ds.union(v, self.assignment[v]);
        }
        let mut edges = announced.to_vec();
        edges.sort_unstable();
        edges.dedup();
        let joined: Vec<Edge> = edges.into_iter().filter(|e| ds.union(e.0, e.1)).collect();
        if joined.is_empty() {
            return self.clone();
        }

        let assignment = ds.min_labels();
        let mut absorbed: BTreeMap<usize, usize> = BTreeMap::new();
        for &old in self.active.keys() {
            *absorbed.entry(assignment[old]).or_default() += 1;
        }
        let active = absorbed.into_iter().map(|(label, count)| (label, count >= threshold)).collect();
        let mut forest = self.forest.clone();
        forest.extend(joined);
        SupernodePartition {
            assignment,
            forest,
            active,
        }
    }
}

/// [`SupernodePartition::merge`], after checking every announced edge
/// against the input graph.
pub fn merge_step(
    part: &SupernodePartition,
    announced: &[Edge],
    graph: &Graph,
    threshold: usize,
) -> Result<SupernodePartition, ProtocolError> {
    if let Some(e) = announced.iter().find(|e| !graph.has_edge(e.0, e.1)) {
        return Err(ProtocolError::ForeignEdge(*e));
    }
    Ok(part.merge(announced, threshold))
}

#[derive(Clone, Debug)]
pub struct ForestProtocol {
    eps: Epsilon,
    cap: usize,
}

impl ForestProtocol {
    pub fn new(n: usize, eps: Epsilon) -> ForestProtocol {
        ForestProtocol {
            eps,
            cap: eps.neighbor_cap(n),
        }
    }

    /// Neighbors announced per node per round.
    pub fn cap(&self) -> usize {
        self.cap
    }
}

pub struct ForestState {
    id: usize,
    neighbors: Vec<usize>,
    part: SupernodePartition,
    active_per_round: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestOutput {
    pub labels: Vec<usize>,
    pub forest: Vec<Edge>,
    /// Active supernodes after each round.
    pub active_per_round: Vec<usize>,
}

impl Protocol for ForestProtocol {
    type State = ForestState;
    type Output = ForestOutput;
    type Error = ProtocolError;

    fn round_budget(&self) -> usize {
        self.eps.rounds()
    }

    fn init(&self, id: usize, input: &NodeInput) -> Result<ForestState, ProtocolError> {
        let NodeInput::AdjacencyRow(row) = input else {
            return Err(ProtocolError::WrongInput("expected an adjacency row"));
        };
        Ok(ForestState {
            id,
            neighbors: (0..row.len()).filter(|&v| row[v]).collect(),
            part: SupernodePartition::singletons(row.len()),
            active_per_round: Vec::new(),
        })
    }

    fn broadcast(&self, state: &ForestState, _round: usize) -> Result<Payload, ProtocolError> {
        let own = state.part.label(state.id);
        // Neighbors are sorted, so the first hit per label is the smallest id.
        let mut by_label: BTreeMap<usize, usize> = BTreeMap::new();
        for &w in &state.neighbors {
            let label = state.part.label(w);
            if label != own {
                by_label.entry(label).or_insert(w);
            }
        }
        let ids = by_label.into_values().take(self.cap).collect();
        Ok(Payload::NeighborList { ids })
    }

    fn receive(&self, state: &mut ForestState, round: usize, inbox: &[Message]) -> Result<Step, ProtocolError> {
        let n = inbox.len();
        let mut announced = Vec::new();
        for (u, msg) in inbox.iter().enumerate() {
            let Payload::NeighborList { ids } = &msg.payload else {
                return Err(ProtocolError::InvalidTranscript(format!("node {u} sent a non-list payload")));
            };
            for &w in ids {
                if w >= n || w == u {
                    return Err(ProtocolError::InvalidTranscript(format!("node {u} announced {w}")));
                }
                if w == state.id && state.neighbors.binary_search(&u).is_err() {
                    return Err(ProtocolError::ForeignEdge(Edge::new(u, w)));
                }
                announced.push(Edge::new(u, w));
            }
        }
        if announced.is_empty() {
            return Ok(Step::Halt);
        }
        state.part = state.part.merge(&announced, self.cap);
        state.active_per_round.push(state.part.active_count());
        Ok(if round + 1 == self.round_budget() {
            Step::Halt
        } else {
            Step::Continue
        })
    }

    fn output(&self, state: &ForestState) -> Result<ForestOutput, ProtocolError> {
        Ok(ForestOutput {
            labels: state.part.assignment.clone(),
            forest: state.part.forest.clone(),
            active_per_round: state.active_per_round.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ForestRun {
    pub components: Components,
    pub active_per_round: Vec<usize>,
    pub neighbor_cap: usize,
    pub transcript: Transcript,
}

pub fn spanning_forest_multiround(g: &Graph, eps: Epsilon) -> Result<ForestRun, ProtocolError> {
    let protocol = ForestProtocol::new(g.n(), eps);
    let (out, transcript) = run_protocol(&protocol, &NodeInput::rows(g))?;
    Ok(ForestRun {
        components: Components {
            labels: out.labels,
            forest: out.forest,
        },
        active_per_round: out.active_per_round,
        neighbor_cap: protocol.cap,
        transcript,
    })
}
