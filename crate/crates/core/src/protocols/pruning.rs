//! One-round d-pruning.
//!
//! Node `i` broadcasts its degree and the sketch of its adjacency row. Every
//! node then peels locally: a node `k` of residual degree at most `d` has a
//! d-sparse residual row, so its sketch decodes to its live neighbors; each
//! such neighbor `j` then drops `k` from its own message by decrementing the
//! degree and subtracting `xbar^k` from the sketch.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::ProtocolError;
use crate::clique::{run_protocol, Message, NodeInput, Payload, Protocol, Step, Transcript};
use crate::graph::{serialize_graph, Graph};
use crate::sketch::{FieldElement, SketchError, SketchParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PruningResult {
    /// Peeled nodes in order, with their live neighbors at removal time.
    pub sequence: Vec<(usize, Vec<usize>)>,
    /// Nodes left over (the (d+1)-core), sorted.
    pub remaining: Vec<usize>,
    /// `(node, residual degree)` for each remaining node.
    pub residual_degrees: Vec<(usize, usize)>,
    pub fully_reconstructed: bool,
    #[serde(skip)]
    pub reconstructed: Option<Graph>,
}

impl PruningResult {
    pub fn to_json(&self) -> Value {
        let sequence: Vec<Value> = self
            .sequence
            .iter()
            .map(|(node, neighbors)| json!({ "node": node, "neighbors": neighbors }))
            .collect();
        let residual: Vec<Value> = self
            .residual_degrees
            .iter()
            .map(|(node, degree)| json!({ "node": node, "degree": degree }))
            .collect();
        json!({
            "sequence": sequence,
            "remaining": self.remaining,
            "residual_degrees": residual,
            "fully_reconstructed": self.fully_reconstructed,
            "reconstructed": self.reconstructed.as_ref().map(serialize_graph),
        })
    }
}

fn invalid(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::InvalidTranscript(msg.into())
}

/// Peels the graph described by one `(degree, sketch)` message per node.
pub fn peel_from_messages(
    msgs: &[(usize, FieldElement)],
    params: &SketchParams,
    d: usize,
) -> Result<PruningResult, ProtocolError> {
    let n = msgs.len();
    if params.n() != n {
        return Err(SketchError::DimensionMismatch {
            expected: params.n(),
            got: n,
        }
        .into());
    }
    if d.min(n) > params.d() {
        return Err(SketchError::BadParams { n, d }.into());
    }
    let mut degree: Vec<usize> = msgs.iter().map(|m| m.0).collect();
    let mut sketch: Vec<FieldElement> = msgs.iter().map(|m| m.1.clone()).collect();
    let mut alive = vec![true; n];
    let mut sequence = Vec::new();

    while let Some(k) = (0..n).find(|&v| alive[v] && degree[v] <= d) {
        let nbrs = params
            .decode(&sketch[k], Some(degree[k]))
            .map_err(|e| invalid(format!("node {k}: {e}")))?;
        alive[k] = false;
        let basis = params.encode_basis(k)?;
        for &j in &nbrs {
            if !alive[j] {
                return Err(invalid(format!("node {k} lists removed node {j}")));
            }
            if degree[j] == 0 {
                return Err(invalid(format!("residual degree of node {j} went negative")));
            }
            degree[j] -= 1;
            sketch[j] = params.sub(&sketch[j], &basis);
        }
        sequence.push((k, nbrs));
    }

    let remaining: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let residual_degrees = remaining.iter().map(|&v| (v, degree[v])).collect();
    let fully_reconstructed = remaining.is_empty();
    let reconstructed = if fully_reconstructed {
        let edges = sequence.iter().flat_map(|(k, nbrs)| nbrs.iter().map(move |&j| (*k, j)));
        Some(Graph::from_edges(n, edges).map_err(|e| invalid(e.to_string()))?)
    } else {
        None
    };
    Ok(PruningResult {
        sequence,
        remaining,
        residual_degrees,
        fully_reconstructed,
        reconstructed,
    })
}

/// Collects `(degree, sketch)` pairs from a round of messages.
pub(crate) fn sketch_messages(inbox: &[Message]) -> Result<Vec<(usize, FieldElement)>, ProtocolError> {
    inbox
        .iter()
        .enumerate()
        .map(|(u, m)| match &m.payload {
            Payload::DegreeAndSketch { degree, sketch } => Ok((*degree, sketch.clone())),
            _ => Err(invalid(format!("node {u} sent a non-sketch payload"))),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PruningProtocol {
    d: usize,
    params: Arc<SketchParams>,
}

impl PruningProtocol {
    pub fn new(d: usize, params: Arc<SketchParams>) -> PruningProtocol {
        PruningProtocol { d, params }
    }
}

pub struct PruningState {
    row: Vec<bool>,
    result: Option<PruningResult>,
}

impl Protocol for PruningProtocol {
    type State = PruningState;
    type Output = PruningResult;
    type Error = ProtocolError;

    fn round_budget(&self) -> usize {
        1
    }

    fn modulus(&self) -> Option<&num_bigint::BigUint> {
        Some(self.params.p())
    }

    fn init(&self, _id: usize, input: &NodeInput) -> Result<PruningState, ProtocolError> {
        match input {
            NodeInput::AdjacencyRow(row) => Ok(PruningState {
                row: row.clone(),
                result: None,
            }),
            _ => Err(ProtocolError::WrongInput("expected an adjacency row")),
        }
    }

    fn broadcast(&self, state: &PruningState, _round: usize) -> Result<Payload, ProtocolError> {
        Ok(Payload::DegreeAndSketch {
            degree: state.row.iter().filter(|&&b| b).count(),
            sketch: self.params.encode_bool(&state.row)?,
        })
    }

    fn receive(&self, state: &mut PruningState, _round: usize, inbox: &[Message]) -> Result<Step, ProtocolError> {
        let msgs = sketch_messages(inbox)?;
        state.result = Some(peel_from_messages(&msgs, &self.params, self.d)?);
        Ok(Step::Halt)
    }

    fn output(&self, state: &PruningState) -> Result<PruningResult, ProtocolError> {
        state.result.clone().ok_or_else(|| invalid("no round was received"))
    }
}

#[derive(Clone, Debug)]
pub struct PruneRun {
    pub result: PruningResult,
    pub params: Arc<SketchParams>,
    pub transcript: Transcript,
}

/// Runs the protocol with sketch sparsity `min(d, n)`: no residual
/// neighborhood can hold more than `n - 1` nodes.
pub fn prune_one_round(g: &Graph, d: usize) -> Result<PruneRun, ProtocolError> {
    let params = SketchParams::shared(g.n(), d.min(g.n()))?;
    let protocol = PruningProtocol::new(d, Arc::clone(&params));
    let (result, transcript) = run_protocol(&protocol, &NodeInput::rows(g))?;
    Ok(PruneRun {
        result,
        params,
        transcript,
    })
}
