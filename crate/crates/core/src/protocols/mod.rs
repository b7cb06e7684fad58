//! The connectivity and pruning protocols.
//!
//! * [`spanning_forest_multiround`]: supernode merging in `ceil(1/eps)`
//!   rounds with `O(n^eps log n)`-bit messages.
//! * [`prune_one_round`]: one round of `(degree, sketch)` messages, after
//!   which every node peels the graph locally.
//! * [`connectivity_one_round_r`]: nodes that see their radius-r ball drop
//!   short-cycle edges locally, then prune the sparse remainder in one round.

mod epsilon;
mod forest;
mod pruning;
mod radius;

use thiserror::Error;

use crate::clique::RunError;
use crate::graph::{Edge, GraphError};
use crate::sketch::SketchError;

pub use epsilon::Epsilon;
pub use forest::{merge_step, spanning_forest_multiround, ForestOutput, ForestProtocol, ForestRun, SupernodePartition};
pub use pruning::{peel_from_messages, prune_one_round, PruneRun, PruningProtocol, PruningResult};
pub use radius::{connectivity_one_round_r, sparsity_parameter, RadiusOutput, RadiusProtocol, RadiusRun};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),
    #[error("announced edge {0} is not in the input graph")]
    ForeignEdge(Edge),
    #[error("peeling with s = {s} stalled with {remaining} nodes left")]
    DegeneracyExceeded { s: usize, remaining: usize },
    #[error("node received the wrong kind of input: {0}")]
    WrongInput(&'static str),
    #[error("epsilon must be a rational in (0, 1], got {0}")]
    BadEpsilon(String),
    #[error(transparent)]
    Clique(Box<RunError<ProtocolError>>),
}

impl From<RunError<ProtocolError>> for ProtocolError {
    fn from(err: RunError<ProtocolError>) -> Self {
        match err {
            RunError::Node { source, .. } => source,
            other => ProtocolError::Clique(Box::new(other)),
        }
    }
}

impl ProtocolError {
    /// Short machine-readable name for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ProtocolError::Sketch(e) => match e {
                SketchError::BadParams { .. } => "BadParams",
                SketchError::CapExceeded { .. } => "CapExceeded",
                SketchError::DimensionMismatch { .. } => "DimensionMismatch",
                SketchError::NotDecodable { .. } => "NotDecodable",
                SketchError::WeightMismatch { .. } => "WeightMismatch",
                SketchError::IndexOutOfRange { .. } => "IndexOutOfRange",
            },
            ProtocolError::Graph(_) => "GraphError",
            ProtocolError::InvalidTranscript(_) => "InvalidTranscript",
            ProtocolError::ForeignEdge(_) => "ForeignEdge",
            ProtocolError::DegeneracyExceeded { .. } => "DegeneracyExceeded",
            ProtocolError::WrongInput(_) => "WrongInput",
            ProtocolError::BadEpsilon(_) => "BadEpsilon",
            ProtocolError::Clique(e) => match **e {
                RunError::OutputDivergence { .. } => "OutputDivergence",
                RunError::RoundBudgetExceeded { .. } => "RoundBudgetExceeded",
                _ => "CliqueError",
            },
        }
    }
}
