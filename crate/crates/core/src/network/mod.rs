//! Tensor networks as graphs.
//!
//! A [`TensorNetworkGraph`] holds tensors as nodes, contracted wires as edges
//! and an explicit, ordered list of open legs. The open-leg order is the
//! network's type signature: evaluation returns a tensor whose indices follow
//! it, and every rewrite in [`rewrite`] preserves it.
//!
//! Identity wires, cups and caps are tagged at construction ([`NodeKind`]) so
//! rewrite rules match on tags instead of numeric content.

mod format;
mod plan;
mod rewrite;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tensor::{make_cap, make_cup, make_delta, IndexSpec, Tensor, TensorError, Variance};

pub use format::{EdgeEntry, KindTag, LegEntry, NetworkFile, NodeEntry};
pub use plan::{
    evaluate, evaluate_with_stats, plan_cost, plan_exhaustive, plan_greedy, ContractionPlan, EvaluationStats,
    EXHAUSTIVE_EDGE_LIMIT,
};
pub use rewrite::{apply_map_state_duality, rewrite_snake, RewriteEvent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("duplicate node id {0}")]
    DuplicateNode(usize),

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("leg {} of node {} does not exist", .0.leg, .0.node)]
    LegOutOfRange(LegRef),

    #[error("leg {} of node {} is used more than once", .0.leg, .0.node)]
    DuplicateLeg(LegRef),

    #[error("leg {} of node {} is neither wired nor listed as open", .0.leg, .0.node)]
    UncoveredLeg(LegRef),

    #[error("edge joins dimension {left} to dimension {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("edge joins two legs of the same variance")]
    VarianceMismatch,

    #[error("node {id} is tagged {kind:?} but its legs do not match that kind")]
    MalformedTaggedNode { id: usize, kind: NodeKind },

    #[error("network has no nodes")]
    Empty,

    #[error("edge {0} does not exist")]
    UnknownEdge(usize),

    #[error("plan leaves edges uncontracted")]
    IncompletePlan,

    #[error("exhaustive planning supports at most {limit} edges, got {edges}")]
    TooManyEdges { edges: usize, limit: usize },

    #[error("leg {} of node {} is not open", .0.leg, .0.node)]
    NotOpen(LegRef),

    #[error("node {id} has valence {valence}, expected 2")]
    NotValenceTwo { id: usize, valence: usize },

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type NetworkResult<T> = Result<T, NetworkError>;

/// One leg of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegRef {
    pub node: usize,
    pub leg: usize,
}

impl LegRef {
    pub fn new(node: usize, leg: usize) -> Self {
        Self { node, leg }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge(pub LegRef, pub LegRef);

impl Edge {
    pub fn new(a: LegRef, b: LegRef) -> Self {
        Self(a, b)
    }

    /// Endpoints in ascending order; used for deterministic tie-breaking.
    pub fn key(&self) -> (LegRef, LegRef) {
        if self.0 <= self.1 {
            (self.0, self.1)
        } else {
            (self.1, self.0)
        }
    }

    pub fn touches(&self, leg: LegRef) -> bool {
        self.0 == leg || self.1 == leg
    }

    pub fn other(&self, leg: LegRef) -> Option<LegRef> {
        if self.0 == leg {
            Some(self.1)
        } else if self.1 == leg {
            Some(self.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Dense,
    /// Identity wire; one upper and one lower leg, either order.
    Delta,
    /// Two upper legs.
    Cup,
    /// Two lower legs.
    Cap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkNode {
    id: usize,
    kind: NodeKind,
    tensor: Tensor,
}

impl NetworkNode {
    pub fn dense(id: usize, tensor: Tensor) -> Self {
        Self { id, kind: NodeKind::Dense, tensor }
    }

    pub fn delta(id: usize, d: usize) -> NetworkResult<Self> {
        Ok(Self { id, kind: NodeKind::Delta, tensor: make_delta(d)? })
    }

    pub fn cup(id: usize, d: usize) -> NetworkResult<Self> {
        Ok(Self { id, kind: NodeKind::Cup, tensor: make_cup(d)? })
    }

    pub fn cap(id: usize, d: usize) -> NetworkResult<Self> {
        Ok(Self { id, kind: NodeKind::Cap, tensor: make_cap(d)? })
    }

    /// A tagged node with an explicit leg layout. Delta nodes may list their
    /// legs as `[Up, Down]` or `[Down, Up]`.
    pub fn tagged(id: usize, kind: NodeKind, d: usize, variances: [Variance; 2]) -> NetworkResult<Self> {
        let ok = match kind {
            NodeKind::Dense => false,
            NodeKind::Delta => variances[0] != variances[1],
            NodeKind::Cup => variances == [Variance::Up, Variance::Up],
            NodeKind::Cap => variances == [Variance::Down, Variance::Down],
        };
        if !ok {
            return Err(NetworkError::MalformedTaggedNode { id, kind });
        }
        let base = make_delta(d)?;
        let indices = vec![IndexSpec::new(d, variances[0])?, IndexSpec::new(d, variances[1])?];
        Ok(Self { id, kind, tensor: Tensor::new(indices, base.into_data())? })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn legs(&self) -> &[IndexSpec] {
        self.tensor.indices()
    }

    pub fn valence(&self) -> usize {
        self.tensor.rank()
    }

    pub fn is_wire(&self) -> bool {
        self.kind != NodeKind::Dense
    }
}

/// Dimension and variance of each open leg, in order.
pub type Signature = Vec<(usize, Variance)>;

#[derive(Debug, Clone, PartialEq)]
pub struct TensorNetworkGraph {
    nodes: BTreeMap<usize, NetworkNode>,
    edges: Vec<Edge>,
    open: Vec<LegRef>,
}

/// Validates and assembles a network.
///
/// Every leg of every node must appear exactly once, either in an edge or in
/// `open`. Edge endpoints need equal dimension and opposite variance.
pub fn build_network(
    nodes: Vec<NetworkNode>,
    edges: Vec<Edge>,
    open: Vec<LegRef>,
) -> NetworkResult<TensorNetworkGraph> {
    let mut map = BTreeMap::new();
    for node in nodes {
        let id = node.id;
        if map.insert(id, node).is_some() {
            return Err(NetworkError::DuplicateNode(id));
        }
    }
    let g = TensorNetworkGraph { nodes: map, edges, open };
    g.validate()?;
    Ok(g)
}

impl TensorNetworkGraph {
    pub fn validate(&self) -> NetworkResult<()> {
        if self.nodes.is_empty() {
            return Err(NetworkError::Empty);
        }
        let mut used: BTreeMap<LegRef, ()> = BTreeMap::new();
        let mut claim = |leg: LegRef| -> NetworkResult<()> {
            self.leg_spec(leg)?;
            if used.insert(leg, ()).is_some() {
                return Err(NetworkError::DuplicateLeg(leg));
            }
            Ok(())
        };
        for edge in &self.edges {
            claim(edge.0)?;
            claim(edge.1)?;
            let (a, b) = (self.leg_spec(edge.0)?, self.leg_spec(edge.1)?);
            if a.dim() != b.dim() {
                return Err(NetworkError::DimensionMismatch { left: a.dim(), right: b.dim() });
            }
            if a.variance() == b.variance() {
                return Err(NetworkError::VarianceMismatch);
            }
        }
        for &leg in &self.open {
            claim(leg)?;
        }
        for node in self.nodes.values() {
            for leg in 0..node.valence() {
                let r = LegRef::new(node.id, leg);
                if !used.contains_key(&r) {
                    return Err(NetworkError::UncoveredLeg(r));
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NetworkNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: usize) -> Option<&NetworkNode> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn open_legs(&self) -> &[LegRef] {
        &self.open
    }

    pub fn leg_spec(&self, leg: LegRef) -> NetworkResult<&IndexSpec> {
        let node = self.nodes.get(&leg.node).ok_or(NetworkError::UnknownNode(leg.node))?;
        node.legs().get(leg.leg).ok_or(NetworkError::LegOutOfRange(leg))
    }

    pub fn signature(&self) -> Signature {
        self.open
            .iter()
            .map(|&l| {
                let s = self.leg_spec(l).expect("validated graph");
                (s.dim(), s.variance())
            })
            .collect()
    }

    /// The leg wired to `leg`, if any.
    pub fn partner(&self, leg: LegRef) -> Option<LegRef> {
        self.edges.iter().find_map(|e| e.other(leg))
    }

    pub fn wire_node_count(&self) -> usize {
        self.nodes.values().filter(|n| n.is_wire()).count()
    }

    fn next_id(&self) -> usize {
        self.nodes.keys().next_back().map_or(0, |&k| k + 1)
    }
}
