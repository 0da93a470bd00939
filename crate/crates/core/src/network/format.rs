//! JSON network files.
//!
//! ```json
//! {
//!   "nodes": [
//!     {"id": 0, "kind": "dense", "dims": [2, 2], "variance": ["down", "down"],
//!      "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]},
//!     {"id": 1, "kind": "cup", "dims": [2, 2], "variance": ["up", "up"]}
//!   ],
//!   "edges": [[[0, 1], [1, 0]]],
//!   "open": [[0, 0], [1, 1]]
//! }
//! ```
//!
//! `data` is row-major `[re, im]` pairs and appears only on dense nodes.
//! Tagged nodes (`delta`, `cup`, `cap`) carry two equal dimensions and their
//! entries are implied. Index labels are not stored.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{build_network, Edge, LegRef, NetworkError, NetworkNode, NetworkResult, NodeKind, TensorNetworkGraph};
use crate::tensor::{IndexSpec, Tensor, Variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Dense,
    Delta,
    Cup,
    Cap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum VarianceTag {
    Up,
    Down,
}

impl From<VarianceTag> for Variance {
    fn from(v: VarianceTag) -> Self {
        match v {
            VarianceTag::Up => Variance::Up,
            VarianceTag::Down => Variance::Down,
        }
    }
}

impl From<Variance> for VarianceTag {
    fn from(v: Variance) -> Self {
        match v {
            Variance::Up => VarianceTag::Up,
            Variance::Down => VarianceTag::Down,
        }
    }
}

/// `[node id, leg index]`
pub type LegEntry = [usize; 2];
pub type EdgeEntry = [LegEntry; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: usize,
    pub kind: KindTag,
    pub dims: Vec<usize>,
    variance: Vec<VarianceTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
    pub open: Vec<LegEntry>,
}

fn leg(entry: LegEntry) -> LegRef {
    LegRef::new(entry[0], entry[1])
}

fn entry(leg: LegRef) -> LegEntry {
    [leg.node, leg.leg]
}

impl NodeEntry {
    pub fn into_node(self) -> NetworkResult<NetworkNode> {
        let malformed = |kind| NetworkError::MalformedTaggedNode { id: self.id, kind };
        if self.dims.len() != self.variance.len() {
            return Err(NetworkError::Tensor(crate::tensor::TensorError::ShapeMismatch));
        }
        let variances: Vec<Variance> = self.variance.iter().map(|&v| v.into()).collect();
        let kind = match self.kind {
            KindTag::Dense => NodeKind::Dense,
            KindTag::Delta => NodeKind::Delta,
            KindTag::Cup => NodeKind::Cup,
            KindTag::Cap => NodeKind::Cap,
        };
        if kind == NodeKind::Dense {
            let data = self.data.ok_or(malformed(kind))?;
            let indices =
                self.dims.iter().zip(&variances).map(|(&d, &v)| IndexSpec::new(d, v)).collect::<Result<Vec<_>, _>>()?;
            let data = data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
            return Ok(NetworkNode::dense(self.id, Tensor::new(indices, data)?));
        }
        if self.data.is_some() || self.dims.len() != 2 || self.dims[0] != self.dims[1] {
            return Err(malformed(kind));
        }
        // tagged nodes materialise d*d entries; refuse sizes a file could not sensibly mean
        if self.dims[0] > 1 << 12 {
            return Err(NetworkError::Tensor(crate::tensor::TensorError::TooLarge));
        }
        NetworkNode::tagged(self.id, kind, self.dims[0], [variances[0], variances[1]])
    }

    pub fn from_node(node: &NetworkNode) -> Self {
        let legs = node.legs();
        let kind = match node.kind() {
            NodeKind::Dense => KindTag::Dense,
            NodeKind::Delta => KindTag::Delta,
            NodeKind::Cup => KindTag::Cup,
            NodeKind::Cap => KindTag::Cap,
        };
        let data =
            (node.kind() == NodeKind::Dense).then(|| node.tensor().data().iter().map(|z| [z.re, z.im]).collect());
        Self {
            id: node.id(),
            kind,
            dims: legs.iter().map(IndexSpec::dim).collect(),
            variance: legs.iter().map(|s| s.variance().into()).collect(),
            data,
        }
    }
}

impl NetworkFile {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network files always serialize")
    }

    pub fn into_graph(self) -> NetworkResult<TensorNetworkGraph> {
        let nodes = self.nodes.into_iter().map(NodeEntry::into_node).collect::<NetworkResult<Vec<_>>>()?;
        let edges = self.edges.into_iter().map(|[a, b]| Edge::new(leg(a), leg(b))).collect();
        let open = self.open.into_iter().map(leg).collect();
        build_network(nodes, edges, open)
    }

    pub fn from_graph(g: &TensorNetworkGraph) -> Self {
        Self {
            nodes: g.nodes().map(NodeEntry::from_node).collect(),
            edges: g.edges().iter().map(|e| [entry(e.0), entry(e.1)]).collect(),
            open: g.open_legs().iter().copied().map(entry).collect(),
        }
    }
}
