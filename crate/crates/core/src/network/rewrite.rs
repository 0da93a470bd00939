//! Value-preserving rewrites on tagged wire nodes.
//!
//! Rules operate on a copy of the input graph and never change its open-leg
//! signature.

use num_complex::Complex64 as C64;

use super::{Edge, LegRef, NetworkError, NetworkNode, NetworkResult, NodeKind, Signature, TensorNetworkGraph};
use crate::tensor::{bend, Tensor, Variance};

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteEvent {
    pub rule: &'static str,
    /// Nodes removed or replaced by the rewrite.
    pub nodes: Vec<usize>,
    /// Edges added by the rewrite.
    pub edges: Vec<Edge>,
    pub before: Signature,
    pub after: Signature,
}

/// Where a dangling wire end goes once its node is removed.
#[derive(Debug, Clone, Copy)]
enum WireEnd {
    Wired(LegRef),
    Open(usize),
}

impl TensorNetworkGraph {
    fn wire_end(&self, leg: LegRef) -> WireEnd {
        match self.partner(leg) {
            Some(p) => WireEnd::Wired(p),
            None => WireEnd::Open(self.open.iter().position(|&o| o == leg).expect("uncovered leg")),
        }
    }

    fn detach(&mut self, id: usize) {
        self.nodes.remove(&id);
        self.edges.retain(|e| e.0.node != id && e.1.node != id);
    }

    /// Replaces a closed loop through `ids` by a scalar node worth `d`.
    fn close_loop(&mut self, ids: &[usize], d: usize) -> usize {
        for &id in ids {
            self.detach(id);
        }
        let id = self.next_id();
        self.nodes.insert(id, NetworkNode::dense(id, Tensor::scalar(C64::new(d as f64, 0.0))));
        id
    }

    /// Joins two wire ends whose owning nodes have been detached. Returns the
    /// new edge when one was created.
    fn join(&mut self, a: WireEnd, b: WireEnd, first: Variance, d: usize) -> NetworkResult<Option<Edge>> {
        match (a, b) {
            (WireEnd::Wired(x), WireEnd::Wired(y)) => {
                let e = Edge::new(x, y);
                self.edges.push(e);
                Ok(Some(e))
            }
            (WireEnd::Wired(x), WireEnd::Open(p)) | (WireEnd::Open(p), WireEnd::Wired(x)) => {
                self.open[p] = x;
                Ok(None)
            }
            (WireEnd::Open(p), WireEnd::Open(q)) => {
                let id = self.next_id();
                self.nodes.insert(id, NetworkNode::tagged(id, NodeKind::Delta, d, [first, first.flip()])?);
                self.open[p] = LegRef::new(id, 0);
                self.open[q] = LegRef::new(id, 1);
                Ok(None)
            }
        }
    }

    /// One snake step, or `None` at a fixed point.
    fn snake_step(&mut self) -> Option<RewriteEvent> {
        let before = self.signature();

        let delta = self.nodes.values().find(|n| {
            n.kind() == NodeKind::Delta
                && (self.partner(LegRef::new(n.id(), 0)).is_some() || self.partner(LegRef::new(n.id(), 1)).is_some())
        });
        if let Some(node) = delta {
            let (id, d) = (node.id(), node.legs()[0].dim());
            let (l0, l1) = (LegRef::new(id, 0), LegRef::new(id, 1));
            if self.partner(l0) == Some(l1) {
                let scalar = self.close_loop(&[id], d);
                let after = self.signature();
                return Some(RewriteEvent {
                    rule: "delta-loop",
                    nodes: vec![id, scalar],
                    edges: vec![],
                    before,
                    after,
                });
            }
            let (a, b) = (self.wire_end(l0), self.wire_end(l1));
            let first = self.leg_spec(l0).expect("live node").variance();
            self.detach(id);
            let edge = self.join(a, b, first, d).expect("two ends never both open here");
            let after = self.signature();
            return Some(RewriteEvent {
                rule: "delta-elimination",
                nodes: vec![id],
                edges: edge.into_iter().collect(),
                before,
                after,
            });
        }

        let pair = self.nodes.values().filter(|n| n.kind() == NodeKind::Cup).find_map(|cup| {
            (0..2).find_map(|i| {
                let p = self.partner(LegRef::new(cup.id(), i))?;
                (self.nodes[&p.node].kind() == NodeKind::Cap).then_some((cup.id(), i, p))
            })
        });
        let (cup, i, cap_leg) = pair?;
        let d = self.nodes[&cup].legs()[0].dim();
        let cup_other = LegRef::new(cup, 1 - i);
        let cap_other = LegRef::new(cap_leg.node, 1 - cap_leg.leg);
        if self.partner(cup_other) == Some(cap_other) {
            let scalar = self.close_loop(&[cup, cap_leg.node], d);
            let after = self.signature();
            return Some(RewriteEvent {
                rule: "snake-loop",
                nodes: vec![cup, cap_leg.node, scalar],
                edges: vec![],
                before,
                after,
            });
        }
        let (a, b) = (self.wire_end(cup_other), self.wire_end(cap_other));
        self.detach(cup);
        self.detach(cap_leg.node);
        let edge = self.join(a, b, Variance::Up, d).expect("tagged delta is well formed");
        let after = self.signature();
        Some(RewriteEvent {
            rule: "snake",
            nodes: vec![cup, cap_leg.node],
            edges: edge.into_iter().collect(),
            before,
            after,
        })
    }
}

/// Eliminates every wired identity node and every cup joined to a cap,
/// repeating until no rule applies. Closed loops become scalar nodes.
pub fn rewrite_snake(g: &TensorNetworkGraph) -> (TensorNetworkGraph, Vec<RewriteEvent>) {
    let mut out = g.clone();
    let mut events = Vec::new();
    while let Some(event) = out.snake_step() {
        events.push(event);
    }
    debug_assert!(out.validate().is_ok());
    (out, events)
}

/// Rewrites a two-legged node as a map acting on a wire: the node is bent
/// into a matrix at `leg` and that leg is routed through a new cap (or cup,
/// for an upper leg) whose free end takes the original open position.
pub fn apply_map_state_duality(
    g: &TensorNetworkGraph,
    node: usize,
    leg: usize,
) -> NetworkResult<(TensorNetworkGraph, RewriteEvent)> {
    let target = g.nodes.get(&node).ok_or(NetworkError::UnknownNode(node))?;
    if target.valence() != 2 {
        return Err(NetworkError::NotValenceTwo { id: node, valence: target.valence() });
    }
    let leg_ref = LegRef::new(node, leg);
    let spec = g.leg_spec(leg_ref)?;
    let position = g.open.iter().position(|&o| o == leg_ref).ok_or(NetworkError::NotOpen(leg_ref))?;

    let before = g.signature();
    let mut out = g.clone();
    let bent = bend(target.tensor(), leg)?;
    out.nodes.insert(node, NetworkNode::dense(node, bent));

    let wire_id = out.next_id();
    let wire = match spec.variance() {
        Variance::Down => NetworkNode::cap(wire_id, spec.dim())?,
        Variance::Up => NetworkNode::cup(wire_id, spec.dim())?,
    };
    out.nodes.insert(wire_id, wire);
    let edge = Edge::new(leg_ref, LegRef::new(wire_id, 0));
    out.edges.push(edge);
    out.open[position] = LegRef::new(wire_id, 1);
    out.validate()?;

    let after = out.signature();
    Ok((out, RewriteEvent { rule: "map-state-duality", nodes: vec![node, wire_id], edges: vec![edge], before, after }))
}
