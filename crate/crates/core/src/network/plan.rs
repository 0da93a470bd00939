//! Contraction planning and evaluation.
//!
//! A plan is an ordered list of edge ids. Executing a step on an edge whose
//! endpoints sit in two different partial results contracts *every* pending
//! edge between those two results at once; a step on an edge whose endpoints
//! already share a partial result is a partial trace. Steps naming an edge
//! that an earlier step already absorbed are no-ops.
//!
//! The cost of a step is the product of all wire dimensions it touches, each
//! wire counted once. For a pairwise contraction that is exactly the number
//! of multiply-adds performed.

use std::collections::{BTreeMap, HashMap};

use super::{Edge, LegRef, NetworkError, NetworkResult, TensorNetworkGraph};
use crate::tensor::{contract, outer, partial_trace, permute, Tensor};

/// `plan_exhaustive` refuses graphs with more edges than this.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionPlan {
    pub steps: Vec<usize>,
    pub estimated_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvaluationStats {
    pub multiply_adds: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
struct Move {
    edge: usize,
    absorbs: Vec<usize>,
    cost: f64,
    result_size: f64,
}

/// Shape-only view of a graph used by both planners.
struct Shape<'a> {
    edges: &'a [Edge],
    node_slot: BTreeMap<usize, usize>,
    node_legs: Vec<Vec<(LegRef, f64)>>,
    leg_edge: HashMap<LegRef, usize>,
    edge_dim: Vec<f64>,
    /// Edge ids sorted by endpoint key, the tie-breaking order.
    by_key: Vec<usize>,
}

impl<'a> Shape<'a> {
    fn new(g: &'a TensorNetworkGraph) -> Self {
        let node_slot: BTreeMap<usize, usize> = g.nodes.keys().enumerate().map(|(k, &id)| (id, k)).collect();
        let node_legs = g
            .nodes
            .values()
            .map(|n| n.legs().iter().enumerate().map(|(k, s)| (LegRef::new(n.id(), k), s.dim() as f64)).collect())
            .collect();
        let mut leg_edge = HashMap::new();
        for (k, e) in g.edges.iter().enumerate() {
            leg_edge.insert(e.0, k);
            leg_edge.insert(e.1, k);
        }
        let edge_dim = g.edges.iter().map(|e| g.leg_spec(e.0).expect("validated").dim() as f64).collect();
        let mut by_key: Vec<usize> = (0..g.edges.len()).collect();
        by_key.sort_by_key(|&k| g.edges[k].key());
        Self { edges: &g.edges, node_slot, node_legs, leg_edge, edge_dim, by_key }
    }

    /// Cluster label per node slot given the consumed edges.
    fn clusters(&self, consumed: &[bool]) -> Vec<usize> {
        let n = self.node_legs.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (k, e) in self.edges.iter().enumerate() {
            if consumed[k] {
                let a = find(&mut parent, self.node_slot[&e.0.node]);
                let b = find(&mut parent, self.node_slot[&e.1.node]);
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }

    fn moves(&self, consumed: &[bool]) -> Vec<Move> {
        let label = self.clusters(consumed);
        let mut size = vec![1.0f64; label.len()];
        for (slot, legs) in self.node_legs.iter().enumerate() {
            for (leg, dim) in legs {
                let live = self.leg_edge.get(leg).is_none_or(|&e| !consumed[e]);
                if live {
                    size[label[slot]] *= dim;
                }
            }
        }
        let cluster_of = |leg: LegRef| label[self.node_slot[&leg.node]];

        let mut out = Vec::new();
        for &k in &self.by_key {
            if consumed[k] {
                continue;
            }
            let e = self.edges[k];
            let (ca, cb) = (cluster_of(e.0), cluster_of(e.1));
            let d = self.edge_dim[k];
            if ca == cb {
                out.push(Move { edge: k, absorbs: vec![k], cost: size[ca] / d, result_size: size[ca] / (d * d) });
                continue;
            }
            let mut absorbs = Vec::new();
            let mut shared = 1.0;
            for (j, f) in self.edges.iter().enumerate() {
                if consumed[j] {
                    continue;
                }
                let (fa, fb) = (cluster_of(f.0), cluster_of(f.1));
                if (fa == ca && fb == cb) || (fa == cb && fb == ca) {
                    absorbs.push(j);
                    shared *= self.edge_dim[j];
                }
            }
            let joint = size[ca] * size[cb];
            out.push(Move { edge: k, absorbs, cost: joint / shared, result_size: joint / (shared * shared) });
        }
        out
    }
}

/// Contracts, at every step, the edge whose result has the smallest
/// dimension product. Ties go to the edge with the smallest endpoint key.
pub fn plan_greedy(g: &TensorNetworkGraph) -> ContractionPlan {
    let shape = Shape::new(g);
    let mut consumed = vec![false; g.edges.len()];
    let mut steps = Vec::new();
    let mut cost = 0.0;
    loop {
        let moves = shape.moves(&consumed);
        // `moves` is already in key order, so the first minimum wins ties.
        let Some(best) = moves.into_iter().reduce(|a, b| if b.result_size < a.result_size { b } else { a }) else {
            break;
        };
        for &j in &best.absorbs {
            consumed[j] = true;
        }
        steps.push(best.edge);
        cost += best.cost;
    }
    ContractionPlan { steps, estimated_cost: cost }
}

/// Best cost from a consumed-edge mask, and the move that achieves it.
type Memo = HashMap<u32, (f64, Option<(usize, u32)>)>;

/// Minimum-cost plan over every edge order, by memoized search over the set
/// of already-contracted edges.
pub fn plan_exhaustive(g: &TensorNetworkGraph) -> NetworkResult<ContractionPlan> {
    let n = g.edges.len();
    if n > EXHAUSTIVE_EDGE_LIMIT {
        return Err(NetworkError::TooManyEdges { edges: n, limit: EXHAUSTIVE_EDGE_LIMIT });
    }
    let shape = Shape::new(g);
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut memo: Memo = HashMap::new();

    fn solve(shape: &Shape<'_>, mask: u32, full: u32, memo: &mut Memo) -> f64 {
        if mask == full {
            return 0.0;
        }
        if let Some(&(c, _)) = memo.get(&mask) {
            return c;
        }
        let consumed: Vec<bool> = (0..shape.edges.len()).map(|k| mask & (1 << k) != 0).collect();
        let mut best = (f64::INFINITY, None);
        for m in shape.moves(&consumed) {
            let next = m.absorbs.iter().fold(mask, |acc, &j| acc | (1 << j));
            let total = m.cost + solve(shape, next, full, memo);
            if total < best.0 {
                best = (total, Some((m.edge, next)));
            }
        }
        memo.insert(mask, best);
        best.0
    }

    let cost = solve(&shape, 0, full, &mut memo);
    let mut steps = Vec::new();
    let mut mask = 0;
    while mask != full {
        let (_, choice) = memo[&mask];
        let (edge, next) = choice.expect("every incomplete state has a move");
        steps.push(edge);
        mask = next;
    }
    Ok(ContractionPlan { steps, estimated_cost: cost })
}

/// Estimated cost of executing `plan` on `g`.
pub fn plan_cost(g: &TensorNetworkGraph, plan: &ContractionPlan) -> NetworkResult<f64> {
    let shape = Shape::new(g);
    let mut consumed = vec![false; g.edges.len()];
    let mut cost = 0.0;
    for &step in &plan.steps {
        if step >= g.edges.len() {
            return Err(NetworkError::UnknownEdge(step));
        }
        if consumed[step] {
            continue;
        }
        let m = shape.moves(&consumed).into_iter().find(|m| m.edge == step).expect("unconsumed edge always has a move");
        for &j in &m.absorbs {
            consumed[j] = true;
        }
        cost += m.cost;
    }
    if consumed.iter().any(|c| !c) {
        return Err(NetworkError::IncompletePlan);
    }
    Ok(cost)
}

/// Evaluates the network; indices of the result follow the open-leg order.
/// Without a plan, [`plan_greedy`] is used.
pub fn evaluate(g: &TensorNetworkGraph, plan: Option<&ContractionPlan>) -> NetworkResult<Tensor> {
    evaluate_with_stats(g, plan).map(|(t, _)| t)
}

struct Partial {
    tensor: Tensor,
    legs: Vec<LegRef>,
    members: Vec<usize>,
}

pub fn evaluate_with_stats(
    g: &TensorNetworkGraph,
    plan: Option<&ContractionPlan>,
) -> NetworkResult<(Tensor, EvaluationStats)> {
    let owned;
    let plan = match plan {
        Some(p) => p,
        None => {
            owned = plan_greedy(g);
            &owned
        }
    };

    let mut parts: Vec<Option<Partial>> = Vec::new();
    let mut part_of: BTreeMap<usize, usize> = BTreeMap::new();
    for node in g.nodes.values() {
        part_of.insert(node.id(), parts.len());
        parts.push(Some(Partial {
            tensor: node.tensor().clone(),
            legs: (0..node.valence()).map(|k| LegRef::new(node.id(), k)).collect(),
            members: vec![node.id()],
        }));
    }

    let mut consumed = vec![false; g.edges.len()];
    let mut stats = EvaluationStats::default();
    for &step in &plan.steps {
        if step >= g.edges.len() {
            return Err(NetworkError::UnknownEdge(step));
        }
        if consumed[step] {
            continue;
        }
        let e = g.edges[step];
        let (pa, pb) = (part_of[&e.0.node], part_of[&e.1.node]);
        stats.steps += 1;
        if pa == pb {
            let part = parts[pa].as_mut().expect("live partial");
            let i = part.legs.iter().position(|&l| l == e.0).expect("leg present");
            let j = part.legs.iter().position(|&l| l == e.1).expect("leg present");
            let traced = partial_trace(&part.tensor, (i, j))?;
            let d = part.tensor.indices()[i].dim();
            stats.multiply_adds += (traced.len() * d) as f64;
            part.tensor = traced;
            part.legs.retain(|&l| l != e.0 && l != e.1);
            consumed[step] = true;
            continue;
        }

        let a = parts[pa].take().expect("live partial");
        let b = parts[pb].take().expect("live partial");
        let mut pairs = Vec::new();
        for (k, f) in g.edges.iter().enumerate() {
            if consumed[k] {
                continue;
            }
            let (x, y) = if part_of[&f.0.node] == pa && part_of[&f.1.node] == pb {
                (f.0, f.1)
            } else if part_of[&f.0.node] == pb && part_of[&f.1.node] == pa {
                (f.1, f.0)
            } else {
                continue;
            };
            let i = a.legs.iter().position(|&l| l == x).expect("leg present");
            let j = b.legs.iter().position(|&l| l == y).expect("leg present");
            pairs.push((i, j));
            consumed[k] = true;
        }
        let inner: usize = pairs.iter().map(|&(i, _)| a.tensor.indices()[i].dim()).product();
        let tensor = contract(&a.tensor, &b.tensor, &pairs)?;
        stats.multiply_adds += (tensor.len() * inner) as f64;

        let legs: Vec<LegRef> = a
            .legs
            .iter()
            .enumerate()
            .filter(|(i, _)| !pairs.iter().any(|p| p.0 == *i))
            .map(|(_, &l)| l)
            .chain(b.legs.iter().enumerate().filter(|(j, _)| !pairs.iter().any(|p| p.1 == *j)).map(|(_, &l)| l))
            .collect();
        let mut members = a.members;
        members.extend(b.members);
        for m in &members {
            part_of.insert(*m, pa);
        }
        parts[pa] = Some(Partial { tensor, legs, members });
    }
    if consumed.iter().any(|c| !c) {
        return Err(NetworkError::IncompletePlan);
    }

    // disconnected pieces combine by outer product, smallest node id first
    let mut live: Vec<Partial> = parts.into_iter().flatten().collect();
    live.sort_by_key(|p| p.members.iter().copied().min());
    let mut iter = live.into_iter();
    let first = iter.next().ok_or(NetworkError::Empty)?;
    let (mut tensor, mut legs) = (first.tensor, first.legs);
    for p in iter {
        tensor = outer(&tensor, &p.tensor);
        legs.extend(p.legs);
    }

    let order: Vec<usize> =
        g.open.iter().map(|o| legs.iter().position(|l| l == o).expect("open leg survives")).collect();
    let tensor = permute(&tensor, &order)?;
    Ok((tensor, stats))
}
