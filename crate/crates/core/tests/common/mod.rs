//! Random networks and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use ent_evolve::network::{build_network, Edge, LegRef, NetworkNode, TensorNetworkGraph};
use ent_evolve::tensor::{IndexSpec, Tensor, Variance};
use ent_evolve::C64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_tensor<R: Rng>(rng: &mut R, legs: Vec<IndexSpec>) -> Tensor {
    Tensor::from_fn(legs, |_| random_c64(rng)).unwrap()
}

/// Raw material for a graph; snakes can be spliced in before building.
#[derive(Debug, Clone)]
pub struct Blueprint {
    pub nodes: Vec<NetworkNode>,
    pub edges: Vec<Edge>,
    pub open: Vec<LegRef>,
}

impl Blueprint {
    pub fn build(&self) -> TensorNetworkGraph {
        build_network(self.nodes.clone(), self.edges.clone(), self.open.clone()).unwrap()
    }

    fn next_id(&self) -> usize {
        self.nodes.iter().map(NetworkNode::id).max().map_or(0, |m| m + 1)
    }

    fn variance(&self, leg: LegRef) -> (usize, Variance) {
        let node = self.nodes.iter().find(|n| n.id() == leg.node).unwrap();
        let spec = &node.legs()[leg.leg];
        (spec.dim(), spec.variance())
    }

    /// Replaces edge `k` (or wires onto open leg `k - edges`) with a
    /// cup-cap zig-zag, or a cap-cup one, depending on the variances.
    pub fn inject_snake(&mut self, k: usize) {
        let id = self.next_id();
        if k < self.edges.len() {
            let Edge(a, b) = self.edges.remove(k);
            let (d, va) = self.variance(a);
            let (down, up) = if va == Variance::Down { (a, b) } else { (b, a) };
            self.nodes.push(NetworkNode::cup(id, d).unwrap());
            self.nodes.push(NetworkNode::cap(id + 1, d).unwrap());
            self.edges.push(Edge::new(down, LegRef::new(id, 0)));
            self.edges.push(Edge::new(LegRef::new(id, 1), LegRef::new(id + 1, 0)));
            self.edges.push(Edge::new(LegRef::new(id + 1, 1), up));
        } else {
            let pos = k - self.edges.len();
            let leg = self.open[pos];
            let (d, v) = self.variance(leg);
            // The open end keeps its variance: a Down leg is extended by
            // cup then cap, an Up leg by cap then cup.
            let (first, second) = if v == Variance::Down {
                (NetworkNode::cup(id, d).unwrap(), NetworkNode::cap(id + 1, d).unwrap())
            } else {
                (NetworkNode::cap(id, d).unwrap(), NetworkNode::cup(id + 1, d).unwrap())
            };
            self.nodes.push(first);
            self.nodes.push(second);
            self.edges.push(Edge::new(leg, LegRef::new(id, 0)));
            self.edges.push(Edge::new(LegRef::new(id, 1), LegRef::new(id + 1, 0)));
            self.open[pos] = LegRef::new(id + 1, 1);
        }
    }

    /// Puts a delta node in the middle of edge `k`.
    pub fn inject_delta(&mut self, k: usize) {
        let id = self.next_id();
        let Edge(a, b) = self.edges.remove(k);
        let (d, va) = self.variance(a);
        let (down, up) = if va == Variance::Down { (a, b) } else { (b, a) };
        self.nodes.push(NetworkNode::delta(id, d).unwrap());
        self.edges.push(Edge::new(down, LegRef::new(id, 0)));
        self.edges.push(Edge::new(LegRef::new(id, 1), up));
    }
}

/// Dense nodes wired by `edges` random edges (self-edges allowed), each
/// node with up to two extra open legs. Dimensions in `1..=max_dim`.
pub fn random_blueprint<R: Rng>(rng: &mut R, nodes: usize, edges: usize, max_dim: usize) -> Blueprint {
    let mut legs: Vec<Vec<IndexSpec>> = vec![Vec::new(); nodes];
    let mut edge_list = Vec::new();
    for _ in 0..edges {
        let a = rng.random_range(0..nodes);
        let b = rng.random_range(0..nodes);
        let d = rng.random_range(1..=max_dim);
        let la = LegRef::new(a, legs[a].len());
        legs[a].push(IndexSpec::down(d));
        let lb = LegRef::new(b, legs[b].len());
        legs[b].push(IndexSpec::up(d));
        edge_list.push(Edge::new(la, lb));
    }
    let mut open = Vec::new();
    for (n, l) in legs.iter_mut().enumerate() {
        for _ in 0..rng.random_range(0..=2usize) {
            if l.len() >= 5 {
                break;
            }
            let d = rng.random_range(1..=max_dim);
            let v = if rng.random_bool(0.5) { Variance::Up } else { Variance::Down };
            open.push(LegRef::new(n, l.len()));
            l.push(IndexSpec::new(d, v).unwrap());
        }
    }
    // Shuffle open-leg order so outputs are not always node-sorted.
    for i in (1..open.len()).rev() {
        let j = rng.random_range(0..=i);
        open.swap(i, j);
    }
    let nodes = legs.into_iter().enumerate().map(|(id, l)| NetworkNode::dense(id, random_tensor(rng, l))).collect();
    Blueprint { nodes, edges: edge_list, open }
}

/// Brute-force evaluation: sums over every assignment of every edge index.
pub fn naive_evaluate(g: &TensorNetworkGraph) -> Tensor {
    let edges = g.edges();
    let edge_dims: Vec<usize> = edges.iter().map(|e| g.leg_spec(e.0).unwrap().dim()).collect();
    let open_specs: Vec<IndexSpec> = g.open_legs().iter().map(|&l| g.leg_spec(l).unwrap().clone()).collect();
    let mut out = Tensor::zeros(open_specs.iter().map(|s| IndexSpec::new(s.dim(), s.variance()).unwrap()).collect())
        .unwrap()
        .into_data();
    let open_dims: Vec<usize> = open_specs.iter().map(IndexSpec::dim).collect();
    let total_open: usize = open_dims.iter().product();
    let total_edge: usize = edge_dims.iter().product();
    for (o, slot) in out.iter_mut().enumerate().take(total_open) {
        let oidx = unravel(o, &open_dims);
        let mut acc = c(0.0, 0.0);
        for e in 0..total_edge {
            let eidx = unravel(e, &edge_dims);
            let mut prod = c(1.0, 0.0);
            for node in g.nodes() {
                let pos: Vec<usize> = (0..node.valence())
                    .map(|leg| {
                        let l = LegRef::new(node.id(), leg);
                        if let Some(k) = g.open_legs().iter().position(|&x| x == l) {
                            oidx[k]
                        } else {
                            let k = edges.iter().position(|x| x.touches(l)).unwrap();
                            eidx[k]
                        }
                    })
                    .collect();
                prod *= node.tensor().get(&pos).unwrap();
            }
            acc += prod;
        }
        *slot = acc;
    }
    Tensor::new(open_specs.iter().map(|s| IndexSpec::new(s.dim(), s.variance()).unwrap()).collect(), out).unwrap()
}

pub fn unravel(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (slot, &d) in idx.iter_mut().zip(dims).rev() {
        *slot = k % d;
        k /= d;
    }
    idx
}
