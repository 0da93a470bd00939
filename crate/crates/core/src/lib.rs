//! Tensor networks with Penrose wire calculus, Kraus channels, Choi states
//! and SL-invariant entanglement measures.
//!
//! - [`tensor`]: dense complex tensors with index variance, contraction and
//!   wire bending.
//! - [`network`]: tensor-network graphs, contraction planning, snake and
//!   map-state duality rewrites, JSON files.
//! - [`quantum`]: bipartite states, density operators, Kraus channels, Choi
//!   states and the Schmidt decomposition.
//! - [`entanglement`]: G-concurrence, Wootters concurrence, convex-roof upper
//!   bounds and the checks for the one-sided evolution law.
//! - [`campaign`]: seeded, parallel verification campaigns.

pub mod campaign;
pub mod entanglement;
pub mod network;
pub mod quantum;
pub mod report;
pub mod tensor;

pub use num_complex::Complex64 as C64;
