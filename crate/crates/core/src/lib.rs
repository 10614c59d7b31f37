//! Nowhere-zero 6-flows in bridgeless multigraphs.
//!
//! [`construct::solve`] builds a nowhere-zero `Z2 × Z3`-flow whose `Z2` part
//! vanishes on every edge at a chosen vertex. [`tutte`] turns any
//! nowhere-zero `Z6`-flow into an integer flow with values in `-5..=5`.

pub mod connectivity;
pub mod construct;
pub mod flows;
pub mod multigraph;
pub mod testkit;
pub mod tutte;

pub use connectivity::{bridges, is_2_edge_connected, two_edge_disjoint_paths};
pub use construct::{solve, solve_with, Solution, SolveError, SolveOptions};
pub use flows::{Flow, Group, GroupFlow, IntegerFlow, Pair, Z6Flow, Z2, Z3, Z6};
pub use multigraph::{EdgeId, Multigraph, VertexId};
pub use tutte::{group_flow_to_integer_flow, Conversion, TutteError};
