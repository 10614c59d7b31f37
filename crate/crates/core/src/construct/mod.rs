//! Constructive nowhere-zero `Z2 × Z3`-flows.
//!
//! [`solve`] takes a 2-edge-connected multigraph `G` and a root `u` and
//! returns a nowhere-zero flow `f2 × f3` whose `f2` vanishes on every edge at
//! `u`. It follows the induction on `|V|`:
//!
//! * `|V| = 1`: every edge is a loop and gets `(0, 1)`.
//! * `G - u` has a bridge or is disconnected: `G` is split into one child
//!   per 2-edge-connected block of `G - u`, each child being the block plus
//!   a root standing in for everything else. Child flows are glued by
//!   negating `f3` on whole children until the two copies of each bridge
//!   agree.
//! * otherwise: take the two smallest non-loop edges `ux`, `ux'`, two
//!   edge-disjoint paths from `x` to `x'` in `G - u` forming `H`, and the edges `S`
//!   between `u` and `V(H)`. Solve `G / (E(H) ∪ S)`, give `S` nonzero `f3`
//!   and zero `f2`, then extend `f3` over `E(H)` and put `f2 = 1` on `E(H)`.
//!
//! Recursion runs on an explicit stack, so depth is bounded only by memory.

mod engine;
mod extend;

use std::fmt;

use thiserror::Error;

pub use extend::{extend_flow_over_contraction, extend_nonzero_parallel, ExtendError, Sense};

use crate::connectivity::{two_edge_connectivity_obstruction, Obstruction};
use crate::flows::{check_theorem2, Flow, GroupFlow};
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use engine::{Engine, InstEdge, Instance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("root {0} is not a vertex of the graph")]
    UnknownRoot(VertexId),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not 2-edge-connected: edge {0} is a bridge")]
    Bridge(EdgeId),
    #[error("graph is not 2-edge-connected: {0} is not reachable from v0")]
    Disconnected(VertexId),
    #[error("internal invariant violated: {0}")]
    Defect(String),
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Re-verify every intermediate flow and check 2-edge-connectivity of
    /// every instance handed to the recursion.
    pub debug_verify: bool,
}

/// One bridge of `G - u` used to split an instance, with the number of
/// vertices of its component of `G - u` on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutRecord {
    pub bridge: EdgeId,
    pub tail_side: usize,
    pub head_side: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// A single vertex; all edges are loops.
    Base { loops: usize },
    /// `G - u` was split into blocks.
    Decompose {
        components: usize,
        cuts: Vec<CutRecord>,
        /// Vertex count of each child instance.
        parts: Vec<usize>,
    },
    /// `G - u` was connected and bridgeless.
    Bridgeless {
        first: EdgeId,
        second: EdgeId,
        h_edges: Vec<EdgeId>,
        s_edges: Vec<EdgeId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub depth: usize,
    pub vertices: usize,
    pub edges: usize,
    pub kind: StepKind,
}

/// Every recursion step in the order it was taken. Edge ids are those of
/// the input graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
}

impl ConstructionTrace {
    pub fn max_depth(&self) -> usize {
        self.steps.iter().map(|s| s.depth).max().unwrap_or(0)
    }

    /// `(base, decompose, bridgeless)` step counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.steps
            .iter()
            .fold((0, 0, 0), |(b, d, h), s| match s.kind {
                StepKind::Base { .. } => (b + 1, d, h),
                StepKind::Decompose { .. } => (b, d + 1, h),
                StepKind::Bridgeless { .. } => (b, d, h + 1),
            })
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |v: &[EdgeId]| {
            v.iter()
                .map(|e| e.0.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "depth={} n={} m={} ",
            self.depth, self.vertices, self.edges
        )?;
        match &self.kind {
            StepKind::Base { loops } => write!(f, "base loops={loops}"),
            StepKind::Decompose {
                components,
                cuts,
                parts,
            } => {
                write!(f, "cut components={components} parts=")?;
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join(","))?;
                for c in cuts {
                    write!(f, " bridge={}:{}|{}", c.bridge.0, c.tail_side, c.head_side)?;
                }
                Ok(())
            }
            StepKind::Bridgeless {
                first,
                second,
                h_edges,
                s_edges,
            } => write!(
                f,
                "bridgeless ux={} ux'={} H=[{}] S=[{}]",
                first.0,
                second.0,
                ids(h_edges),
                ids(s_edges)
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub flow: GroupFlow,
    pub trace: ConstructionTrace,
}

pub fn solve(g: &Multigraph, root: VertexId) -> Result<Solution, SolveError> {
    solve_with(g, root, &SolveOptions::default())
}

pub fn solve_with(
    g: &Multigraph,
    root: VertexId,
    options: &SolveOptions,
) -> Result<Solution, SolveError> {
    if !g.contains_vertex(root) {
        return Err(if g.vertex_count() == 0 {
            SolveError::Empty
        } else {
            SolveError::UnknownRoot(root)
        });
    }
    match two_edge_connectivity_obstruction(g) {
        None => {}
        Some(Obstruction::Empty) => return Err(SolveError::Empty),
        Some(Obstruction::Bridge(e)) => return Err(SolveError::Bridge(e)),
        Some(Obstruction::Disconnected(v)) => return Err(SolveError::Disconnected(v)),
    }

    // root becomes local vertex 0, everything else keeps its relative order
    let local = |v: VertexId| match v.0.cmp(&root.0) {
        std::cmp::Ordering::Less => v.0 as u32 + 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => v.0 as u32,
    };
    let top = Instance {
        n: g.vertex_count() as u32,
        edges: g
            .edges()
            .map(|e| InstEdge {
                slot: e.id.0 as u32,
                orig: e.id.0 as u32,
                tail: local(e.tail),
                head: local(e.head),
            })
            .collect(),
    };

    let mut engine = Engine::new(g.edge_id_bound(), options);
    engine.run(top)?;

    let mut flow = Flow::with_capacity(g.edge_id_bound());
    for e in g.edge_ids() {
        flow.set(e, engine.values[e.0]);
    }
    if let Err(v) = check_theorem2(g, root, &flow) {
        return Err(SolveError::Defect(format!("final flow rejected: {v}")));
    }
    Ok(Solution {
        flow,
        trace: ConstructionTrace {
            steps: engine.trace,
        },
    })
}
