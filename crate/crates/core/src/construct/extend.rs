//! Extending a flow from `G/S` back to `G`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::flows::{Flow, Group, Z3};
use crate::multigraph::{Direction, EdgeId, Multigraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("need at least two parallel edges, got {0}")]
    TooFewEdges(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} outside the contracted set has no value")]
    MissingValue(EdgeId),
    #[error("values outside the contracted set are not a flow of the contracted graph (at {0})")]
    NotAFlow(VertexId),
}

/// Orientation of a parallel edge relative to a fixed reference direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Along,
    Against,
}

impl Sense {
    fn sign(self) -> i64 {
        match self {
            Sense::Along => 1,
            Sense::Against => -1,
        }
    }
}

/// Nonzero `Z3` values on `k >= 2` parallel edges whose signed sum is
/// `target`.
///
/// Every edge starts at 1. If the signed sum is off by `r`, the last edge
/// whose sign equals `r` is raised to 2; when no such edge exists all signs
/// agree and the last two are raised instead.
pub fn extend_nonzero_parallel(target: Z3, senses: &[Sense]) -> Result<Vec<Z3>, ExtendError> {
    if senses.len() < 2 {
        return Err(ExtendError::TooFewEdges(senses.len()));
    }
    let mut values = vec![Z3::new(1); senses.len()];
    let sum: i64 = senses.iter().map(|s| s.sign()).sum();
    let r = (target - Z3::new(sum)).value();
    if r == 0 {
        return Ok(values);
    }
    // raising one edge of sign s moves the sum by s; r = 1 wants +1, r = 2 wants -1
    let wanted = if r == 1 { Sense::Along } else { Sense::Against };
    match senses.iter().rposition(|&s| s == wanted) {
        Some(i) => values[i] = Z3::new(2),
        None => {
            let k = values.len();
            values[k - 1] = Z3::new(2);
            values[k - 2] = Z3::new(2);
        }
    }
    Ok(values)
}

/// One tree edge in a propagation order: `vertex` hangs from `parent` by
/// `edge`, and `into_vertex` says whether the edge points at `vertex`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TreeLink {
    pub vertex: u32,
    pub parent: u32,
    pub edge: u32,
    pub into_vertex: bool,
}

/// Solves tree edge values so that every non-root vertex ends with zero
/// excess. `links` must list parents before children. `excess` holds each
/// vertex's excess from the already-fixed edges and is updated in place, so
/// afterwards only tree roots can be nonzero. Values are written via `assign`.
pub(crate) fn propagate_tree<T: Group>(
    links: &[TreeLink],
    excess: &mut [T],
    mut assign: impl FnMut(u32, T),
) {
    for link in links.iter().rev() {
        let here = excess[link.vertex as usize];
        // value x contributes +x at the head and -x at the tail
        let x = if link.into_vertex { -here } else { here };
        assign(link.edge, x);
        excess[link.vertex as usize] = T::zero();
        let p = link.parent as usize;
        excess[p] = if link.into_vertex {
            excess[p] - x
        } else {
            excess[p] + x
        };
    }
}

/// Fills in the edges of `contracted` so that `f` becomes a flow on `g`.
///
/// Every edge outside `contracted` must already carry a value, and those
/// values must form a flow of `g / contracted`. A breadth-first spanning
/// forest of `(V, contracted)` is grown from the smallest vertex of each
/// component using edges in id order. Contracted edges that are not in the
/// forest keep their value from `f` if they have one and get zero otherwise;
/// forest edges are then solved from the leaves up.
pub fn extend_flow_over_contraction<T: Group>(
    g: &Multigraph,
    contracted: &[EdgeId],
    f: &mut Flow<T>,
) -> Result<(), ExtendError> {
    let mut in_set = vec![false; g.edge_id_bound()];
    for &e in contracted {
        if !g.contains_edge(e) {
            return Err(ExtendError::UnknownEdge(e));
        }
        in_set[e.0] = true;
    }

    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; g.edge_id_bound()];
    let mut links = Vec::new();
    let mut tree_roots = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        tree_roots.push(s);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(e, dir) in g.incidence(VertexId(v)) {
                if !in_set[e.0] {
                    continue;
                }
                let edge = g.edge(e).unwrap();
                let w = edge.other(VertexId(v)).0;
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                tree_edge[e.0] = true;
                links.push(TreeLink {
                    vertex: w as u32,
                    parent: v as u32,
                    edge: e.0 as u32,
                    into_vertex: dir == Direction::Out,
                });
                queue.push_back(w);
            }
        }
    }

    for &e in contracted {
        if !tree_edge[e.0] && f.get(e).is_none() {
            f.set(e, T::zero());
        }
    }

    let mut excess = vec![T::zero(); n];
    for edge in g.edges() {
        if tree_edge[edge.id.0] {
            continue;
        }
        let value = f.get(edge.id).ok_or(ExtendError::MissingValue(edge.id))?;
        excess[edge.head.0] = excess[edge.head.0] + value;
        excess[edge.tail.0] = excess[edge.tail.0] - value;
    }

    propagate_tree(&links, &mut excess, |e, x| f.set(EdgeId(e as usize), x));

    match tree_roots.into_iter().find(|&r| !excess[r].is_zero()) {
        Some(r) => Err(ExtendError::NotAFlow(VertexId(r))),
        None => Ok(()),
    }
}
