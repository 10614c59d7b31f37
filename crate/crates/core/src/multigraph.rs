//! Directed multigraphs with stable edge identity.
//!
//! Loops and parallel edges are ordinary edges. Contraction never mutates its
//! input: it returns a new graph together with a [`ContractionMap`] so that
//! values computed on `G/S` can be pulled back onto `G`.

use std::fmt;

use thiserror::Error;

/// Dense vertex index, always `< vertex_count()` of the owning graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Edge identifier. Assigned once at construction and kept by every graph
/// derived through contraction, reversal or vertex deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The endpoint opposite `v`. For a loop this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// Which way an edge meets a vertex in an incidence list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The vertex is the tail (edge in `δ+`).
    Out,
    /// The vertex is the head (edge in `δ-`).
    In,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} has endpoint {endpoint} but the graph has {n} vertices")]
    EndpointOutOfRange {
        index: usize,
        endpoint: usize,
        n: usize,
    },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// A directed multigraph on vertices `0..n`.
///
/// Edge ids need not be contiguous (vertex deletion leaves holes), but they
/// are always unique and iteration visits edges in increasing id order.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    /// Indexed by edge id; `None` marks an id that is not part of this graph.
    slots: Vec<Option<(VertexId, VertexId)>>,
    edge_count: usize,
    incidence: Vec<Vec<(EdgeId, Direction)>>,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().map(|e| (e.id.0, e.tail.0, e.head.0)).collect();
        f.debug_struct("Multigraph")
            .field("n", &self.n)
            .field("edges", &edges)
            .finish()
    }
}

impl Multigraph {
    /// Builds a graph whose edge ids are `0..arcs.len()` in input order.
    pub fn build(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut slots = Vec::with_capacity(arcs.len());
        for (index, &(t, h)) in arcs.iter().enumerate() {
            for endpoint in [t, h] {
                if endpoint >= n {
                    return Err(GraphError::EndpointOutOfRange { index, endpoint, n });
                }
            }
            slots.push(Some((VertexId(t), VertexId(h))));
        }
        Ok(Self::from_slots(n, slots))
    }

    fn from_slots(n: usize, slots: Vec<Option<(VertexId, VertexId)>>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (i, slot) in slots.iter().enumerate() {
            if let Some((t, h)) = *slot {
                edge_count += 1;
                incidence[t.0].push((EdgeId(i), Direction::Out));
                incidence[h.0].push((EdgeId(i), Direction::In));
            }
        }
        Multigraph {
            n,
            slots,
            edge_count,
            incidence,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest edge id that may occur in this graph.
    pub fn edge_id_bound(&self) -> usize {
        self.slots.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, s)| {
            s.map(|(tail, head)| Edge {
                id: EdgeId(i),
                tail,
                head,
            })
        })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|e| e.id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.slots
            .get(id.0)
            .copied()
            .flatten()
            .map(|(tail, head)| Edge { id, tail, head })
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 < self.n
    }

    /// `δ(v)` as (edge, direction) pairs in increasing edge id order. A loop
    /// shows up twice, once per direction.
    pub fn incidence(&self, v: VertexId) -> &[(EdgeId, Direction)] {
        &self.incidence[v.0]
    }

    /// `δ+(v)`: edges whose tail is `v`.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incidence[v.0]
            .iter()
            .filter(|(_, d)| *d == Direction::Out)
            .map(|(e, _)| *e)
    }

    /// `δ-(v)`: edges whose head is `v`.
    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incidence[v.0]
            .iter()
            .filter(|(_, d)| *d == Direction::In)
            .map(|(e, _)| *e)
    }

    /// `δ(v)` as a set of edge ids (loops once), increasing.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.incidence[v.0].iter().map(|(e, _)| *e).collect();
        ids.dedup();
        ids
    }

    /// Contracts every edge of `set`. Vertices of the result are the connected
    /// components of the spanning subgraph `(V, set)`, numbered by their
    /// smallest original vertex. Edges outside `set` survive with their ids and
    /// orientation; those whose ends merge become loops.
    pub fn contract(&self, set: &[EdgeId]) -> Result<(Multigraph, ContractionMap), GraphError> {
        let mut in_set = vec![false; self.slots.len()];
        let mut dsu = DisjointSets::new(self.n);
        for &id in set {
            let e = self.edge(id).ok_or(GraphError::UnknownEdge(id))?;
            in_set[id.0] = true;
            dsu.union(e.tail.0, e.head.0);
        }

        let mut image = vec![usize::MAX; self.n];
        let mut next = 0;
        for v in 0..self.n {
            let r = dsu.find(v);
            if image[r] == usize::MAX {
                image[r] = next;
                next += 1;
            }
            image[v] = image[r];
        }

        let slots = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                Some((t, h)) if !in_set[i] => Some((VertexId(image[t.0]), VertexId(image[h.0]))),
                _ => None,
            })
            .collect();
        let contracted = Multigraph::from_slots(next, slots);

        let mut contracted_set: Vec<EdgeId> = set.to_vec();
        contracted_set.sort_unstable();
        contracted_set.dedup();
        let map = ContractionMap {
            vertex_image: image.into_iter().map(VertexId).collect(),
            contracted_set,
            surviving: contracted.edge_ids().collect(),
        };
        Ok((contracted, map))
    }

    /// Swaps tail and head of `e`.
    pub fn reverse_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        let edge = self.edge(e).ok_or(GraphError::UnknownEdge(e))?;
        let mut slots = self.slots.clone();
        slots[e.0] = Some((edge.head, edge.tail));
        Ok(Multigraph::from_slots(self.n, slots))
    }

    /// Removes `u` and every edge incident to it. Remaining edges keep their
    /// ids; vertices above `u` shift down by one so indices stay dense.
    pub fn delete_vertex(&self, u: VertexId) -> Result<Multigraph, GraphError> {
        if !self.contains_vertex(u) {
            return Err(GraphError::UnknownVertex(u));
        }
        let shift = |v: VertexId| if v.0 > u.0 { VertexId(v.0 - 1) } else { v };
        let slots = self
            .slots
            .iter()
            .map(|s| match *s {
                Some((t, h)) if t != u && h != u => Some((shift(t), shift(h))),
                _ => None,
            })
            .collect();
        Ok(Multigraph::from_slots(self.n - 1, slots))
    }
}

/// Records how `G/S` relates to `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    /// `vertex_image[v]` is the vertex of `G/S` that `v` was merged into.
    pub vertex_image: Vec<VertexId>,
    /// The contracted set `S`, sorted.
    pub contracted_set: Vec<EdgeId>,
    /// `E(G) \ S`, sorted.
    pub surviving: Vec<EdgeId>,
}

impl ContractionMap {
    pub fn image(&self, v: VertexId) -> VertexId {
        self.vertex_image[v.0]
    }
}

/// Union-find with path halving and union by size.
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
