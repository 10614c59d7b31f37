//! Undirected structure of a multigraph: components, bridges, 2-edge-connectivity,
//! the bridge partition of `G - u`, and pairs of edge-disjoint paths.
//!
//! Orientation is ignored everywhere in this module. Loops never join
//! anything, so they are dropped from the adjacency structure up front.
//!
//! The public functions work on [`Multigraph`]; the solver calls the same
//! kernels on its own compact instances through [`Csr`].

use thiserror::Error;

use crate::multigraph::{EdgeId, Multigraph, VertexId};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("bridge partition needs at least two vertices")]
    TooFewVertices,
    #[error("no two edge-disjoint paths join {0} and {1}")]
    NoDisjointPaths(VertexId, VertexId),
}

/// Compressed adjacency over local vertices `0..n` and local edges `0..m`.
/// Each vertex lists `(neighbour, edge)` in increasing edge order; loops are
/// omitted.
pub(crate) struct Csr {
    offsets: Vec<u32>,
    entries: Vec<(u32, u32)>,
}

impl Csr {
    pub(crate) fn new(n: usize, ends: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0u32; n + 1];
        for &(t, h) in ends {
            if t != h {
                offsets[t as usize + 1] += 1;
                offsets[h as usize + 1] += 1;
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0); offsets[n] as usize];
        for (e, &(t, h)) in ends.iter().enumerate() {
            if t != h {
                entries[fill[t as usize] as usize] = (h, e as u32);
                fill[t as usize] += 1;
                entries[fill[h as usize] as usize] = (t, e as u32);
                fill[h as usize] += 1;
            }
        }
        Csr { offsets, entries }
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn neighbours(&self, v: u32) -> &[(u32, u32)] {
        &self.entries[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// Labels connected components, ignoring vertex `skip` and any edge flagged in
/// `removed`. Components are numbered in order of their smallest vertex;
/// `skip` gets `NONE`. Returns the labels and the number of components.
pub(crate) fn label_components(
    csr: &Csr,
    skip: Option<u32>,
    removed: Option<&[bool]>,
) -> (Vec<u32>, u32) {
    let n = csr.vertex_count();
    let mut label = vec![NONE; n];
    let mut count = 0;
    let mut queue = Vec::new();
    for s in 0..n as u32 {
        if Some(s) == skip || label[s as usize] != NONE {
            continue;
        }
        label[s as usize] = count;
        queue.clear();
        queue.push(s);
        while let Some(v) = queue.pop() {
            for &(w, e) in csr.neighbours(v) {
                if Some(w) == skip || label[w as usize] != NONE {
                    continue;
                }
                if removed.is_some_and(|r| r[e as usize]) {
                    continue;
                }
                label[w as usize] = count;
                queue.push(w);
            }
        }
        count += 1;
    }
    (label, count)
}

/// Flags every bridge of the graph with vertex `skip` deleted, via an
/// iterative low-point depth-first search. Only the tree edge itself is
/// excluded when looking back at the parent, so a parallel sibling correctly
/// protects it.
pub(crate) fn bridge_flags(csr: &Csr, edge_count: usize, skip: Option<u32>) -> Vec<bool> {
    let n = csr.vertex_count();
    let mut bridge = vec![false; edge_count];
    let mut disc = vec![NONE; n];
    let mut low = vec![0u32; n];
    // (vertex, edge to parent, next adjacency position)
    let mut stack: Vec<(u32, u32, u32)> = Vec::new();
    let mut time = 0u32;
    for s in 0..n as u32 {
        if Some(s) == skip || disc[s as usize] != NONE {
            continue;
        }
        disc[s as usize] = time;
        low[s as usize] = time;
        time += 1;
        stack.push((s, NONE, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent_edge, pos) = *top;
            let adj = csr.neighbours(v);
            if (pos as usize) < adj.len() {
                top.2 += 1;
                let (w, e) = adj[pos as usize];
                if e == parent_edge || Some(w) == skip {
                    continue;
                }
                if disc[w as usize] == NONE {
                    disc[w as usize] = time;
                    low[w as usize] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                    if low[v as usize] > disc[p as usize] {
                        bridge[parent_edge as usize] = true;
                    }
                }
            }
        }
    }
    bridge
}

/// Two edge-disjoint simple paths from `x` to `y`, as `(edge, forward)` steps
/// where `forward` means the step runs tail to head. Found with two
/// depth-first augmentations on the unit-capacity undirected network, then
/// decomposed greedily by smallest edge, cutting out any cycle a walk closes.
pub(crate) fn two_disjoint_paths(
    csr: &Csr,
    ends: &[(u32, u32)],
    x: u32,
    y: u32,
    skip: Option<u32>,
) -> Option<[Vec<(u32, bool)>; 2]> {
    if x == y {
        return Some([Vec::new(), Vec::new()]);
    }
    let n = csr.vertex_count();
    // +1: one unit tail to head, -1: head to tail
    let mut flow = vec![0i8; ends.len()];
    let mut parent = vec![NONE; n];
    let mut seen = vec![false; n];
    let mut stack: Vec<(u32, u32)> = Vec::new();

    for _ in 0..2 {
        seen.iter_mut().for_each(|s| *s = false);
        seen[x as usize] = true;
        stack.clear();
        stack.push((x, 0));
        let mut found = false;
        'search: while let Some(top) = stack.last_mut() {
            let (v, pos) = *top;
            let adj = csr.neighbours(v);
            if (pos as usize) >= adj.len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let (w, e) = adj[pos as usize];
            if Some(w) == skip || seen[w as usize] {
                continue;
            }
            let dir: i8 = if ends[e as usize].0 == v { 1 } else { -1 };
            if flow[e as usize] == dir {
                continue;
            }
            seen[w as usize] = true;
            parent[w as usize] = e;
            if w == y {
                found = true;
                break 'search;
            }
            stack.push((w, 0));
        }
        if !found {
            return None;
        }
        let mut v = y;
        while v != x {
            let e = parent[v as usize];
            let (t, h) = ends[e as usize];
            let prev = if h == v { t } else { h };
            // the step prev -> v
            flow[e as usize] += if t == prev { 1 } else { -1 };
            v = prev;
        }
    }

    let mut cursor: Vec<u32> = vec![0; n];
    let mut used = vec![false; ends.len()];
    let mut position = vec![NONE; n];
    let mut paths: [Vec<(u32, bool)>; 2] = [Vec::new(), Vec::new()];
    for path in paths.iter_mut() {
        let mut on_path = vec![x];
        position[x as usize] = 0;
        let mut v = x;
        while v != y {
            let adj = csr.neighbours(v);
            let step = loop {
                let (w, e) = adj[cursor[v as usize] as usize];
                cursor[v as usize] += 1;
                let f = flow[e as usize];
                if f == 0 || used[e as usize] {
                    continue;
                }
                let forward = ends[e as usize].0 == v;
                if (f == 1) == forward {
                    break (w, e, forward);
                }
            };
            let (w, e, forward) = step;
            used[e as usize] = true;
            if position[w as usize] != NONE {
                let keep = position[w as usize] as usize;
                for u in on_path.drain(keep + 1..) {
                    position[u as usize] = NONE;
                }
                path.truncate(keep);
            } else {
                position[w as usize] = on_path.len() as u32;
                on_path.push(w);
                path.push((e, forward));
            }
            v = w;
        }
        for u in on_path {
            position[u as usize] = NONE;
        }
    }
    Some(paths)
}

/// Local view of a [`Multigraph`]: edges renumbered densely in id order.
struct LocalView {
    ids: Vec<EdgeId>,
    ends: Vec<(u32, u32)>,
    csr: Csr,
}

impl LocalView {
    fn new(g: &Multigraph) -> Self {
        let mut ids = Vec::with_capacity(g.edge_count());
        let mut ends = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            ids.push(e.id);
            ends.push((e.tail.0 as u32, e.head.0 as u32));
        }
        let csr = Csr::new(g.vertex_count(), &ends);
        LocalView { ids, ends, csr }
    }
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &Multigraph) -> Vec<Vec<VertexId>> {
    let view = LocalView::new(g);
    let (label, count) = label_components(&view.csr, None, None);
    let mut parts = vec![Vec::new(); count as usize];
    for (v, &l) in label.iter().enumerate() {
        parts[l as usize].push(VertexId(v));
    }
    parts
}

/// Every edge whose removal increases the number of components, in id order.
pub fn bridges(g: &Multigraph) -> Vec<EdgeId> {
    let view = LocalView::new(g);
    let flags = bridge_flags(&view.csr, view.ends.len(), None);
    view.ids
        .iter()
        .zip(flags)
        .filter_map(|(&id, b)| b.then_some(id))
        .collect()
}

/// Why a graph fails to be 2-edge-connected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The smallest-id bridge.
    Bridge(EdgeId),
    /// The graph has no vertices.
    Empty,
    /// The smallest vertex not reachable from vertex 0.
    Disconnected(VertexId),
}

/// `None` if `g` is 2-edge-connected, otherwise a witness. Disconnection is
/// reported before bridges.
pub fn two_edge_connectivity_obstruction(g: &Multigraph) -> Option<Obstruction> {
    if g.vertex_count() == 0 {
        return Some(Obstruction::Empty);
    }
    let view = LocalView::new(g);
    let (label, count) = label_components(&view.csr, None, None);
    if count > 1 {
        let v = label.iter().position(|&l| l != 0).unwrap();
        return Some(Obstruction::Disconnected(VertexId(v)));
    }
    let flags = bridge_flags(&view.csr, view.ends.len(), None);
    flags
        .iter()
        .position(|&b| b)
        .map(|i| Obstruction::Bridge(view.ids[i]))
}

/// Connected (one vertex counts) and bridgeless. Loops do not matter.
pub fn is_2_edge_connected(g: &Multigraph) -> bool {
    two_edge_connectivity_obstruction(g).is_none()
}

/// A bridge `e` of `G - u` with a split of `V \ {u}` into `tail_side` and
/// `head_side`, so that `e` is the only edge of `G - u` joining them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgePartition {
    pub bridge: EdgeId,
    pub tail_side: Vec<VertexId>,
    pub head_side: Vec<VertexId>,
}

/// For 2-edge-connected `g`, finds the smallest-id bridge of `g - u` if there
/// is one. Components of `g - u` that contain neither end of the bridge are
/// put on the tail side.
pub fn bridge_partition(
    g: &Multigraph,
    u: VertexId,
) -> Result<Option<BridgePartition>, ConnectivityError> {
    if !g.contains_vertex(u) {
        return Err(ConnectivityError::UnknownVertex(u));
    }
    if g.vertex_count() < 2 {
        return Err(ConnectivityError::TooFewVertices);
    }
    if !is_2_edge_connected(g) {
        return Err(ConnectivityError::NotTwoEdgeConnected);
    }
    let view = LocalView::new(g);
    let skip = Some(u.0 as u32);
    let flags = bridge_flags(&view.csr, view.ends.len(), skip);
    let Some(b) = flags.iter().position(|&f| f) else {
        return Ok(None);
    };
    let mut removed = vec![false; view.ends.len()];
    removed[b] = true;
    let (label, _) = label_components(&view.csr, skip, Some(&removed));
    let head_label = label[view.ends[b].1 as usize];
    let mut tail_side = Vec::new();
    let mut head_side = Vec::new();
    for (v, &l) in label.iter().enumerate() {
        if v == u.0 {
            continue;
        }
        if l == head_label {
            head_side.push(VertexId(v));
        } else {
            tail_side.push(VertexId(v));
        }
    }
    Ok(Some(BridgePartition {
        bridge: view.ids[b],
        tail_side,
        head_side,
    }))
}

/// Whether a path step runs along or against the edge's orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Traversal {
    Forward,
    Backward,
}

/// One step of an undirected path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PathStep {
    pub edge: EdgeId,
    pub traversal: Traversal,
}

/// Two edge-disjoint simple paths from `x` to `y`; both empty when `x == y`.
pub fn two_edge_disjoint_paths(
    g: &Multigraph,
    x: VertexId,
    y: VertexId,
) -> Result<(Vec<PathStep>, Vec<PathStep>), ConnectivityError> {
    for v in [x, y] {
        if !g.contains_vertex(v) {
            return Err(ConnectivityError::UnknownVertex(v));
        }
    }
    let view = LocalView::new(g);
    let [p1, p2] = two_disjoint_paths(&view.csr, &view.ends, x.0 as u32, y.0 as u32, None)
        .ok_or(ConnectivityError::NoDisjointPaths(x, y))?;
    let convert = |p: Vec<(u32, bool)>| {
        p.into_iter()
            .map(|(e, fwd)| PathStep {
                edge: view.ids[e as usize],
                traversal: if fwd {
                    Traversal::Forward
                } else {
                    Traversal::Backward
                },
            })
            .collect()
    };
    Ok((convert(p1), convert(p2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> Multigraph {
        Multigraph::build(n, arcs).unwrap()
    }

    fn vs(v: &[usize]) -> Vec<VertexId> {
        v.iter().map(|&i| VertexId(i)).collect()
    }

    fn es(v: &[usize]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn components_examples() {
        assert_eq!(
            components(&g(3, &[(0, 1), (1, 2), (2, 0)])),
            vec![vs(&[0, 1, 2])]
        );
        assert_eq!(
            components(&g(4, &[(0, 1), (1, 0), (2, 3), (3, 2)])),
            vec![vs(&[0, 1]), vs(&[2, 3])]
        );
        assert_eq!(components(&g(3, &[])), vec![vs(&[0]), vs(&[1]), vs(&[2])]);
    }

    #[test]
    fn bridges_examples() {
        assert_eq!(bridges(&g(3, &[(0, 1), (1, 2)])), es(&[0, 1]));
        for len in 1..7 {
            let arcs: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
            assert!(bridges(&g(len, &arcs)).is_empty(), "cycle of length {len}");
        }
        // digon 0-1 plus pendant 1-2
        assert_eq!(bridges(&g(3, &[(0, 1), (1, 0), (1, 2)])), es(&[2]));
    }

    #[test]
    fn two_edge_connected_examples() {
        assert!(is_2_edge_connected(&g(1, &[])));
        assert!(is_2_edge_connected(&g(1, &[(0, 0), (0, 0)])));
        assert!(is_2_edge_connected(&g(2, &[(0, 1), (1, 0)])));
        assert!(!is_2_edge_connected(&g(2, &[(0, 1)])));
        // K4 minus edge 2-3
        assert!(is_2_edge_connected(&g(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 1)]
        )));
        assert!(!is_2_edge_connected(&g(2, &[(0, 0), (1, 1)])));
        assert_eq!(
            two_edge_connectivity_obstruction(&g(3, &[(0, 1), (1, 0), (2, 2)])),
            Some(Obstruction::Disconnected(VertexId(2)))
        );
        assert_eq!(
            two_edge_connectivity_obstruction(&g(3, &[(0, 1), (1, 0), (1, 2)])),
            Some(Obstruction::Bridge(EdgeId(2)))
        );
    }

    #[test]
    fn bridge_partition_single_edge_between() {
        // u = 0, a = 1, b = 2: ua, ub, ab, ua, ub
        let graph = g(3, &[(0, 1), (0, 2), (1, 2), (0, 1), (0, 2)]);
        let p = bridge_partition(&graph, VertexId(0)).unwrap().unwrap();
        assert_eq!(p.bridge, EdgeId(2));
        assert_eq!(p.tail_side, vs(&[1]));
        assert_eq!(p.head_side, vs(&[2]));
    }

    #[test]
    fn bridge_partition_absorbs_other_components_on_tail_side() {
        // u = 0, a = 1, b = 2, c = 3: ua, ub, ab, uc, uc
        let graph = g(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 3)]);
        let p = bridge_partition(&graph, VertexId(0)).unwrap().unwrap();
        assert_eq!(p.bridge, EdgeId(2));
        assert_eq!(p.tail_side, vs(&[1, 3]));
        assert_eq!(p.head_side, vs(&[2]));
    }

    #[test]
    fn bridge_partition_absent_for_k4() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]);
        for u in 0..4 {
            assert_eq!(bridge_partition(&k4, VertexId(u)).unwrap(), None);
        }
    }

    #[test]
    fn bridge_partition_rejects_bad_input() {
        assert_eq!(
            bridge_partition(&g(2, &[(0, 1)]), VertexId(0)),
            Err(ConnectivityError::NotTwoEdgeConnected)
        );
        assert_eq!(
            bridge_partition(&g(1, &[]), VertexId(0)),
            Err(ConnectivityError::TooFewVertices)
        );
        assert_eq!(
            bridge_partition(&g(1, &[]), VertexId(3)),
            Err(ConnectivityError::UnknownVertex(VertexId(3)))
        );
    }

    #[test]
    fn disjoint_paths_same_vertex() {
        let graph = g(1, &[]);
        assert_eq!(
            two_edge_disjoint_paths(&graph, VertexId(0), VertexId(0)).unwrap(),
            (vec![], vec![])
        );
    }

    #[test]
    fn disjoint_paths_theta() {
        let graph = g(2, &[(0, 1), (1, 0), (0, 1)]);
        let (p1, p2) = two_edge_disjoint_paths(&graph, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p2.len(), 1);
        assert_ne!(p1[0].edge, p2[0].edge);
    }

    #[test]
    fn disjoint_paths_triangle() {
        // a = 0, b = 1, c = 2; edges ab, bc, ca
        let graph = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let (p1, p2) = two_edge_disjoint_paths(&graph, VertexId(0), VertexId(1)).unwrap();
        let edges = |p: &[PathStep]| p.iter().map(|s| s.edge).collect::<Vec<_>>();
        assert_eq!(edges(&p1), es(&[0]));
        assert_eq!(edges(&p2), es(&[2, 1]));
        assert_eq!(p1[0].traversal, Traversal::Forward);
        assert_eq!(p2[0].traversal, Traversal::Backward);
        assert_eq!(p2[1].traversal, Traversal::Backward);
    }

    #[test]
    fn disjoint_paths_missing() {
        let graph = g(3, &[(0, 1), (1, 2), (1, 2)]);
        assert_eq!(
            two_edge_disjoint_paths(&graph, VertexId(0), VertexId(2)),
            Err(ConnectivityError::NoDisjointPaths(VertexId(0), VertexId(2)))
        );
    }
}
