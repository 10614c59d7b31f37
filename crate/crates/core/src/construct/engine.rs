//! The induction on `|V|` run as an explicit work stack.
//!
//! Each instance is a compact multigraph on local vertices `0..n` whose root
//! is always local vertex 0. Edges carry a *slot*: the index of the cell in
//! the shared value store that receives their final value. Ordinary edges
//! keep their parent's slot when handed to a child. A bridge of `G - u` is
//! copied into both blocks it touches, each copy with a fresh slot, and the
//! parent's slot is written once the two copies agree.

use super::extend::{extend_nonzero_parallel, propagate_tree, Sense, TreeLink};
use super::{CutRecord, SolveError, SolveOptions, StepKind, TraceStep};
use crate::connectivity::{bridge_flags, label_components, two_disjoint_paths, Csr};
use crate::flows::{Group, Pair, Z2, Z3};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub(super) struct InstEdge {
    pub slot: u32,
    pub orig: u32,
    pub tail: u32,
    pub head: u32,
}

impl InstEdge {
    fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    fn touches_root(&self) -> bool {
        self.tail == 0 || self.head == 0
    }
}

/// A recursion instance. Edges are sorted by original edge id.
#[derive(Clone, Debug)]
pub(super) struct Instance {
    pub n: u32,
    pub edges: Vec<InstEdge>,
}

impl Instance {
    fn ends(&self) -> Vec<(u32, u32)> {
        self.edges.iter().map(|e| (e.tail, e.head)).collect()
    }

    fn is_two_edge_connected(&self) -> bool {
        let ends = self.ends();
        let csr = Csr::new(self.n as usize, &ends);
        let (_, count) = label_components(&csr, None, None);
        count == 1 && !bridge_flags(&csr, ends.len(), None).contains(&true)
    }
}

struct BridgeCopy {
    parent_slot: u32,
    tail_block: u32,
    head_block: u32,
    tail_slot: u32,
    head_slot: u32,
}

struct DecomposePlan {
    bridges: Vec<BridgeCopy>,
    /// `(bridge, aligned block, block to align)` in breadth-first order over
    /// each component's block tree.
    order: Vec<(u32, u32, u32)>,
    child_slots: Vec<Vec<u32>>,
    checked: Option<Instance>,
}

struct BridgelessPlan {
    /// S edges with `Along` meaning the edge points into `V(H)`.
    s_edges: Vec<(u32, Sense)>,
    /// Edges from `V(H)` to the rest of `G - u`; `true` when pointing into `V(H)`.
    boundary: Vec<(u32, bool)>,
    /// Edges at `u` other than S, and edges inside `V(H)` outside `E(H)`.
    must_be_f2_free: Vec<u32>,
    links: Vec<TreeLink>,
    chords: Vec<u32>,
    /// `(H vertex index, slot, points into that vertex)` for every non-tree,
    /// non-chord, non-loop edge end lying in `V(H)`.
    incident: Vec<(u32, u32, bool)>,
    h_vertex_count: usize,
    h_slots: Vec<u32>,
    checked: Option<(Instance, Instance)>,
}

enum Frame {
    Solve(Instance, usize),
    FinishDecompose(Box<DecomposePlan>),
    FinishBridgeless(Box<BridgelessPlan>),
}

pub(super) struct Engine<'a> {
    pub values: Vec<Pair>,
    pub trace: Vec<TraceStep>,
    options: &'a SolveOptions,
}

fn defect(msg: impl Into<String>) -> SolveError {
    SolveError::Defect(msg.into())
}

impl<'a> Engine<'a> {
    pub(super) fn new(slot_count: usize, options: &'a SolveOptions) -> Self {
        Engine {
            values: vec![Pair::zero(); slot_count],
            trace: Vec::new(),
            options,
        }
    }

    fn fresh_slot(&mut self) -> u32 {
        self.values.push(Pair::zero());
        (self.values.len() - 1) as u32
    }

    pub(super) fn run(&mut self, top: Instance) -> Result<(), SolveError> {
        let mut stack = vec![Frame::Solve(top, 0)];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Solve(inst, depth) => self.step(inst, depth, &mut stack)?,
                Frame::FinishDecompose(plan) => self.finish_decompose(*plan)?,
                Frame::FinishBridgeless(plan) => self.finish_bridgeless(*plan)?,
            }
        }
        Ok(())
    }

    fn record(&mut self, inst: &Instance, depth: usize, kind: StepKind) {
        self.trace.push(TraceStep {
            depth,
            vertices: inst.n as usize,
            edges: inst.edges.len(),
            kind,
        });
    }

    fn step(
        &mut self,
        inst: Instance,
        depth: usize,
        stack: &mut Vec<Frame>,
    ) -> Result<(), SolveError> {
        if inst.n == 1 {
            for e in &inst.edges {
                self.values[e.slot as usize] = Pair::new(0, 1);
            }
            self.record(
                &inst,
                depth,
                StepKind::Base {
                    loops: inst.edges.len(),
                },
            );
            return Ok(());
        }
        let ends = inst.ends();
        let csr = Csr::new(inst.n as usize, &ends);
        let bridges = bridge_flags(&csr, ends.len(), Some(0));
        let (block, block_count) = label_components(&csr, Some(0), Some(&bridges));
        match block_count {
            0 => Err(defect(
                "instance with two or more vertices has nothing besides its root",
            )),
            1 => self.bridgeless(inst, &csr, &ends, depth, stack),
            _ => self.decompose(inst, &csr, &bridges, &block, block_count, depth, stack),
        }
    }

    /// Splits `G` along every bridge of `G - u` and every component of
    /// `G - u` at once. Each 2-edge-connected block `B` of `G - u` becomes
    /// the child `G / (E \ E_B)`: `B` plus the root, where the root stands for
    /// everything outside `B`.
    #[allow(clippy::too_many_arguments)]
    fn decompose(
        &mut self,
        inst: Instance,
        csr: &Csr,
        bridges: &[bool],
        block: &[u32],
        block_count: u32,
        depth: usize,
        stack: &mut Vec<Frame>,
    ) -> Result<(), SolveError> {
        let n = inst.n as usize;
        let blocks = block_count as usize;
        let (component, component_count) = label_components(csr, Some(0), None);

        let mut root_edges = vec![0usize; component_count as usize];
        for e in inst
            .edges
            .iter()
            .filter(|e| e.touches_root() && !e.is_loop())
        {
            let other = if e.tail == 0 { e.head } else { e.tail };
            root_edges[component[other as usize] as usize] += 1;
        }
        if let Some(c) = root_edges.iter().position(|&k| k < 2) {
            return Err(defect(format!(
                "component {c} of G - u meets u in {} edge(s)",
                root_edges[c]
            )));
        }

        let mut local = vec![NONE; n];
        let mut block_size = vec![0u32; blocks];
        let mut block_component = vec![NONE; blocks];
        for v in 1..n {
            let b = block[v] as usize;
            block_size[b] += 1;
            local[v] = block_size[b];
            block_component[b] = component[v];
        }

        let mut children: Vec<Vec<InstEdge>> = vec![Vec::new(); blocks];
        let mut copies = Vec::new();
        for (i, e) in inst.edges.iter().enumerate() {
            let (t, h) = (e.tail as usize, e.head as usize);
            if t == 0 && h == 0 {
                children[0].push(*e);
            } else if t == 0 {
                children[block[h] as usize].push(InstEdge {
                    tail: 0,
                    head: local[h],
                    ..*e
                });
            } else if h == 0 {
                children[block[t] as usize].push(InstEdge {
                    tail: local[t],
                    head: 0,
                    ..*e
                });
            } else if bridges[i] {
                let (bt, bh) = (block[t], block[h]);
                let tail_slot = self.fresh_slot();
                let head_slot = self.fresh_slot();
                children[bt as usize].push(InstEdge {
                    slot: tail_slot,
                    orig: e.orig,
                    tail: local[t],
                    head: 0,
                });
                children[bh as usize].push(InstEdge {
                    slot: head_slot,
                    orig: e.orig,
                    tail: 0,
                    head: local[h],
                });
                copies.push((
                    e.orig,
                    BridgeCopy {
                        parent_slot: e.slot,
                        tail_block: bt,
                        head_block: bh,
                        tail_slot,
                        head_slot,
                    },
                ));
            } else {
                if block[t] != block[h] {
                    return Err(defect("non-bridge edge joins two blocks"));
                }
                children[block[t] as usize].push(InstEdge {
                    tail: local[t],
                    head: local[h],
                    ..*e
                });
            }
        }

        // Block forest: anchor each component at its smallest block and align
        // outwards breadth-first.
        let mut adjacent: Vec<Vec<u32>> = vec![Vec::new(); blocks];
        for (i, (_, c)) in copies.iter().enumerate() {
            adjacent[c.tail_block as usize].push(i as u32);
            adjacent[c.head_block as usize].push(i as u32);
        }
        let mut reached = vec![false; blocks];
        let mut order = Vec::new();
        let mut via = vec![NONE; blocks];
        let mut bfs = Vec::with_capacity(blocks);
        for anchor in 0..blocks {
            if reached[anchor] {
                continue;
            }
            reached[anchor] = true;
            bfs.push(anchor as u32);
            let mut head = bfs.len() - 1;
            while head < bfs.len() {
                let b = bfs[head];
                head += 1;
                for &i in &adjacent[b as usize] {
                    let c = &copies[i as usize].1;
                    let next = if c.tail_block == b {
                        c.head_block
                    } else {
                        c.tail_block
                    };
                    if reached[next as usize] {
                        continue;
                    }
                    reached[next as usize] = true;
                    via[next as usize] = i;
                    order.push((i, b, next));
                    bfs.push(next);
                }
            }
        }

        let mut component_size = vec![0usize; component_count as usize];
        for v in 1..n {
            component_size[component[v] as usize] += 1;
        }
        let mut subtree: Vec<usize> = block_size.iter().map(|&s| s as usize).collect();
        let mut cuts = vec![None; copies.len()];
        for &b in bfs.iter().rev() {
            let i = via[b as usize];
            if i == NONE {
                continue;
            }
            let (orig, c) = &copies[i as usize];
            let parent = if c.tail_block == b {
                c.head_block
            } else {
                c.tail_block
            };
            subtree[parent as usize] += subtree[b as usize];
            let inside = subtree[b as usize];
            let outside = component_size[block_component[b as usize] as usize] - inside;
            let (tail_side, head_side) = if c.tail_block == b {
                (inside, outside)
            } else {
                (outside, inside)
            };
            cuts[i as usize] = Some(CutRecord {
                bridge: crate::multigraph::EdgeId(*orig as usize),
                tail_side,
                head_side,
            });
        }

        let parts: Vec<usize> = block_size.iter().map(|&s| s as usize + 1).collect();
        if parts.iter().any(|&p| p >= n) {
            return Err(defect("decomposition did not shrink the instance"));
        }
        self.record(
            &inst,
            depth,
            StepKind::Decompose {
                components: component_count as usize,
                cuts: cuts
                    .into_iter()
                    .map(|c| c.expect("every bridge lies in its block tree"))
                    .collect(),
                parts,
            },
        );

        let child_instances: Vec<Instance> = children
            .into_iter()
            .zip(&block_size)
            .map(|(edges, &size)| Instance { n: size + 1, edges })
            .collect();
        if self.options.debug_verify {
            if let Some(b) = child_instances
                .iter()
                .position(|c| !c.is_two_edge_connected())
            {
                return Err(defect(format!("block child {b} is not 2-edge-connected")));
            }
        }
        let plan = DecomposePlan {
            bridges: copies.into_iter().map(|(_, c)| c).collect(),
            order,
            child_slots: child_instances
                .iter()
                .map(|c| c.edges.iter().map(|e| e.slot).collect())
                .collect(),
            checked: self.options.debug_verify.then_some(inst),
        };
        stack.push(Frame::FinishDecompose(Box::new(plan)));
        for child in child_instances.into_iter().rev() {
            stack.push(Frame::Solve(child, depth + 1));
        }
        Ok(())
    }

    fn finish_decompose(&mut self, plan: DecomposePlan) -> Result<(), SolveError> {
        for &(i, from, to) in &plan.order {
            let c = &plan.bridges[i as usize];
            let slot_in = |b: u32| {
                if b == c.tail_block {
                    c.tail_slot
                } else {
                    c.head_slot
                }
            };
            let kept = self.values[slot_in(from) as usize];
            let other = self.values[slot_in(to) as usize];
            if !kept.f2.is_zero() || !other.f2.is_zero() {
                return Err(defect("bridge copy carries nonzero f2"));
            }
            if kept.f3.is_zero() || other.f3.is_zero() {
                return Err(defect("bridge copy carries zero f3"));
            }
            if kept.f3 != other.f3 {
                for &s in &plan.child_slots[to as usize] {
                    let v = &mut self.values[s as usize];
                    v.f3 = -v.f3;
                }
            }
        }
        for c in &plan.bridges {
            let a = self.values[c.tail_slot as usize];
            if a != self.values[c.head_slot as usize] {
                return Err(defect("bridge copies disagree after alignment"));
            }
            self.values[c.parent_slot as usize] = a;
        }
        if let Some(inst) = &plan.checked {
            check_instance(inst, &self.values, &[0])
                .map_err(|m| defect(format!("after cut: {m}")))?;
        }
        Ok(())
    }

    fn bridgeless(
        &mut self,
        inst: Instance,
        csr: &Csr,
        ends: &[(u32, u32)],
        depth: usize,
        stack: &mut Vec<Frame>,
    ) -> Result<(), SolveError> {
        let n = inst.n as usize;
        let mut at_root = inst
            .edges
            .iter()
            .filter(|e| e.touches_root() && !e.is_loop());
        let (Some(first), Some(second)) = (at_root.next().copied(), at_root.next().copied()) else {
            return Err(defect("root has fewer than two non-loop edges"));
        };
        let far = |e: &InstEdge| if e.tail == 0 { e.head } else { e.tail };
        let (x, x2) = (far(&first), far(&second));

        let paths = two_disjoint_paths(csr, ends, x, x2, Some(0))
            .ok_or_else(|| defect("no two edge-disjoint paths in bridgeless G - u"))?;

        let mut in_h = vec![false; n];
        let mut h_edge = vec![false; inst.edges.len()];
        in_h[x as usize] = true;
        let mut degree = vec![0u32; n];
        for path in &paths {
            for &(e, _) in path {
                if h_edge[e as usize] {
                    return Err(defect("the two paths share an edge"));
                }
                h_edge[e as usize] = true;
                let (t, h) = ends[e as usize];
                in_h[t as usize] = true;
                in_h[h as usize] = true;
                degree[t as usize] += 1;
                degree[h as usize] += 1;
            }
        }
        if in_h[0] {
            return Err(defect("H meets the root"));
        }
        if degree.iter().any(|d| d % 2 == 1) {
            return Err(defect("H has a vertex of odd degree"));
        }

        // local numbering inside H, tree grown breadth-first from x
        let mut h_index = vec![NONE; n];
        let mut h_vertices = Vec::new();
        for v in 0..n {
            if in_h[v] {
                h_index[v] = h_vertices.len() as u32;
                h_vertices.push(v as u32);
            }
        }
        let mut tree_edge = vec![false; inst.edges.len()];
        let mut links = Vec::new();
        let mut seen = vec![false; h_vertices.len()];
        seen[h_index[x as usize] as usize] = true;
        let mut queue = vec![x];
        let mut qi = 0;
        while qi < queue.len() {
            let v = queue[qi];
            qi += 1;
            for &(w, e) in csr.neighbours(v) {
                if !h_edge[e as usize] || seen[h_index[w as usize] as usize] {
                    continue;
                }
                seen[h_index[w as usize] as usize] = true;
                tree_edge[e as usize] = true;
                links.push(TreeLink {
                    vertex: h_index[w as usize],
                    parent: h_index[v as usize],
                    edge: inst.edges[e as usize].slot,
                    into_vertex: ends[e as usize].1 == w,
                });
                queue.push(w);
            }
        }
        if seen.contains(&false) {
            return Err(defect("H is not connected"));
        }

        let mut s_edges = Vec::new();
        let mut boundary = Vec::new();
        let mut must_be_f2_free = Vec::new();
        let mut chords = Vec::new();
        let mut incident = Vec::new();
        let mut h_slots = Vec::new();
        let mut child_index = vec![NONE; n];
        child_index[0] = 0;
        let mut next = 1;
        for v in 1..n {
            if in_h[v] {
                child_index[v] = 0;
            } else {
                child_index[v] = next;
                next += 1;
            }
        }
        let mut child_edges = Vec::with_capacity(inst.edges.len());
        let (mut s_orig, mut h_orig) = (Vec::new(), Vec::new());
        for (i, e) in inst.edges.iter().enumerate() {
            let (t, h) = (e.tail as usize, e.head as usize);
            if h_edge[i] {
                h_slots.push(e.slot);
                h_orig.push(crate::multigraph::EdgeId(e.orig as usize));
                if !tree_edge[i] {
                    chords.push(e.slot);
                }
                continue;
            }
            let is_s = (t == 0 && in_h[h]) || (h == 0 && in_h[t]);
            if is_s {
                s_edges.push((e.slot, if t == 0 { Sense::Along } else { Sense::Against }));
                s_orig.push(crate::multigraph::EdgeId(e.orig as usize));
            } else {
                if t == 0 || h == 0 || (in_h[t] && in_h[h]) {
                    must_be_f2_free.push(e.slot);
                } else if in_h[t] != in_h[h] {
                    boundary.push((e.slot, in_h[h]));
                }
                child_edges.push(InstEdge {
                    tail: child_index[t],
                    head: child_index[h],
                    ..*e
                });
            }
            if t != h {
                if in_h[t] {
                    incident.push((h_index[t], e.slot, false));
                }
                if in_h[h] {
                    incident.push((h_index[h], e.slot, true));
                }
            }
        }
        if s_edges.len() < 2 {
            return Err(defect(format!("|S| = {} < 2", s_edges.len())));
        }

        self.record(
            &inst,
            depth,
            StepKind::Bridgeless {
                first: crate::multigraph::EdgeId(first.orig as usize),
                second: crate::multigraph::EdgeId(second.orig as usize),
                h_edges: h_orig,
                s_edges: s_orig,
            },
        );

        let child = Instance {
            n: next,
            edges: child_edges,
        };
        if child.n >= inst.n {
            return Err(defect("bridgeless step did not shrink the instance"));
        }
        let checked = if self.options.debug_verify {
            // G1 = G / E(H): V(H) becomes one vertex u1, u stays apart
            let u1 = next;
            let mut g1 = child.clone();
            g1.n += 1;
            g1.edges.clear();
            for (i, e) in inst.edges.iter().enumerate() {
                if h_edge[i] {
                    continue;
                }
                let map = |v: usize| if in_h[v] { u1 } else { child_index[v] };
                g1.edges.push(InstEdge {
                    tail: map(e.tail as usize),
                    head: map(e.head as usize),
                    ..*e
                });
            }
            if !g1.is_two_edge_connected() {
                return Err(defect("G1 is not 2-edge-connected"));
            }
            if !child.is_two_edge_connected() {
                return Err(defect("G2 is not 2-edge-connected"));
            }
            Some((inst, g1))
        } else {
            None
        };

        let plan = BridgelessPlan {
            s_edges,
            boundary,
            must_be_f2_free,
            links,
            chords,
            incident,
            h_vertex_count: h_vertices.len(),
            h_slots,
            checked,
        };
        stack.push(Frame::FinishBridgeless(Box::new(plan)));
        stack.push(Frame::Solve(child, depth + 1));
        Ok(())
    }

    fn finish_bridgeless(&mut self, plan: BridgelessPlan) -> Result<(), SolveError> {
        // f3 over S: S must carry whatever leaves V(H) through the boundary
        let mut into_h = Z3::zero();
        for &(slot, into) in &plan.boundary {
            let v = self.values[slot as usize].f3;
            into_h = if into { into_h + v } else { into_h - v };
        }
        let senses: Vec<Sense> = plan.s_edges.iter().map(|&(_, s)| s).collect();
        let s_values = extend_nonzero_parallel(-into_h, &senses)
            .map_err(|e| defect(format!("extending over S: {e}")))?;
        for (&(slot, _), f3) in plan.s_edges.iter().zip(s_values) {
            self.values[slot as usize] = Pair { f2: Z2::zero(), f3 };
        }

        // δ_G1(u) ∩ supp(f2) = ∅ = δ_G1(u1) ∩ supp(f2)
        let f2_free = plan
            .must_be_f2_free
            .iter()
            .chain(plan.boundary.iter().map(|(s, _)| s))
            .chain(plan.s_edges.iter().map(|(s, _)| s));
        if f2_free
            .into_iter()
            .any(|&s| !self.values[s as usize].f2.is_zero())
        {
            return Err(defect("f2 is nonzero at u or u1 in G1"));
        }
        if let Some((_, g1)) = &plan.checked {
            let u1 = g1.n - 1;
            check_instance(g1, &self.values, &[0, u1])
                .map_err(|m| defect(format!("on G1: {m}")))?;
        }

        // f3 over E(H) by tree propagation, f2 = 1 on all of E(H)
        for &c in &plan.chords {
            self.values[c as usize] = Pair {
                f2: Z2::ONE,
                f3: Z3::zero(),
            };
        }
        let mut excess = vec![Z3::zero(); plan.h_vertex_count];
        for &(v, slot, into) in &plan.incident {
            let f3 = self.values[slot as usize].f3;
            let x = &mut excess[v as usize];
            *x = if into { *x + f3 } else { *x - f3 };
        }
        let values = &mut self.values;
        propagate_tree(&plan.links, &mut excess, |slot, f3| {
            values[slot as usize] = Pair { f2: Z2::ONE, f3 };
        });
        if !excess[0].is_zero() {
            return Err(defect("f3 does not balance over H"));
        }

        // S ⊆ supp(f3), E(H) ⊆ supp(f2)
        if plan
            .s_edges
            .iter()
            .any(|&(s, _)| self.values[s as usize].f3.is_zero())
        {
            return Err(defect("S edge with zero f3"));
        }
        if plan
            .h_slots
            .iter()
            .any(|&s| self.values[s as usize].f2.is_zero())
        {
            return Err(defect("H edge with zero f2"));
        }
        if let Some((inst, _)) = &plan.checked {
            check_instance(inst, &self.values, &[0])
                .map_err(|m| defect(format!("after bridgeless step: {m}")))?;
        }
        Ok(())
    }
}

/// Nowhere-zero, conserving, and `f2`-free at each vertex in `f2_free`.
fn check_instance(inst: &Instance, values: &[Pair], f2_free: &[u32]) -> Result<(), String> {
    let mut excess = vec![Pair::zero(); inst.n as usize];
    for e in &inst.edges {
        let v = values[e.slot as usize];
        if v.is_zero() {
            return Err(format!("edge e{} carries zero", e.orig));
        }
        if !v.f2.is_zero() && (f2_free.contains(&e.tail) || f2_free.contains(&e.head)) {
            return Err(format!("edge e{} carries f2 at a protected vertex", e.orig));
        }
        excess[e.head as usize] = excess[e.head as usize] + v;
        excess[e.tail as usize] = excess[e.tail as usize] - v;
    }
    match excess.iter().position(|x| !x.is_zero()) {
        Some(v) => Err(format!("conservation fails at local vertex {v}")),
        None => Ok(()),
    }
}
