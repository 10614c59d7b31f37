//! From group flows to integer flows.
//!
//! `Z2 × Z3` and `Z6` are identified by `(a, b) ↦ 3a + 4b (mod 6)`, whose
//! inverse is `c ↦ (c mod 2, c mod 3)`. A nowhere-zero `Z_k`-flow is turned
//! into an integer `k`-flow by lifting every value into `1..k` and then
//! cancelling excess: each round finds a path of shiftable edges from a
//! vertex with positive excess to one with negative excess and moves `k`
//! units along it.

use std::collections::VecDeque;

use thiserror::Error;

use crate::flows::{Flow, FlowViolation, GroupFlow, IntegerFlow, Pair, Z6Flow, Z6};
use crate::multigraph::Multigraph;

pub fn pair_to_z6(p: Pair) -> Z6 {
    Z6::new(3 * p.f2.value() as i64 + 4 * p.f3.value() as i64)
}

pub fn z6_to_pair(c: Z6) -> Pair {
    Pair::new(c.value() % 2, c.value() % 3)
}

pub fn group_flow_to_z6(f: &GroupFlow) -> Z6Flow {
    f.map(pair_to_z6)
}

pub fn z6_flow_to_group(f: &Z6Flow) -> GroupFlow {
    f.map(z6_to_pair)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TutteError {
    #[error("input is not a nowhere-zero modular flow: {0}")]
    NotNowhereZero(FlowViolation),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),
    #[error("internal invariant violated: {0}")]
    Defect(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conversion {
    pub flow: IntegerFlow,
    /// Number of excess-cancelling path shifts.
    pub augmentations: usize,
}

/// Integer nowhere-zero 6-flow congruent to `phi` edge by edge.
pub fn group_flow_to_integer_flow(g: &Multigraph, phi: &Z6Flow) -> Result<Conversion, TutteError> {
    let residues = phi.map(|c| c.value() as i64);
    modular_flow_to_integer_flow(g, &residues, 6)
}

/// Same as [`group_flow_to_integer_flow`] for any modulus `k >= 2`. Input
/// values are read modulo `k`.
pub fn modular_flow_to_integer_flow(
    g: &Multigraph,
    residues: &Flow<i64>,
    k: i64,
) -> Result<Conversion, TutteError> {
    if k < 2 {
        return Err(TutteError::BadModulus(k));
    }
    check_modular(g, residues, k).map_err(TutteError::NotNowhereZero)?;

    let n = g.vertex_count();
    let ids: Vec<_> = g.edge_ids().collect();
    let ends: Vec<(usize, usize)> = g.edges().map(|e| (e.tail.0, e.head.0)).collect();
    let mut value: Vec<i64> = ids
        .iter()
        .map(|&e| residues.get(e).unwrap().rem_euclid(k))
        .collect();

    let mut excess = vec![0i64; n];
    for (i, &(t, h)) in ends.iter().enumerate() {
        excess[h] += value[i];
        excess[t] -= value[i];
    }
    if let Some(v) = excess.iter().position(|x| x % k != 0) {
        return Err(TutteError::Defect(format!(
            "lifted excess at v{v} is not a multiple of {k}"
        )));
    }

    // neighbours sorted by (vertex, edge); loops never carry excess
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(t, h)) in ends.iter().enumerate() {
        if t != h {
            adjacency[t].push((h, i));
            adjacency[h].push((t, i));
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    let mut total: i64 = excess.iter().map(|x| x.abs()).sum();
    let mut stamp = vec![0u32; n];
    let mut parent = vec![usize::MAX; n];
    let mut round = 0u32;
    let mut augmentations = 0;
    let mut queue = VecDeque::new();
    for source in 0..n {
        while excess[source] > 0 {
            round += 1;
            stamp[source] = round;
            queue.clear();
            queue.push_back(source);
            let mut sink = None;
            'bfs: while let Some(a) = queue.pop_front() {
                for &(b, e) in &adjacency[a] {
                    if stamp[b] == round {
                        continue;
                    }
                    let (t, _) = ends[e];
                    let shiftable = if t == a { value[e] < 0 } else { value[e] > 0 };
                    if !shiftable {
                        continue;
                    }
                    stamp[b] = round;
                    parent[b] = e;
                    if excess[b] < 0 {
                        sink = Some(b);
                        break 'bfs;
                    }
                    queue.push_back(b);
                }
            }
            let Some(sink) = sink else {
                return Err(TutteError::Defect(format!(
                    "no deficit vertex reachable from v{source}"
                )));
            };
            let mut v = sink;
            while v != source {
                let e = parent[v];
                let (t, h) = ends[e];
                if h == v {
                    value[e] += k;
                    v = t;
                } else {
                    value[e] -= k;
                    v = h;
                }
            }
            excess[source] -= k;
            excess[sink] += k;
            if excess[source] < 0 || excess[sink] > 0 {
                return Err(TutteError::Defect("augmentation overshot".into()));
            }
            // sum of |excess| falls by exactly 2k per round
            total -= 2 * k;
            augmentations += 1;
        }
    }
    if total != 0 {
        return Err(TutteError::Defect(format!("{total} units of excess left")));
    }

    let mut flow = Flow::with_capacity(g.edge_id_bound());
    for (i, &e) in ids.iter().enumerate() {
        flow.set(e, value[i]);
    }
    Ok(Conversion {
        flow,
        augmentations,
    })
}

/// Pointwise reduction modulo 6.
pub fn integer_flow_to_group(g: &IntegerFlow) -> Z6Flow {
    g.map(Z6::new)
}

/// Domain check, nonzero residues, and conservation modulo `k`.
fn check_modular(g: &Multigraph, residues: &Flow<i64>, k: i64) -> Result<(), FlowViolation> {
    if let Some(e) = g.edge_ids().find(|&e| residues.get(e).is_none()) {
        return Err(FlowViolation::MissingValue(e));
    }
    if let Some((e, _)) = residues.iter().find(|&(e, _)| !g.contains_edge(e)) {
        return Err(FlowViolation::UnknownEdge(e));
    }
    let mut excess = vec![0i64; g.vertex_count()];
    for e in g.edges() {
        let r = residues.get(e.id).unwrap().rem_euclid(k);
        excess[e.head.0] = (excess[e.head.0] + r) % k;
        excess[e.tail.0] = (excess[e.tail.0] - r).rem_euclid(k);
    }
    if let Some(v) = excess.iter().position(|&x| x != 0) {
        return Err(FlowViolation::Excess(crate::multigraph::VertexId(v)));
    }
    match g
        .edge_ids()
        .find(|&e| residues.get(e).unwrap().rem_euclid(k) == 0)
    {
        Some(e) => Err(FlowViolation::Zero(e)),
        None => Ok(()),
    }
}
