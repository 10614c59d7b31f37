//! Brute-force oracles and graph generators used to cross-check the solver.
//!
//! Nothing here shares code with the construction: the flow enumerator works
//! straight from the edge list, so its verdicts are independent of
//! [`crate::construct`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connectivity::is_2_edge_connected;
use crate::construct::{solve, SolveError};
use crate::flows::{Flow, Group, Pair, Z2, Z3, Z6};
use crate::multigraph::{EdgeId, Multigraph, VertexId};

/// Largest edge count the enumerators accept unless told otherwise.
pub const DEFAULT_EDGE_GUARD: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{edges} edges exceeds the enumeration guard of {guard}")]
    TooLarge { edges: usize, guard: usize },
    #[error("solver failed: {0}")]
    Solver(#[from] SolveError),
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
}

/// A finite group small enough to enumerate.
pub trait FiniteGroup: Group + Ord {
    fn all() -> Vec<Self>;
}

impl FiniteGroup for Z2 {
    fn all() -> Vec<Self> {
        Z2::elements().collect()
    }
}

impl FiniteGroup for Z3 {
    fn all() -> Vec<Self> {
        Z3::elements().collect()
    }
}

impl FiniteGroup for Z6 {
    fn all() -> Vec<Self> {
        Z6::elements().collect()
    }
}

impl FiniteGroup for Pair {
    fn all() -> Vec<Self> {
        Pair::elements().collect()
    }
}

/// Group selector for callers that do not want to name a type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleGroup {
    Z2xZ3,
    Z6,
    Z3,
    Z2,
}

/// Every nowhere-zero `A`-flow of `g`, in lexicographic order of the value
/// vector taken over edges in id order. Each flow is that value vector.
///
/// Edges are assigned one at a time; a vertex is checked as soon as its last
/// non-loop edge has a value, which prunes dead branches without changing
/// the set or its order.
pub fn enumerate_nz_flows<T: FiniteGroup>(
    g: &Multigraph,
    guard: usize,
) -> Result<Vec<Vec<T>>, OracleError> {
    let m = g.edge_count();
    if m > guard {
        return Err(OracleError::TooLarge { edges: m, guard });
    }
    let ends: Vec<(usize, usize)> = g.edges().map(|e| (e.tail.0, e.head.0)).collect();
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut last = vec![None; g.vertex_count()];
    for (i, &(t, h)) in ends.iter().enumerate() {
        if t != h {
            last[t] = Some(i);
            last[h] = Some(i);
        }
    }
    for (v, l) in last.iter().enumerate() {
        if let Some(i) = l {
            closes[*i].push(v);
        }
    }
    let mut nonzero: Vec<T> = T::all().into_iter().filter(|x| !x.is_zero()).collect();
    nonzero.sort();

    struct Search<'a, T> {
        ends: &'a [(usize, usize)],
        closes: &'a [Vec<usize>],
        nonzero: &'a [T],
        excess: Vec<T>,
        current: Vec<T>,
        out: Vec<Vec<T>>,
    }

    impl<T: FiniteGroup> Search<'_, T> {
        fn go(&mut self, i: usize) {
            if i == self.ends.len() {
                self.out.push(self.current.clone());
                return;
            }
            let (t, h) = self.ends[i];
            for k in 0..self.nonzero.len() {
                let x = self.nonzero[k];
                self.excess[h] = self.excess[h] + x;
                self.excess[t] = self.excess[t] - x;
                if self.closes[i].iter().all(|&v| self.excess[v].is_zero()) {
                    self.current.push(x);
                    self.go(i + 1);
                    self.current.pop();
                }
                self.excess[h] = self.excess[h] - x;
                self.excess[t] = self.excess[t] + x;
            }
        }
    }

    let mut search = Search {
        ends: &ends,
        closes: &closes,
        nonzero: &nonzero,
        excess: vec![T::zero(); g.vertex_count()],
        current: Vec::with_capacity(m),
        out: Vec::new(),
    };
    search.go(0);
    Ok(search.out)
}

/// Number of nowhere-zero flows over the chosen group.
pub fn count_nz_flows(
    g: &Multigraph,
    group: OracleGroup,
    guard: usize,
) -> Result<usize, OracleError> {
    Ok(match group {
        OracleGroup::Z2xZ3 => enumerate_nz_flows::<Pair>(g, guard)?.len(),
        OracleGroup::Z6 => enumerate_nz_flows::<Z6>(g, guard)?.len(),
        OracleGroup::Z3 => enumerate_nz_flows::<Z3>(g, guard)?.len(),
        OracleGroup::Z2 => enumerate_nz_flows::<Z2>(g, guard)?.len(),
    })
}

/// Oracle verdict for one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub root: VertexId,
    /// Enumerated flows whose `f2` vanishes at the root.
    pub valid: usize,
    /// Whether the solver's output is one of them.
    pub solver_in_valid_set: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Report {
    /// All nowhere-zero `Z2 × Z3`-flows of the graph.
    pub flows: usize,
    pub roots: Vec<RootReport>,
}

impl Theorem2Report {
    pub fn holds(&self) -> bool {
        self.roots
            .iter()
            .all(|r| r.valid > 0 && r.solver_in_valid_set)
    }
}

/// For every root: some enumerated flow has `f2 = 0` on `δ(u)`, and the
/// solver's flow is among those.
pub fn check_theorem2_exhaustive(
    g: &Multigraph,
    guard: usize,
) -> Result<Theorem2Report, OracleError> {
    if !is_2_edge_connected(g) {
        return Err(OracleError::NotTwoEdgeConnected);
    }
    let flows = enumerate_nz_flows::<Pair>(g, guard)?;
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let mut roots = Vec::with_capacity(g.vertex_count());
    for u in g.vertices() {
        let at_u: Vec<usize> = ids
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                let edge = g.edge(**e).unwrap();
                edge.tail == u || edge.head == u
            })
            .map(|(i, _)| i)
            .collect();
        let valid: Vec<&Vec<Pair>> = flows
            .iter()
            .filter(|f| at_u.iter().all(|&i| f[i].f2.is_zero()))
            .collect();
        let solution = solve(g, u)?;
        let produced: Vec<Pair> = ids.iter().map(|&e| solution.flow.get(e).unwrap()).collect();
        // `valid` inherits lexicographic order from the enumeration
        let found = valid
            .binary_search_by(|f| f.as_slice().cmp(&produced))
            .is_ok();
        roots.push(RootReport {
            root: u,
            valid: valid.len(),
            solver_in_valid_set: found,
        });
    }
    Ok(Theorem2Report {
        flows: flows.len(),
        roots,
    })
}

/// Converts a value vector from [`enumerate_nz_flows`] back into a [`Flow`].
pub fn as_flow<T: Copy>(g: &Multigraph, values: &[T]) -> Flow<T> {
    Flow::from_pairs(g.edge_ids().zip(values.iter().copied()))
}

/// All labeled 2-edge-connected multigraphs on `1..=n_max` vertices with at
/// most `m_max` edges, loops and parallel edges allowed. Each edge is
/// oriented from its smaller to its larger end and edges are listed in
/// (tail, head) order, so every labeled multigraph appears once. Ordered by
/// vertex count, then edge count, then edge list.
pub fn enumerate_small_2ec_multigraphs(
    n_max: usize,
    m_max: usize,
) -> impl Iterator<Item = Multigraph> {
    (1..=n_max).flat_map(move |n| {
        let kinds: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        (0..=m_max).flat_map(move |m| {
            let kinds = kinds.clone();
            Multisets::new(kinds.len(), m).filter_map(move |choice| {
                let arcs: Vec<(usize, usize)> = choice.iter().map(|&k| kinds[k]).collect();
                let g = Multigraph::build(n, &arcs).expect("kinds are in range");
                is_2_edge_connected(&g).then_some(g)
            })
        })
    })
}

/// Non-decreasing sequences of length `len` over `0..kinds`.
struct Multisets {
    kinds: usize,
    current: Option<Vec<usize>>,
}

impl Multisets {
    fn new(kinds: usize, len: usize) -> Self {
        let current = if kinds == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Multisets { kinds, current }
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        match cur.iter().rposition(|&k| k + 1 < self.kinds) {
            Some(i) => {
                let k = cur[i] + 1;
                for slot in &mut cur[i..] {
                    *slot = k;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Longest ear (in new vertices) the generator attaches.
const MAX_EAR_VERTICES: usize = 8;

/// The ears of a random 2-edge-connected multigraph, in attachment order.
///
/// The first ear is a cycle of length `2..=min(n, 8)` (a loop when `n = 1`).
/// Further ears carry `1..=8` new vertices between two existing vertices
/// (possibly equal) until there are `n` vertices. Then `extra_ears` single
/// edges join uniformly random vertex pairs, possibly forming loops or
/// parallel edges. Finally vertex labels are permuted and every edge is
/// reversed with probability one half. The random source is ChaCha8 seeded
/// from `seed`.
pub fn random_ears(n: usize, extra_ears: usize, seed: u64) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ears: Vec<Vec<(usize, usize)>> = Vec::new();
    if n > 1 {
        let c = rng.gen_range(2..=n.min(MAX_EAR_VERTICES));
        ears.push((0..c).map(|i| (i, (i + 1) % c)).collect());
        let mut next = c;
        while next < n {
            let k = rng.gen_range(1..=MAX_EAR_VERTICES.min(n - next));
            let a = rng.gen_range(0..next);
            let b = rng.gen_range(0..next);
            let mut ear = Vec::with_capacity(k + 1);
            let mut prev = a;
            for v in next..next + k {
                ear.push((prev, v));
                prev = v;
            }
            ear.push((prev, b));
            ears.push(ear);
            next += k;
        }
    }
    for _ in 0..extra_ears {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        ears.push(vec![(a, b)]);
    }

    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    for ear in &mut ears {
        for arc in ear.iter_mut() {
            let (t, h) = (label[arc.0], label[arc.1]);
            *arc = if rng.gen_bool(0.5) { (h, t) } else { (t, h) };
        }
    }
    ears
}

/// A random 2-edge-connected multigraph; see [`random_ears`]. Edge ids follow
/// ear order.
pub fn random_2ec_multigraph(n: usize, extra_ears: usize, seed: u64) -> Multigraph {
    let arcs: Vec<(usize, usize)> = random_ears(n, extra_ears, seed)
        .into_iter()
        .flatten()
        .collect();
    Multigraph::build(n, &arcs).expect("ears stay in range")
}

/// A random 2-edge-connected multigraph on `max(1, m / 2)` vertices whose
/// edge count is exactly `m`, unless the ears alone already exceed it.
pub fn random_2ec_with_edges(m: usize, seed: u64) -> Multigraph {
    let n = (m / 2).max(1);
    let base = random_ears(n, 0, seed).iter().map(Vec::len).sum::<usize>();
    random_2ec_multigraph(n, m.saturating_sub(base), seed)
}

/// The Petersen graph: outer 5-cycle, spokes, inner pentagram.
pub fn petersen() -> Multigraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let arcs: Vec<_> = outer.chain(spokes).chain(inner).collect();
    Multigraph::build(10, &arcs).unwrap()
}
