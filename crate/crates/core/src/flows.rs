//! Group-valued and integer-valued edge assignments and their verifiers.
//!
//! A flow is stored against the orientation of the graph it is checked with;
//! every verifier re-derives `δ+` and `δ-` from the graph it is handed.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::multigraph::{Direction, EdgeId, Multigraph, VertexId};

/// Additive abelian group used for edge values.
pub trait Group:
    Copy + Eq + fmt::Debug + Add<Output = Self> + Neg<Output = Self> + Sub<Output = Self>
{
    fn zero() -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z2(u8);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z3(u8);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z6(u8);

/// An element `(f2, f3)` of `Z2 × Z3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub f2: Z2,
    pub f3: Z3,
}

macro_rules! cyclic {
    ($t:ident, $modulus:expr) => {
        impl $t {
            pub const MODULUS: u8 = $modulus;
            pub const ONE: Self = $t(1);

            /// Reduces any integer into the group.
            pub fn new(v: i64) -> Self {
                $t(v.rem_euclid($modulus as i64) as u8)
            }

            pub fn value(self) -> u8 {
                self.0
            }

            /// All elements in increasing order.
            pub fn elements() -> impl Iterator<Item = Self> {
                (0..$modulus).map($t)
            }
        }

        impl Add for $t {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                $t((self.0 + rhs.0) % $modulus)
            }
        }

        impl Neg for $t {
            type Output = Self;
            fn neg(self) -> Self {
                $t(($modulus - self.0) % $modulus)
            }
        }

        impl Sub for $t {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                self + (-rhs)
            }
        }

        impl Group for $t {
            fn zero() -> Self {
                $t(0)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

cyclic!(Z2, 2);
cyclic!(Z3, 3);
cyclic!(Z6, 6);

impl Pair {
    pub fn new(f2: u8, f3: u8) -> Self {
        Pair {
            f2: Z2::new(f2 as i64),
            f3: Z3::new(f3 as i64),
        }
    }

    pub fn elements() -> impl Iterator<Item = Self> {
        Z2::elements().flat_map(|a| Z3::elements().map(move |b| Pair { f2: a, f3: b }))
    }
}

impl Add for Pair {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Pair {
            f2: self.f2 + rhs.f2,
            f3: self.f3 + rhs.f3,
        }
    }
}

impl Neg for Pair {
    type Output = Self;
    fn neg(self) -> Self {
        Pair {
            f2: -self.f2,
            f3: -self.f3,
        }
    }
}

impl Sub for Pair {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Group for Pair {
    fn zero() -> Self {
        Pair::default()
    }
}

impl Group for i64 {
    fn zero() -> Self {
        0
    }
}

/// An edge assignment keyed by [`EdgeId`]. It may be partial; verifiers
/// insist that its domain is exactly the edge set of the graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Flow<T> {
    values: Vec<Option<T>>,
}

pub type GroupFlow = Flow<Pair>;
pub type Z6Flow = Flow<Z6>;
pub type IntegerFlow = Flow<i64>;

impl<T: fmt::Debug> fmt::Debug for Flow<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.values
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| v.as_ref().map(|v| (i, v))),
            )
            .finish()
    }
}

impl<T> Default for Flow<T> {
    fn default() -> Self {
        Flow { values: Vec::new() }
    }
}

impl<T: Copy> Flow<T> {
    pub fn new() -> Self {
        Flow::default()
    }

    pub fn with_capacity(id_bound: usize) -> Self {
        Flow {
            values: vec![None; id_bound],
        }
    }

    /// Assigns `value` to every edge of `g`.
    pub fn constant(g: &Multigraph, value: T) -> Self {
        let mut f = Flow::with_capacity(g.edge_id_bound());
        for e in g.edge_ids() {
            f.set(e, value);
        }
        f
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (EdgeId, T)>) -> Self {
        let mut f = Flow::new();
        for (e, v) in pairs {
            f.set(e, v);
        }
        f
    }

    pub fn get(&self, e: EdgeId) -> Option<T> {
        self.values.get(e.0).copied().flatten()
    }

    pub fn set(&mut self, e: EdgeId, value: T) {
        if e.0 >= self.values.len() {
            self.values.resize(e.0 + 1, None);
        }
        self.values[e.0] = Some(value);
    }

    pub fn remove(&mut self, e: EdgeId) -> Option<T> {
        self.values.get_mut(e.0).and_then(Option::take)
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Assigned `(edge, value)` pairs in increasing edge order.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (EdgeId(i), v)))
    }

    pub fn map<U: Copy>(&self, mut op: impl FnMut(T) -> U) -> Flow<U> {
        Flow {
            values: self.values.iter().map(|v| v.map(&mut op)).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("no value for edge {0}")]
    MissingValue(EdgeId),
}

/// The first reason a check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowViolation {
    /// An edge of the graph has no value.
    MissingValue(EdgeId),
    /// A value is given for an edge the graph does not have.
    UnknownEdge(EdgeId),
    /// Conservation fails at a vertex.
    Excess(VertexId),
    /// An edge carries zero.
    Zero(EdgeId),
    /// An edge incident to the root has nonzero `f2`.
    RootSupport(EdgeId),
    /// An integer value is outside `±1..=±(k-1)`.
    OutOfRange(EdgeId),
    /// The designated root is not a vertex of the graph.
    UnknownVertex(VertexId),
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::MissingValue(e) => write!(f, "edge {e} has no value"),
            FlowViolation::UnknownEdge(e) => write!(f, "edge {e} is not in the graph"),
            FlowViolation::Excess(v) => write!(f, "conservation fails at vertex {v}"),
            FlowViolation::Zero(e) => write!(f, "edge {e} carries zero"),
            FlowViolation::RootSupport(e) => write!(f, "edge {e} at the root has nonzero f2"),
            FlowViolation::OutOfRange(e) => write!(f, "edge {e} is out of range"),
            FlowViolation::UnknownVertex(v) => write!(f, "vertex {v} is not in the graph"),
        }
    }
}

/// Inflow minus outflow at `v`. Loops cancel out.
pub fn excess<T: Group>(g: &Multigraph, f: &Flow<T>, v: VertexId) -> Result<T, FlowError> {
    let mut total = T::zero();
    for &(e, dir) in g.incidence(v) {
        let value = f.get(e).ok_or(FlowError::MissingValue(e))?;
        total = match dir {
            Direction::In => total + value,
            Direction::Out => total - value,
        };
    }
    Ok(total)
}

fn check_domain<T: Copy>(g: &Multigraph, f: &Flow<T>) -> Result<(), FlowViolation> {
    if let Some(e) = g.edge_ids().find(|&e| f.get(e).is_none()) {
        return Err(FlowViolation::MissingValue(e));
    }
    if let Some((e, _)) = f.iter().find(|&(e, _)| !g.contains_edge(e)) {
        return Err(FlowViolation::UnknownEdge(e));
    }
    Ok(())
}

/// Domain is exactly `E(G)` and every excess is zero.
pub fn check_flow<T: Group>(g: &Multigraph, f: &Flow<T>) -> Result<(), FlowViolation> {
    check_domain(g, f)?;
    let mut excesses = vec![T::zero(); g.vertex_count()];
    for e in g.edges() {
        let value = f.get(e.id).unwrap();
        excesses[e.head.0] = excesses[e.head.0] + value;
        excesses[e.tail.0] = excesses[e.tail.0] - value;
    }
    match excesses.iter().position(|x| !x.is_zero()) {
        Some(v) => Err(FlowViolation::Excess(VertexId(v))),
        None => Ok(()),
    }
}

/// [`check_flow`] plus no zero values.
pub fn check_nowhere_zero<T: Group>(g: &Multigraph, f: &Flow<T>) -> Result<(), FlowViolation> {
    check_flow(g, f)?;
    match g.edge_ids().find(|&e| f.get(e).unwrap().is_zero()) {
        Some(e) => Err(FlowViolation::Zero(e)),
        None => Ok(()),
    }
}

/// A nowhere-zero `Z2 × Z3`-flow whose `f2` vanishes on every edge at `u`.
pub fn check_theorem2(g: &Multigraph, u: VertexId, f: &GroupFlow) -> Result<(), FlowViolation> {
    check_nowhere_zero(g, f)?;
    if !g.contains_vertex(u) {
        return Err(FlowViolation::UnknownVertex(u));
    }
    match g
        .incident_edges(u)
        .into_iter()
        .find(|&e| !f.get(e).unwrap().f2.is_zero())
    {
        Some(e) => Err(FlowViolation::RootSupport(e)),
        None => Ok(()),
    }
}

/// Integer conservation with `0 < |g(e)| <= k - 1` on every edge.
pub fn check_k_flow(g: &Multigraph, f: &IntegerFlow, k: i64) -> Result<(), FlowViolation> {
    check_domain(g, f)?;
    if let Some(e) = g.edge_ids().find(|&e| {
        let v = f.get(e).unwrap();
        v == 0 || v.abs() > k - 1
    }) {
        return Err(FlowViolation::OutOfRange(e));
    }
    check_flow(g, f)
}

pub fn verify_flow<T: Group>(g: &Multigraph, f: &Flow<T>) -> bool {
    check_flow(g, f).is_ok()
}

pub fn verify_nowhere_zero<T: Group>(g: &Multigraph, f: &Flow<T>) -> bool {
    check_nowhere_zero(g, f).is_ok()
}

pub fn verify_theorem2(g: &Multigraph, u: VertexId, f: &GroupFlow) -> bool {
    check_theorem2(g, u, f).is_ok()
}

pub fn verify_k_flow(g: &Multigraph, f: &IntegerFlow, k: i64) -> bool {
    check_k_flow(g, f, k).is_ok()
}

/// Which coordinate of a pair-valued flow to take the support of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    F2,
    F3,
    Pair,
}

/// Edges whose chosen component is nonzero, increasing.
pub fn support(f: &GroupFlow, component: Component) -> Vec<EdgeId> {
    f.iter()
        .filter(|(_, p)| match component {
            Component::F2 => !p.f2.is_zero(),
            Component::F3 => !p.f3.is_zero(),
            Component::Pair => !p.is_zero(),
        })
        .map(|(e, _)| e)
        .collect()
}

/// Replaces every `f3` by its negation; `f2` is untouched.
pub fn negate_f3(f: &GroupFlow) -> GroupFlow {
    f.map(|p| Pair {
        f2: p.f2,
        f3: -p.f3,
    })
}
