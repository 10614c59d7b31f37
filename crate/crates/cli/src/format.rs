//! Text formats for graphs and flows.
//!
//! Graph files:
//!
//! ```text
//! c optional comments
//! p nzf <n> <m>
//! e <tail> <head>        (m lines, edge ids 0..m-1 in file order)
//! ```
//!
//! Flow files carry one line per edge with the group values and their images
//! under the `Z2 × Z3 ≅ Z6` isomorphism and the integer lift:
//!
//! ```text
//! s SOLUTION root=<u>
//! f <id> <tail> <head> <f2> <f3> <z6> <int6>
//! ```
//!
//! The last two columns may be omitted together. A flow file may also be a
//! JSON document with the same fields.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sixflow::flows::{Flow, GroupFlow, IntegerFlow, Pair};
use sixflow::tutte::pair_to_z6;
use sixflow::{EdgeId, Multigraph, Z6Flow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T, ParseError> {
    field
        .parse()
        .map_err(|_| err(line, format!("{what} `{field}` is not a valid number")))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

pub fn parse_graph(text: &str) -> Result<Multigraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut last_line = 0;
    for (line, fields) in content_lines(text) {
        last_line = line;
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err(line, "second problem line"));
                }
                if fields.len() != 4 || fields[1] != "nzf" {
                    return Err(err(line, "expected `p nzf <n> <m>`"));
                }
                header = Some((
                    number(line, fields[2], "vertex count")?,
                    number(line, fields[3], "edge count")?,
                ));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| err(line, "edge before problem line"))?;
                if fields.len() != 3 {
                    return Err(err(line, "expected `e <tail> <head>`"));
                }
                let t: usize = number(line, fields[1], "tail")?;
                let h: usize = number(line, fields[2], "head")?;
                if t >= n || h >= n {
                    return Err(err(line, format!("endpoint out of range for {n} vertices")));
                }
                arcs.push((t, h));
            }
            other => return Err(err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line.max(1), "missing problem line"))?;
    if arcs.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} edges, found {}", arcs.len()),
        ));
    }
    Ok(Multigraph::build(n, &arcs).expect("endpoints checked"))
}

pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("p nzf {} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("e {} {}\n", e.tail.0, e.head.0));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub f2: u8,
    pub f3: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z6: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub int6: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowFile {
    pub root: usize,
    pub edges: Vec<FlowRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

/// A flow file whose columns contradict each other.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Inconsistency {
    #[error("edge {id}: f2 = {value} is not in Z2")]
    F2Range { id: usize, value: u8 },
    #[error("edge {id}: f3 = {value} is not in Z3")]
    F3Range { id: usize, value: u8 },
    #[error("edge {id}: z6 = {found} but (f2, f3) maps to {expected}")]
    Z6 { id: usize, found: u8, expected: u8 },
    #[error("edge {id}: int6 = {value} is not in -5..=5 or is zero")]
    IntRange { id: usize, value: i64 },
    #[error("edge {id}: int6 = {value} is not congruent to z6 = {z6} mod 6")]
    Congruence { id: usize, value: i64, z6: u8 },
    #[error("edge {id}: int6 given without z6")]
    Partial { id: usize },
}

/// A flow file that does not belong to the graph it is checked against.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Mismatch {
    #[error("flow lists {found} edges, graph has {expected}")]
    EdgeCount { found: usize, expected: usize },
    #[error("edge {0} does not exist in the graph or is listed twice")]
    UnknownEdge(usize),
    #[error("edge {id} is {tail}->{head} in the flow but {graph_tail}->{graph_head} in the graph")]
    Endpoints {
        id: usize,
        tail: usize,
        head: usize,
        graph_tail: usize,
        graph_head: usize,
    },
    #[error("root {root} is not a vertex of a graph with {n} vertices")]
    Root { root: usize, n: usize },
}

impl FlowFile {
    /// Builds a complete file from a group flow and its integer lift.
    pub fn from_flows(
        g: &Multigraph,
        root: usize,
        group: &GroupFlow,
        integer: &IntegerFlow,
    ) -> FlowFile {
        let edges = g
            .edges()
            .map(|e| {
                let p = group.get(e.id).expect("total flow");
                FlowRecord {
                    id: e.id.0,
                    tail: e.tail.0,
                    head: e.head.0,
                    f2: p.f2.value(),
                    f3: p.f3.value(),
                    z6: Some(pair_to_z6(p).value()),
                    int6: integer.get(e.id),
                }
            })
            .collect();
        FlowFile {
            root,
            edges,
            trace: Vec::new(),
        }
    }

    pub fn check_consistency(&self) -> Result<(), Inconsistency> {
        for r in &self.edges {
            let id = r.id;
            if r.f2 > 1 {
                return Err(Inconsistency::F2Range { id, value: r.f2 });
            }
            if r.f3 > 2 {
                return Err(Inconsistency::F3Range { id, value: r.f3 });
            }
            let expected = pair_to_z6(Pair::new(r.f2, r.f3)).value();
            match (r.z6, r.int6) {
                (None, None) => {}
                (None, Some(_)) => return Err(Inconsistency::Partial { id }),
                (Some(found), int6) => {
                    if found != expected {
                        return Err(Inconsistency::Z6 {
                            id,
                            found,
                            expected,
                        });
                    }
                    if let Some(value) = int6 {
                        if value == 0 || !(-5..=5).contains(&value) {
                            return Err(Inconsistency::IntRange { id, value });
                        }
                        if value.rem_euclid(6) != found as i64 {
                            return Err(Inconsistency::Congruence {
                                id,
                                value,
                                z6: found,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_against(&self, g: &Multigraph) -> Result<(), Mismatch> {
        if self.root >= g.vertex_count() {
            return Err(Mismatch::Root {
                root: self.root,
                n: g.vertex_count(),
            });
        }
        if self.edges.len() != g.edge_count() {
            return Err(Mismatch::EdgeCount {
                found: self.edges.len(),
                expected: g.edge_count(),
            });
        }
        let mut seen = vec![false; g.edge_id_bound()];
        for r in &self.edges {
            let edge = g.edge(EdgeId(r.id)).ok_or(Mismatch::UnknownEdge(r.id))?;
            if std::mem::replace(&mut seen[r.id], true) {
                return Err(Mismatch::UnknownEdge(r.id));
            }
            if (edge.tail.0, edge.head.0) != (r.tail, r.head) {
                return Err(Mismatch::Endpoints {
                    id: r.id,
                    tail: r.tail,
                    head: r.head,
                    graph_tail: edge.tail.0,
                    graph_head: edge.head.0,
                });
            }
        }
        Ok(())
    }

    /// `(f2, f3)` per edge. Values must already be in range.
    pub fn group_flow(&self) -> GroupFlow {
        Flow::from_pairs(
            self.edges
                .iter()
                .map(|r| (EdgeId(r.id), Pair::new(r.f2, r.f3))),
        )
    }

    pub fn z6_flow(&self) -> Z6Flow {
        sixflow::tutte::group_flow_to_z6(&self.group_flow())
    }

    /// The integer column, if every record has one.
    pub fn integer_flow(&self) -> Option<IntegerFlow> {
        let mut f = Flow::new();
        for r in &self.edges {
            f.set(EdgeId(r.id), r.int6?);
        }
        Some(f)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.trace {
            out.push_str("c trace ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("s SOLUTION root={}\n", self.root));
        for r in &self.edges {
            out.push_str(&format!(
                "f {} {} {} {} {}",
                r.id, r.tail, r.head, r.f2, r.f3
            ));
            if let (Some(z6), Some(int6)) = (r.z6, r.int6) {
                out.push_str(&format!(" {z6} {int6}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain data serializes");
        out.push('\n');
        out
    }

    /// Parses either format; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<FlowFile, ParseError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| err(e.line(), e.to_string()));
        }
        let mut root = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (line, fields) in content_lines(text) {
            last_line = line;
            match fields[0] {
                "s" => {
                    if root.is_some() {
                        return Err(err(line, "second solution line"));
                    }
                    let value = match fields.as_slice() {
                        ["s", "SOLUTION", r] => r.strip_prefix("root="),
                        _ => None,
                    };
                    let value = value.ok_or_else(|| err(line, "expected `s SOLUTION root=<u>`"))?;
                    root = Some(number(line, value, "root")?);
                }
                "f" => {
                    if root.is_none() {
                        return Err(err(line, "flow value before solution line"));
                    }
                    if fields.len() != 6 && fields.len() != 8 {
                        return Err(err(
                            line,
                            "expected `f <id> <tail> <head> <f2> <f3> [<z6> <int6>]`",
                        ));
                    }
                    edges.push(FlowRecord {
                        id: number(line, fields[1], "edge id")?,
                        tail: number(line, fields[2], "tail")?,
                        head: number(line, fields[3], "head")?,
                        f2: number(line, fields[4], "f2")?,
                        f3: number(line, fields[5], "f3")?,
                        z6: fields.get(6).map(|f| number(line, f, "z6")).transpose()?,
                        int6: fields.get(7).map(|f| number(line, f, "int6")).transpose()?,
                    });
                }
                other => return Err(err(line, format!("unknown line type `{other}`"))),
            }
        }
        let root = root.ok_or_else(|| err(last_line.max(1), "missing solution line"))?;
        Ok(FlowFile {
            root,
            edges,
            trace: Vec::new(),
        })
    }
}
