#![allow(dead_code)]

use proptest::prelude::*;
use sixflow::Multigraph;

/// Arbitrary multigraph with `1..=max_n` vertices and up to `max_m` edges.
pub fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_m)
            .prop_map(move |arcs| Multigraph::build(n, &arcs).unwrap())
    })
}

/// Plain union-find component count over the given edges.
pub fn component_count(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut count = n;
    for (a, b) in arcs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

pub fn arcs(g: &Multigraph) -> Vec<(usize, usize)> {
    g.edges().map(|e| (e.tail.0, e.head.0)).collect()
}
