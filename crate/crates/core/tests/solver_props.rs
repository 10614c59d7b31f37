mod common;

use proptest::prelude::*;
use sixflow::connectivity::is_2_edge_connected;
use sixflow::construct::{solve, solve_with, SolveError, SolveOptions, StepKind};
use sixflow::flows::{check_theorem2, Group};
use sixflow::multigraph::{EdgeId, Multigraph, VertexId};
use sixflow::testkit::{
    check_theorem2_exhaustive, count_nz_flows, enumerate_small_2ec_multigraphs, petersen,
    random_2ec_multigraph, random_ears, OracleGroup, DEFAULT_EDGE_GUARD,
};

fn debug() -> SolveOptions {
    SolveOptions { debug_verify: true }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_root_yields_a_theorem2_flow(seed in any::<u64>(), n in 1usize..16, extra in 0usize..12) {
        let g = random_2ec_multigraph(n, extra, seed);
        for u in g.vertices() {
            let sol = solve_with(&g, u, &debug()).unwrap();
            prop_assert_eq!(check_theorem2(&g, u, &sol.flow), Ok(()));
            prop_assert!(sol.trace.max_depth() <= g.vertex_count());
        }
    }

    #[test]
    fn recursion_shrinks_vertex_count(seed in any::<u64>(), n in 1usize..40, extra in 0usize..30) {
        let g = random_2ec_multigraph(n, extra, seed);
        let steps = solve(&g, VertexId(0)).unwrap().trace.steps;
        prop_assert_eq!(steps[0].depth, 0);
        prop_assert_eq!(steps[0].vertices, g.vertex_count());
        for (i, step) in steps.iter().enumerate().skip(1) {
            let parent = steps[..i].iter().rev().find(|p| p.depth + 1 == step.depth);
            let parent = parent.expect("every nested step has a parent");
            prop_assert!(parent.vertices > step.vertices, "{} then {}", parent, step);
        }
    }

    #[test]
    fn bridgeless_steps_leave_their_supports(seed in any::<u64>(), n in 2usize..40, extra in 0usize..30) {
        let g = random_2ec_multigraph(n, extra, seed);
        let u = VertexId((seed % n as u64) as usize);
        let sol = solve(&g, u).unwrap();
        for step in &sol.trace.steps {
            if let StepKind::Bridgeless { h_edges, s_edges, first, second } = &step.kind {
                prop_assert!(first != second);
                prop_assert!(s_edges.len() >= 2);
                prop_assert!(s_edges.contains(first) && s_edges.contains(second));
                for e in s_edges {
                    prop_assert!(!sol.flow.get(*e).unwrap().f3.is_zero());
                }
                for e in h_edges {
                    prop_assert!(!sol.flow.get(*e).unwrap().f2.is_zero());
                }
                let mut degree = std::collections::HashMap::new();
                for e in h_edges {
                    let edge = g.edge(*e).unwrap();
                    *degree.entry(edge.tail).or_insert(0usize) += 1;
                    *degree.entry(edge.head).or_insert(0usize) += 1;
                }
                prop_assert!(degree.values().all(|d| d % 2 == 0));
            }
        }
    }

    #[test]
    fn every_ear_prefix_is_2_edge_connected(seed in any::<u64>(), n in 1usize..60, extra in 0usize..20) {
        let ears = random_ears(n, extra, seed);
        let mut arcs = Vec::new();
        let mut touched = vec![false; n];
        for ear in ears {
            arcs.extend(ear);
            for &(a, b) in &arcs {
                touched[a] = true;
                touched[b] = true;
            }
            // the prefix lives on the vertices reached so far
            let keep: Vec<usize> = (0..n).filter(|&v| touched[v]).collect();
            let index = |v: usize| keep.binary_search(&v).unwrap();
            let sub: Vec<_> = arcs.iter().map(|&(a, b)| (index(a), index(b))).collect();
            let g = Multigraph::build(keep.len(), &sub).unwrap();
            prop_assert!(is_2_edge_connected(&g));
        }
    }
}

#[test]
fn generator_output_is_2_edge_connected_for_1000_seeds() {
    for seed in 0..1000u64 {
        let n = 1 + (seed as usize % 60);
        let g = random_2ec_multigraph(n, seed as usize % 17, seed);
        assert_eq!(g.vertex_count(), n);
        assert!(is_2_edge_connected(&g), "seed {seed}");
    }
}

#[test]
fn generator_is_deterministic() {
    for seed in [0, 1, 42, u64::MAX] {
        assert_eq!(
            random_2ec_multigraph(50, 20, seed),
            random_2ec_multigraph(50, 20, seed)
        );
    }
    assert_ne!(
        random_2ec_multigraph(50, 20, 1),
        random_2ec_multigraph(50, 20, 2)
    );
}

#[test]
fn solver_agrees_with_oracle_on_small_graphs() {
    let mut graphs = 0;
    for g in enumerate_small_2ec_multigraphs(3, 6) {
        let report = check_theorem2_exhaustive(&g, DEFAULT_EDGE_GUARD).unwrap();
        assert!(report.holds(), "{g:?}: {report:?}");
        graphs += 1;
    }
    assert!(graphs > 100);
}

/// Independent recount: on two vertices a graph with `a` loops at v0, `b`
/// at v1 and `c` edges between them is 2-edge-connected exactly when
/// `c >= 2`; on one vertex every loop count qualifies.
#[test]
fn enumeration_count_two_vertices() {
    let m_max = 3;
    let two = (0..=m_max)
        .flat_map(|a| {
            (0..=m_max - a).flat_map(move |b| (2..=m_max - a - b).map(move |c| (a, b, c)))
        })
        .count();
    let one = m_max + 1;
    let found = enumerate_small_2ec_multigraphs(2, m_max)
        .filter(|g| g.vertex_count() == 2)
        .count();
    assert_eq!(found, two);
    assert_eq!(enumerate_small_2ec_multigraphs(2, m_max).count(), one + two);
    assert_eq!(one + two, 8);
}

#[test]
fn oracle_counts() {
    let digon = Multigraph::build(2, &[(0, 1), (1, 0)]).unwrap();
    assert_eq!(
        count_nz_flows(&digon, OracleGroup::Z2xZ3, DEFAULT_EDGE_GUARD),
        Ok(5)
    );
    let triangle = Multigraph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(
        count_nz_flows(&triangle, OracleGroup::Z6, DEFAULT_EDGE_GUARD),
        Ok(5)
    );
    assert_eq!(
        count_nz_flows(&triangle, OracleGroup::Z2, DEFAULT_EDGE_GUARD),
        Ok(1)
    );
    let edge = Multigraph::build(2, &[(0, 1)]).unwrap();
    assert_eq!(
        count_nz_flows(&edge, OracleGroup::Z2xZ3, DEFAULT_EDGE_GUARD),
        Ok(0)
    );
    // cubic and not bipartite, so no nowhere-zero 3-flow
    let k4 = Multigraph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(
        count_nz_flows(&k4, OracleGroup::Z3, DEFAULT_EDGE_GUARD),
        Ok(0)
    );
}

#[test]
fn petersen_every_root() {
    let p = petersen();
    for u in p.vertices() {
        let sol = solve_with(&p, u, &debug()).unwrap();
        assert_eq!(check_theorem2(&p, u, &sol.flow), Ok(()));
    }
}

#[test]
fn rejects_graphs_with_bridges() {
    let path = Multigraph::build(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(
        solve(&path, VertexId(0)).unwrap_err(),
        SolveError::Bridge(EdgeId(0))
    );
    let two = Multigraph::build(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
    assert!(matches!(
        solve(&two, VertexId(0)),
        Err(SolveError::Disconnected(_))
    ));
}
