//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sixflow::construct::{solve, solve_with, SolveOptions};
use sixflow::flows::{
    check_k_flow, check_nowhere_zero, check_theorem2, verify_flow, verify_k_flow,
    verify_nowhere_zero, verify_theorem2, GroupFlow, IntegerFlow, Pair,
};
use sixflow::testkit::{
    check_theorem2_exhaustive, count_nz_flows, enumerate_small_2ec_multigraphs, petersen,
    random_2ec_multigraph, random_2ec_with_edges, random_ears, OracleGroup, DEFAULT_EDGE_GUARD,
};
use sixflow::tutte::{group_flow_to_integer_flow, group_flow_to_z6};
use sixflow::{EdgeId, Multigraph, VertexId, Z6};
use sixflow_cli::format::write_graph;

const EXHAUSTIVE_VERTICES: usize = 4;
const EXHAUSTIVE_EDGES: usize = 7;
const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_GRAPHS: u64 = 1000;
const RANDOM_MAX_VERTICES: usize = 200;
const RANDOM_MAX_EDGES: usize = 600;
const RANDOM_BUDGET: Duration = Duration::from_secs(60);
const METAMORPHIC_CASES: u64 = 200;
const SCALE_EDGES: usize = 100_000;
const SCALE_BUDGET: Duration = Duration::from_secs(10);
const DETERMINISM_RUNS: usize = 3;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn debug() -> SolveOptions {
    SolveOptions { debug_verify: true }
}

/// The random suite: vertex count, then extra ears so the total stays within
/// the edge cap.
fn random_suite() -> impl Iterator<Item = (u64, Multigraph)> {
    (0..RANDOM_GRAPHS).map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let n = rng.gen_range(1..=RANDOM_MAX_VERTICES);
        let base: usize = random_ears(n, 0, seed).iter().map(Vec::len).sum();
        let extra = rng.gen_range(0..=RANDOM_MAX_EDGES - base);
        (seed, random_2ec_multigraph(n, extra, seed))
    })
}

fn exhaustive(options: &SolveOptions, with_oracle: bool) -> Verdict {
    let start = Instant::now();
    let (mut graphs, mut rooted) = (0, 0);
    for g in enumerate_small_2ec_multigraphs(EXHAUSTIVE_VERTICES, EXHAUSTIVE_EDGES) {
        graphs += 1;
        for u in g.vertices() {
            let sol = solve_with(&g, u, options).map_err(|e| format!("{g:?} root {u}: {e}"))?;
            check_theorem2(&g, u, &sol.flow).map_err(|v| format!("{g:?} root {u}: {v}"))?;
            rooted += 1;
        }
        if with_oracle {
            let report =
                check_theorem2_exhaustive(&g, DEFAULT_EDGE_GUARD).map_err(|e| e.to_string())?;
            if !report.holds() {
                return Err(format!("{g:?}: {report:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > EXHAUSTIVE_BUDGET {
        return Err(format!("took {elapsed:?}, budget {EXHAUSTIVE_BUDGET:?}"));
    }
    Ok(format!(
        "{graphs} graphs, {rooted} rooted solves, 0 failures, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn end_to_end(g: &Multigraph, u: VertexId, options: &SolveOptions) -> Result<(), String> {
    let sol = solve_with(g, u, options).map_err(|e| e.to_string())?;
    check_theorem2(g, u, &sol.flow).map_err(|v| v.to_string())?;
    let phi = group_flow_to_z6(&sol.flow);
    let out = group_flow_to_integer_flow(g, &phi).map_err(|e| e.to_string())?;
    check_k_flow(g, &out.flow, 6).map_err(|v| v.to_string())?;
    for e in g.edge_ids() {
        if Z6::new(out.flow.get(e).unwrap()) != phi.get(e).unwrap() {
            return Err(format!("residue mismatch on {e}"));
        }
    }
    Ok(())
}

fn random_end_to_end(options: &SolveOptions) -> Verdict {
    let start = Instant::now();
    let (mut max_n, mut max_m) = (0, 0);
    for (seed, g) in random_suite() {
        if g.vertex_count() > RANDOM_MAX_VERTICES || g.edge_count() > RANDOM_MAX_EDGES {
            return Err(format!("seed {seed}: instance exceeds the size caps"));
        }
        max_n = max_n.max(g.vertex_count());
        max_m = max_m.max(g.edge_count());
        let u = VertexId(seed as usize % g.vertex_count());
        end_to_end(&g, u, options).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    let elapsed = start.elapsed();
    if elapsed > RANDOM_BUDGET {
        return Err(format!("took {elapsed:?}, budget {RANDOM_BUDGET:?}"));
    }
    Ok(format!(
        "{RANDOM_GRAPHS} graphs (max n={max_n}, max m={max_m}), all 6-flows with matching residues, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn proof_step_invariants() -> Verdict {
    let small = exhaustive(&debug(), false)?;
    let random = random_end_to_end(&debug())?;
    Ok(format!(
        "debug-verify clean on exhaustive suite ({small}) and random suite ({random})"
    ))
}

fn oracle_counts() -> Verdict {
    let digon = Multigraph::build(2, &[(0, 1), (1, 0)]).unwrap();
    let triangle = Multigraph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let d = count_nz_flows(&digon, OracleGroup::Z2xZ3, DEFAULT_EDGE_GUARD)
        .map_err(|e| e.to_string())?;
    let t = count_nz_flows(&triangle, OracleGroup::Z6, DEFAULT_EDGE_GUARD)
        .map_err(|e| e.to_string())?;
    if (d, t) != (5, 5) {
        return Err(format!("digon {d}, triangle {t}; expected 5 and 5"));
    }
    Ok("digon 5 Z2xZ3-flows, triangle 5 Z6-flows".to_string())
}

fn all_verdicts(g: &Multigraph, f: &GroupFlow, ints: &IntegerFlow) -> Vec<bool> {
    let mut out = vec![
        verify_flow(g, f),
        verify_nowhere_zero(g, f),
        verify_k_flow(g, ints, 6),
    ];
    out.extend(g.vertices().map(|u| verify_theorem2(g, u, f)));
    out
}

fn metamorphic() -> Verdict {
    let mut passing = 0;
    for case in 0..METAMORPHIC_CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let n = rng.gen_range(1..=30);
        let g = random_2ec_multigraph(n, rng.gen_range(1..=20), case);
        let sol = solve(&g, VertexId(rng.gen_range(0..n))).map_err(|e| e.to_string())?;
        let mut f = sol.flow;
        let mut ints = group_flow_to_integer_flow(&g, &group_flow_to_z6(&f))
            .map_err(|e| e.to_string())?
            .flow;
        // every other case is scrambled so failing verdicts are exercised too
        if case % 2 == 1 {
            let e = EdgeId(rng.gen_range(0..g.edge_count()));
            f.set(e, Pair::new(rng.gen_range(0..2), rng.gen_range(0..3)));
            ints.set(e, rng.gen_range(-6..=6));
        }
        let e = EdgeId(rng.gen_range(0..g.edge_count()));
        let h = g.reverse_edge(e).unwrap();
        let mut f2 = f.clone();
        f2.set(e, -f.get(e).unwrap());
        let mut ints2 = ints.clone();
        ints2.set(e, -ints.get(e).unwrap());
        let before = all_verdicts(&g, &f, &ints);
        if before != all_verdicts(&h, &f2, &ints2) {
            return Err(format!("case {case}: verdicts changed after reversing {e}"));
        }
        passing += before.iter().filter(|&&b| b).count();
    }
    Ok(format!(
        "{METAMORPHIC_CASES} cases unchanged ({passing} passing verdicts compared)"
    ))
}

fn petersen_all_roots() -> Verdict {
    let p = petersen();
    for u in p.vertices() {
        let sol = solve_with(&p, u, &debug()).map_err(|e| e.to_string())?;
        check_nowhere_zero(&p, &sol.flow).map_err(|v| format!("root {u}: group: {v}"))?;
        check_theorem2(&p, u, &sol.flow).map_err(|v| format!("root {u}: theorem2: {v}"))?;
        let ints = group_flow_to_integer_flow(&p, &group_flow_to_z6(&sol.flow))
            .map_err(|e| e.to_string())?;
        check_k_flow(&p, &ints.flow, 6).map_err(|v| format!("root {u}: 6-flow: {v}"))?;
    }
    Ok("10 roots, group/theorem2/6-flow verifiers all pass".to_string())
}

fn scale() -> Verdict {
    let g = random_2ec_with_edges(SCALE_EDGES, 1);
    if g.edge_count() != SCALE_EDGES {
        return Err(format!("generator gave {} edges", g.edge_count()));
    }
    let start = Instant::now();
    let sol = solve(&g, VertexId(0)).map_err(|e| e.to_string())?;
    let out =
        group_flow_to_integer_flow(&g, &group_flow_to_z6(&sol.flow)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check_k_flow(&g, &out.flow, 6).map_err(|v| v.to_string())?;
    if elapsed > SCALE_BUDGET {
        return Err(format!("took {elapsed:?}, budget {SCALE_BUDGET:?}"));
    }
    Ok(format!(
        "n={} m={} solved and converted in {:.2}s (depth {}, {} augmentations)",
        g.vertex_count(),
        g.edge_count(),
        elapsed.as_secs_f64(),
        sol.trace.max_depth(),
        out.augmentations
    ))
}

fn cli_output(args: &[&str]) -> Result<String, String> {
    let out = sixflow_cli::run(args.iter().copied());
    if out.code != sixflow_cli::Exit::Ok {
        return Err(format!("{args:?}: {}", out.stderr));
    }
    Ok(out.stdout)
}

/// Bench output with the two trailing timing columns removed.
fn bench_rows() -> Result<Vec<String>, String> {
    let out = cli_output(&["sixflow", "bench", "--sizes", "500,2000", "--seeds", "1,2"])?;
    Ok(out
        .lines()
        .map(|l| l.rsplitn(3, '\t').nth(2).unwrap_or(l).to_string())
        .collect())
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("g.txt");
    let graph = write_graph(&random_2ec_multigraph(300, 150, 11));
    std::fs::write(&path, &graph).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();
    let commands: [&[&str]; 4] = [
        &["sixflow", "gen", "300", "150", "--seed", "11"],
        &["sixflow", "solve", p, "--root", "7", "--trace"],
        &["sixflow", "solve", p, "--format", "machine"],
        &["sixflow", "gen", "1", "0", "--seed", "7"],
    ];
    for cmd in commands {
        let first = cli_output(cmd)?;
        for _ in 1..DETERMINISM_RUNS {
            if cli_output(cmd)? != first {
                return Err(format!("{cmd:?} differs between runs"));
            }
        }
    }
    if cli_output(commands[0])? != graph {
        return Err("gen output differs from library generator".into());
    }
    let rows = bench_rows()?;
    if rows.len() != 5 || bench_rows()? != rows {
        return Err("bench rows differ apart from timing".into());
    }
    let a = solve(&petersen(), VertexId(3)).map_err(|e| e.to_string())?;
    let b = solve(&petersen(), VertexId(3)).map_err(|e| e.to_string())?;
    if a.flow != b.flow || a.trace != b.trace {
        return Err("library solve differs between runs".into());
    }
    Ok(format!(
        "{} commands x {DETERMINISM_RUNS} runs byte-identical, bench rows stable",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 exhaustive correctness (n<=4, m<=7, oracle cross-check)",
            || exhaustive(&SolveOptions::default(), true),
        ),
        ("2 end-to-end 6-flows on random graphs", || {
            random_end_to_end(&SolveOptions::default())
        }),
        (
            "3 proof-step invariants under debug-verify",
            proof_step_invariants,
        ),
        ("4 oracle counts", oracle_counts),
        ("5 reversal/negation metamorphic", metamorphic),
        ("6 Petersen graph, every root", petersen_all_roots),
        ("7 scale: 1e5 edges under 10s", scale),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
