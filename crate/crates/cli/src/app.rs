use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use sixflow::construct::{solve_with, SolveError, SolveOptions};
use sixflow::flows::{check_k_flow, check_nowhere_zero, check_theorem2};
use sixflow::testkit::{self, OracleError};
use sixflow::tutte::{group_flow_to_integer_flow, group_flow_to_z6, TutteError};
use sixflow::{Multigraph, VertexId};

use crate::format::{parse_graph, write_graph, FlowFile};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 1,
    Structural = 2,
    Failed = 3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: Exit,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "sixflow",
    version,
    about = "Nowhere-zero 6-flows for bridgeless multigraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Nowhere-zero Z2×Z3-flow
    Group,
    /// Group flow with f2 = 0 at the recorded root
    Theorem2,
    /// Integer nowhere-zero 6-flow
    K6,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a flow for a graph file ("-" reads stdin)
    Solve {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Include the recursion steps in the output
        #[arg(long)]
        trace: bool,
        /// Re-check every intermediate flow and instance
        #[arg(long)]
        debug_verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a flow file against a graph file
    Verify {
        #[arg(value_enum)]
        mode: Mode,
        graph: PathBuf,
        flow: PathBuf,
    },
    /// Recompute the z6 and integer columns of a flow file from (f2, f3)
    Convert {
        graph: PathBuf,
        flow: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a random 2-edge-connected multigraph
    Gen {
        vertices: usize,
        #[arg(default_value_t = 0)]
        extra_ears: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count nowhere-zero flows by brute force and check the solver for every root
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = testkit::DEFAULT_EDGE_GUARD)]
        guard_edges: usize,
    },
    /// Time solve and convert on random graphs of the given edge counts
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10_000, 100_000])]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64])]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
    },
}

struct Failure {
    code: Exit,
    message: String,
}

fn fail(code: Exit, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Input
            } else {
                Exit::Ok
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            Outcome {
                code,
                stdout,
                stderr,
            }
        }
    }
}

pub fn execute(command: &Command) -> Outcome {
    let result = match command {
        Command::Solve {
            input,
            root,
            trace,
            debug_verify,
            format,
        } => cmd_solve(input, *root, *trace, *debug_verify, *format),
        Command::Verify { mode, graph, flow } => cmd_verify(*mode, graph, flow),
        Command::Convert {
            graph,
            flow,
            format,
        } => cmd_convert(graph, flow, *format),
        Command::Gen {
            vertices,
            extra_ears,
            seed,
        } => cmd_gen(*vertices, *extra_ears, *seed),
        Command::Oracle { input, guard_edges } => cmd_oracle(input, *guard_edges),
        Command::Bench {
            sizes,
            seeds,
            repetitions,
        } => cmd_bench(sizes, seeds, *repetitions),
    };
    match result {
        Ok(stdout) => Outcome {
            code: Exit::Ok,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| fail(Exit::Input, format!("<stdin>: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| fail(Exit::Input, format!("{}: {e}", path.display())))
}

fn label(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".to_string()
    } else {
        path.display().to_string()
    }
}

fn load_graph(path: &Path) -> Result<Multigraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| fail(Exit::Input, format!("{}: {e}", label(path))))
}

/// Parses a flow file and checks it on its own and against `g`.
fn load_flow(path: &Path, g: &Multigraph) -> Result<FlowFile, Failure> {
    let name = label(path);
    let flow =
        FlowFile::parse(&read(path)?).map_err(|e| fail(Exit::Input, format!("{name}: {e}")))?;
    flow.check_consistency()
        .map_err(|e| fail(Exit::Failed, format!("{name}: {e}")))?;
    flow.check_against(g)
        .map_err(|e| fail(Exit::Input, format!("{name}: {e}")))?;
    Ok(flow)
}

fn solve_error(e: SolveError) -> Failure {
    let code = match e {
        SolveError::UnknownRoot(_) => Exit::Input,
        SolveError::Empty | SolveError::Bridge(_) | SolveError::Disconnected(_) => Exit::Structural,
        SolveError::Defect(_) => Exit::Failed,
    };
    fail(code, e.to_string())
}

fn tutte_error(e: TutteError) -> Failure {
    fail(Exit::Failed, e.to_string())
}

fn render(flow: &FlowFile, format: Format) -> String {
    match format {
        Format::Text => flow.to_text(),
        Format::Machine => flow.to_json(),
    }
}

fn cmd_solve(
    input: &Path,
    root: usize,
    trace: bool,
    debug_verify: bool,
    format: Format,
) -> CmdResult {
    let g = load_graph(input)?;
    let options = SolveOptions { debug_verify };
    let solution = solve_with(&g, VertexId(root), &options).map_err(solve_error)?;
    let conversion =
        group_flow_to_integer_flow(&g, &group_flow_to_z6(&solution.flow)).map_err(tutte_error)?;
    let mut file = FlowFile::from_flows(&g, root, &solution.flow, &conversion.flow);
    if trace {
        file.trace = solution.trace.steps.iter().map(|s| s.to_string()).collect();
        file.trace
            .push(format!("augmentations={}", conversion.augmentations));
    }
    Ok(render(&file, format))
}

fn cmd_verify(mode: Mode, graph: &Path, flow: &Path) -> CmdResult {
    let g = load_graph(graph)?;
    let file = load_flow(flow, &g)?;
    let verdict = match mode {
        Mode::Group => check_nowhere_zero(&g, &file.group_flow()),
        Mode::Theorem2 => check_theorem2(&g, VertexId(file.root), &file.group_flow()),
        Mode::K6 => {
            let ints = file
                .integer_flow()
                .ok_or_else(|| fail(Exit::Input, "flow file has no int6 column"))?;
            check_k_flow(&g, &ints, 6)
        }
    };
    let name = match mode {
        Mode::Group => "nowhere-zero Z2×Z3-flow".to_string(),
        Mode::Theorem2 => format!("nowhere-zero Z2×Z3-flow with f2 = 0 at v{}", file.root),
        Mode::K6 => "nowhere-zero 6-flow".to_string(),
    };
    verdict.map_err(|v| fail(Exit::Failed, format!("not a {name}: {v}")))?;
    Ok(format!("ok: {name}\n"))
}

fn cmd_convert(graph: &Path, flow: &Path, format: Format) -> CmdResult {
    let g = load_graph(graph)?;
    let file = load_flow(flow, &g)?;
    let group = file.group_flow();
    let conversion =
        group_flow_to_integer_flow(&g, &group_flow_to_z6(&group)).map_err(tutte_error)?;
    let out = FlowFile::from_flows(&g, file.root, &group, &conversion.flow);
    Ok(render(&out, format))
}

fn cmd_gen(vertices: usize, extra_ears: usize, seed: u64) -> CmdResult {
    if vertices == 0 {
        return Err(fail(Exit::Input, "need at least one vertex"));
    }
    Ok(write_graph(&testkit::random_2ec_multigraph(
        vertices, extra_ears, seed,
    )))
}

fn cmd_oracle(input: &Path, guard: usize) -> CmdResult {
    let g = load_graph(input)?;
    let report = testkit::check_theorem2_exhaustive(&g, guard).map_err(|e| match e {
        OracleError::TooLarge { .. } | OracleError::NotTwoEdgeConnected => {
            fail(Exit::Structural, e.to_string())
        }
        OracleError::Solver(s) => solve_error(s),
    })?;
    let mut out = format!("{} nowhere-zero Z2×Z3 flows; ", report.flows);
    if report.holds() {
        out.push_str("theorem2 holds for all roots\n");
        return Ok(out);
    }
    out.push_str("theorem2 fails");
    for r in report
        .roots
        .iter()
        .filter(|r| r.valid == 0 || !r.solver_in_valid_set)
    {
        let _ = write!(
            out,
            " [{}: {} valid, solver {}]",
            r.root,
            r.valid,
            if r.solver_in_valid_set { "ok" } else { "wrong" }
        );
    }
    Err(fail(Exit::Failed, out))
}

fn cmd_bench(sizes: &[usize], seeds: &[u64], repetitions: usize) -> CmdResult {
    let mut out =
        String::from("size\tseed\tn\tm\tdepth\tsteps\taugmentations\tsolve_ms\tconvert_ms\n");
    for &size in sizes {
        for &seed in seeds {
            let g = testkit::random_2ec_with_edges(size, seed);
            let mut best = (f64::INFINITY, f64::INFINITY);
            let mut stats = (0, 0, 0);
            for _ in 0..repetitions.max(1) {
                let start = Instant::now();
                let solution =
                    solve_with(&g, VertexId(0), &SolveOptions::default()).map_err(solve_error)?;
                let solved = start.elapsed();
                let start = Instant::now();
                let conversion = group_flow_to_integer_flow(&g, &group_flow_to_z6(&solution.flow))
                    .map_err(tutte_error)?;
                let converted = start.elapsed();
                best.0 = best.0.min(solved.as_secs_f64() * 1e3);
                best.1 = best.1.min(converted.as_secs_f64() * 1e3);
                stats = (
                    solution.trace.max_depth(),
                    solution.trace.steps.len(),
                    conversion.augmentations,
                );
            }
            let _ = writeln!(
                out,
                "{size}\t{seed}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}",
                g.vertex_count(),
                g.edge_count(),
                stats.0,
                stats.1,
                stats.2,
                best.0,
                best.1
            );
        }
    }
    Ok(out)
}
