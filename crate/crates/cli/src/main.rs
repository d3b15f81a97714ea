mod problem;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use chainqaoa::bench::{run_bench, to_csv, BenchConfig};
use chainqaoa::compiler::{compile, ideal_chain, SearchOptions};
use chainqaoa::engine::{optimize, Evaluator, Init, Method, OptimizerConfig, QaoaParams};
use chainqaoa::fmt::g17;
use chainqaoa::hardware::{ChipModel, SearchMode, SubchainLibrary, DEFAULT_BEAM_WIDTH};
use chainqaoa::qasm::{emit, QasmDocument};
use chainqaoa::tasks::{process_results, LocalSampler, TaskService, TaskStatus};
use chainqaoa::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};

use problem::ProblemArgs;

/// QAOA modeling, parameter search and chain compilation.
#[derive(Debug, Parser)]
#[command(name = "chainqaoa", version)]
struct Cli {
    /// Seed for every random choice (initial points, sampling, benchmark graphs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Chip calibration JSON.
    #[arg(long, global = true)]
    calib: Option<PathBuf>,
    /// Task store directory.
    #[arg(long, global = true, default_value = ".chainqaoa")]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize QAOA angles for a problem.
    Solve(SolveArgs),
    /// Compile a problem and angles to OpenQASM for a chain.
    Compile(CompileArgs),
    /// Queue a QASM file for sampling.
    Submit(SubmitArgs),
    /// Print the status of a task.
    Status { id: String },
    /// Print sampled counts, ranked against a problem when one is given.
    Result(ResultArgs),
    /// Compile random graphs and report depth and CNOT metrics.
    Bench(BenchArgs),
    /// Print the subchain library of the calibrated chip.
    Chains(ChainsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Grid,
    Simplex,
    GridSimplex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    Zeros,
    Random,
    Interp,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Defaults to grid-simplex at p = 1 and simplex otherwise.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Defaults to zeros at p = 1 and interp otherwise.
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Evaluate on the whole statevector instead of per-term light cones.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Write the optimal angles as JSON.
    #[arg(long)]
    params_out: Option<PathBuf>,
    /// Write every evaluation as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct CompileArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Angles JSON as written by `solve --params-out`.
    #[arg(long)]
    params: PathBuf,
    /// Checked against the angle file when given.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value = "circuit.qasm")]
    out: PathBuf,
    /// Defaults to the QASM path with a `.layout.json` extension.
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    b_max: usize,
    #[arg(long, default_value_t = DEFAULT_BEAM_WIDTH)]
    beam_width: usize,
}

#[derive(Debug, clap::Args)]
struct SubmitArgs {
    qasm: PathBuf,
    #[arg(long, default_value_t = 100)]
    shots: u64,
    #[arg(long, default_value = "")]
    name: String,
    /// Block until the task finishes and print its counts.
    #[arg(long)]
    wait: bool,
}

#[derive(Debug, clap::Args)]
struct ResultArgs {
    id: String,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Rows flagged as solutions.
    #[arg(long, default_value_t = 2)]
    top: usize,
    /// Write the best solution as a colored DOT graph.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write a bitstring histogram as CSV.
    #[arg(long)]
    hist: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 30, 40])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.8])]
    d: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1])]
    p: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 5)]
    b_max: usize,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ChainsArgs {
    /// Longest chain to list; defaults to the chip size.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BEAM_WIDTH)]
    beam_width: usize,
    /// Enumerate every simple path instead of beam search (small chips only).
    #[arg(long)]
    exhaustive: bool,
    /// Print the whole library as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NotFound(_) => 2,
                Error::Unavailable { .. } => 3,
                Error::Capacity(_) => 4,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(a) => solve(a, cli.seed),
        Command::Compile(a) => compile_cmd(a, cli.calib.as_deref()),
        Command::Submit(a) => submit(a, &cli.store, cli.seed),
        Command::Status { id } => {
            let svc = open_store(&cli.store, cli.seed)?;
            println!("{}", svc.status(&id)?);
            Ok(())
        }
        Command::Result(a) => result(a, &cli.store, cli.seed),
        Command::Bench(a) => bench(a, cli.seed),
        Command::Chains(a) => chains(a, cli.calib.as_deref()),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| g17(*x)).collect();
    format!("[{}]", items.join(", "))
}

fn solve(a: SolveArgs, seed: u64) -> Result<()> {
    let problem = a.problem.build()?;
    let method = a.method.unwrap_or(if a.p == 1 {
        MethodArg::GridSimplex
    } else {
        MethodArg::Simplex
    });
    let init = match a.init.unwrap_or(if a.p == 1 {
        InitArg::Zeros
    } else {
        InitArg::Interp
    }) {
        InitArg::Zeros => Init::Params(QaoaParams::zeros(a.p)),
        InitArg::Random => Init::Random { seed },
        InitArg::Interp => Init::InterpChain,
    };
    let config = OptimizerConfig {
        method: match method {
            MethodArg::Grid => Method::Grid,
            MethodArg::Simplex => Method::Simplex,
            MethodArg::GridSimplex => Method::GridSimplex,
        },
        init,
        evaluator: if a.full {
            Evaluator::Full
        } else {
            Evaluator::Decomposed
        },
        grid_points: a.grid,
        ..OptimizerConfig::default()
    };
    let res = optimize(&problem.graph, a.p, &config)?;
    println!("p = {}", a.p);
    println!("gamma = {}", fmt_list(&res.params.gamma));
    println!("beta = {}", fmt_list(&res.params.beta));
    println!("E_p = {}", g17(res.energy));
    println!(
        "E_p + offset = {}",
        g17(res.energy + problem.graph.offset())
    );
    println!("evaluations = {}", res.trace.len());
    if !res.converged {
        eprintln!("warning: evaluation budget exhausted before convergence");
    }
    if let Some(path) = &a.params_out {
        write(path, &res.params.to_json())?;
    }
    if let Some(path) = &a.trace {
        write(path, &res.trace_csv())?;
    }
    Ok(())
}

fn compile_cmd(a: CompileArgs, calib: Option<&Path>) -> Result<()> {
    let problem = a.problem.build()?;
    let text = std::fs::read_to_string(&a.params).map_err(|e| Error::Io {
        path: a.params.clone(),
        source: e,
    })?;
    let params = QaoaParams::from_json(&text)?;
    if let Some(p) = a.p {
        if p != params.p() {
            return Err(Error::Config(format!(
                "--p {p} but the angle file has depth {}",
                params.p()
            )));
        }
    }
    let n = problem.graph.num_nodes();
    let (chain, fidelity) = match calib {
        Some(path) => {
            let chip = ChipModel::load(path)?;
            if n < 2 {
                (chip.qubits.iter().take(n).map(|q| q.id).collect(), None)
            } else {
                let lib = SubchainLibrary::build(
                    &chip,
                    n,
                    SearchMode::Beam {
                        width: a.beam_width,
                    },
                )?;
                let best = lib.select(n)?;
                (best.qubits, Some(best.fidelity))
            }
        }
        None => (ideal_chain(n), None),
    };
    if chain.len() < n {
        return Err(Error::Capacity(format!(
            "graph needs {n} qubits, chip has {}",
            chain.len()
        )));
    }
    let options = SearchOptions {
        b_max: a.b_max,
        ..SearchOptions::default()
    };
    let c = compile(&problem.graph, &params, &chain, options)?;
    emit(&c.circuit).write(&a.out)?;
    let layout = a
        .layout
        .unwrap_or_else(|| a.out.with_extension("layout.json"));
    write(&layout, &(c.circuit.layout_json() + "\n"))?;
    let ids: Vec<String> = chain.iter().map(u32::to_string).collect();
    println!("chain = [{}]", ids.join(", "));
    if let Some(f) = fidelity {
        println!("chain fidelity = {}", g17(f));
    }
    println!("initial_positions = {:?}", c.mapping.positions());
    println!("final_positions = {:?}", c.circuit.final_layout());
    println!("depth_pre = {}", c.depth_pre);
    println!("depth = {}", c.depth_post());
    println!("cnot_count = {}", c.cnot_count());
    println!("wrote {} and {}", a.out.display(), layout.display());
    Ok(())
}

fn open_store(store: &Path, seed: u64) -> Result<TaskService> {
    TaskService::open(store, Arc::new(LocalSampler), seed)
}

fn submit(a: SubmitArgs, store: &Path, seed: u64) -> Result<()> {
    let text = std::fs::read_to_string(&a.qasm).map_err(|e| Error::Io {
        path: a.qasm.clone(),
        source: e,
    })?;
    let doc = QasmDocument::from_text(text);
    let svc = open_store(store, seed)?;
    let name = if a.name.is_empty() {
        a.qasm
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    } else {
        a.name
    };
    let id = svc.submit(&doc, a.shots, &name)?;
    println!("{id}");
    if a.wait {
        let rec = svc.wait(&id)?;
        println!("{}", rec.status);
        match rec.status {
            TaskStatus::Completed => {
                for (bits, count) in rec.counts.unwrap_or_default() {
                    println!("{bits} {count}");
                }
            }
            _ => {
                return Err(Error::Unavailable {
                    status: rec.status.to_string(),
                    detail: rec.error,
                })
            }
        }
    }
    // dropping the service lets the executor finish the queue
    Ok(())
}

fn result(a: ResultArgs, store: &Path, seed: u64) -> Result<()> {
    let svc = open_store(store, seed)?;
    let counts = svc.result(&a.id)?;
    if !a.problem.is_given() {
        for (bits, count) in &counts {
            println!("{bits} {count}");
        }
        return Ok(());
    }
    let problem = a.problem.build()?;
    let ranked = process_results(&counts, &problem.graph, a.top)?.with_sense(problem.sense());
    print!("{}", ranked.to_table());
    if let Some(path) = &a.hist {
        write(path, &ranked.histogram_csv())?;
    }
    if let Some(path) = &a.dot {
        let best = ranked
            .rows
            .first()
            .ok_or_else(|| Error::Config("no samples to draw".into()))?;
        match problem.dot(&best.bitstring)? {
            Some(dot) => write(path, &dot)?,
            None => eprintln!("warning: this problem has no graph to draw"),
        }
    }
    Ok(())
}

fn bench(a: BenchArgs, seed: u64) -> Result<()> {
    let config = BenchConfig {
        ns: a.n,
        densities: a.d,
        ps: a.p,
        reps: a.reps,
        seed,
        search: SearchOptions {
            b_max: a.b_max,
            ..SearchOptions::default()
        },
    };
    let csv = to_csv(&run_bench(&config)?);
    match &a.out {
        Some(path) => write(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn chains(a: ChainsArgs, calib: Option<&Path>) -> Result<()> {
    let path = calib.ok_or_else(|| Error::Config("`chains` needs --calib".into()))?;
    let chip = ChipModel::load(path)?;
    let max_len = a.max_len.unwrap_or(chip.qubits.len());
    let mode = if a.exhaustive {
        SearchMode::Exhaustive
    } else {
        SearchMode::Beam {
            width: a.beam_width,
        }
    };
    let lib = SubchainLibrary::build(&chip, max_len, mode)?;
    if a.json {
        println!("{}", lib.to_json());
        return Ok(());
    }
    println!("{:>4}  {:>20}  {:>6}  qubits", "len", "fidelity", "count");
    for (k, list) in &lib.entries {
        match list.first() {
            Some(best) => {
                let ids: Vec<String> = best.qubits.iter().map(u32::to_string).collect();
                println!(
                    "{k:>4}  {:>20}  {:>6}  {}",
                    g17(best.fidelity),
                    list.len(),
                    ids.join("-")
                );
            }
            None => println!("{k:>4}  {:>20}  {:>6}  -", "-", 0),
        }
    }
    Ok(())
}
