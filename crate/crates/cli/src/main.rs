use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steplinalg::bench::{run_bench, BenchConfig};
use steplinalg::matmul::Variant;
use steplinalg::pedagogy::verify_sw_basis;
use steplinalg::registry::{compute, ComputeRequest, Inputs, Limits, TraceOutcome, METHODS};
use steplinalg::render;
use steplinalg::{Error, Task};
use steplinalg_service::ServiceConfig;

#[derive(Parser)]
#[command(name = "steplinalg", version, about = "Exact linear algebra with step-by-step traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply A by B (input {"A": ..., "B": ...})
    Mul(ComputeArgs),
    /// Determinant of A
    Det(ComputeArgs),
    /// Inverse of A
    Inv(ComputeArgs),
    /// Rational eigenvalues and eigenvectors of A
    Eigen(ComputeArgs),
    /// Solve A x = b (input {"A": ..., "b": ...})
    Solve(ComputeArgs),
    /// Check the 2x2 Strassen-style scheme on the four basis matrices
    VerifySw(VerifyArgs),
    /// Time naive and Strassen multiplication and count operations
    Bench(BenchArgs),
    /// Run the HTTP API
    Serve(ServeArgs),
    /// List the registered methods
    Methods(MethodsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Args)]
struct ComputeArgs {
    /// Method id; repeat to compare methods side by side
    #[arg(long = "method", required = true)]
    methods: Vec<String>,
    /// JSON file with the named input matrices
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "winograd")]
    variant: Variant,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    entry_bits: u32,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    thresholds: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "winograd")]
    variant: Variant,
    /// Also write the rows as CSV to this path
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: std::net::IpAddr,
    /// Do not send permissive cross-origin headers
    #[arg(long)]
    no_cors: bool,
}

#[derive(Args)]
struct MethodsArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn from_engine(e: &Error) -> Failure {
        let text = format!("{}: {e}", e.code());
        match e {
            Error::UnknownMethod(_) | Error::MethodTaskMismatch { .. } | Error::MissingInput(_) | Error::ConfigInvalid(_) => {
                Failure::Usage(text)
            }
            _ => Failure::Compute(text),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read_inputs(path: &Path) -> Result<Inputs, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid input file {}: {e}", path.display())))
}

fn run_compute(task: Task, args: ComputeArgs) -> Result<(), Failure> {
    let inputs = read_inputs(&args.input)?;
    let req = ComputeRequest { task, methods: args.methods, inputs };
    let resp = compute(&req, Limits::default()).map_err(|e| Failure::from_engine(&e))?;

    if let [single] = resp.traces.as_slice() {
        return match single {
            TraceOutcome::Failed(f) => Err(Failure::Compute(format!("{}: {}", f.error, f.message))),
            TraceOutcome::Trace(t) => {
                let text = match args.format {
                    Format::Json => t.to_json(),
                    Format::Markdown => render::trace_markdown(t),
                    Format::Table => render::trace_text(t),
                };
                emit(args.out.as_deref(), &with_newline(text))
            }
        };
    }

    let text = match args.format {
        Format::Json => resp.to_json(),
        Format::Markdown => render::response_markdown(&resp),
        Format::Table => render::response_text(&resp),
    };
    emit(args.out.as_deref(), &with_newline(text))?;
    let failures: Vec<String> = resp
        .traces
        .iter()
        .filter_map(|o| match o {
            TraceOutcome::Failed(f) => Some(format!("{}: {}: {}", f.method, f.error, f.message)),
            TraceOutcome::Trace(_) => None,
        })
        .collect();
    for f in &failures {
        eprintln!("{f}");
    }
    if failures.len() == resp.traces.len() {
        return Err(Failure::Compute("every method failed".into()));
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let report = verify_sw_basis(args.variant, args.samples, args.seed).map_err(|e| Failure::from_engine(&e))?;
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string(&report).expect("report serializes"),
        ReportFormat::Table => report.to_table(),
    };
    emit(None, &with_newline(text))?;
    if report.overall_pass {
        Ok(())
    } else {
        Err(Failure::Compute("basis check failed".into()))
    }
}

fn run_bench_cmd(args: BenchArgs) -> Result<(), Failure> {
    let cfg = BenchConfig {
        sizes: args.sizes,
        entry_bits: args.entry_bits,
        thresholds: args.thresholds,
        repetitions: args.reps,
        seed: args.seed,
        variant: args.variant,
    };
    let report = run_bench(&cfg).map_err(|e| Failure::from_engine(&e))?;
    if let Some(path) = &args.csv {
        emit(Some(path), &report.to_csv())?;
    }
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string(&report).expect("report serializes"),
        ReportFormat::Table => report.to_table(),
    };
    emit(None, &with_newline(text))
}

fn run_serve(args: ServeArgs) -> Result<(), Failure> {
    let cfg = ServiceConfig { cors: !args.no_cors, limits: Limits::default() };
    let addr = SocketAddr::new(args.bind, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Compute(e.to_string()))?;
    runtime
        .block_on(steplinalg_service::serve(addr, cfg))
        .map_err(|e| Failure::Usage(format!("cannot serve on {addr}: {e}")))
}

fn run_methods(args: MethodsArgs) -> Result<(), Failure> {
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string(METHODS).expect("registry serializes"),
        ReportFormat::Table => {
            let mut out = format!("{:<12} {:<18} {:<52} {}\n", "task", "id", "name", "applicability");
            for m in METHODS {
                out.push_str(&format!("{:<12} {:<18} {:<52} {}\n", m.task, m.id, m.name, m.applicability));
            }
            out
        }
    };
    emit(None, &with_newline(text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mul(a) => run_compute(Task::Multiply, a),
        Command::Det(a) => run_compute(Task::Determinant, a),
        Command::Inv(a) => run_compute(Task::Inverse, a),
        Command::Eigen(a) => run_compute(Task::Eigen, a),
        Command::Solve(a) => run_compute(Task::Solve, a),
        Command::VerifySw(a) => run_verify(a),
        Command::Bench(a) => run_bench_cmd(a),
        Command::Serve(a) => run_serve(a),
        Command::Methods(a) => run_methods(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
