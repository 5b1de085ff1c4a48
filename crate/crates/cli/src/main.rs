use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypcert::certificate::{Certificate, PRECISION_BITS};
use hypcert::geometry::{lengths_from_params, params_from_lengths};
use hypcert::gimbal::probe_partitions;
use hypcert::pipeline::{run_pipeline, PipelineOutcome, StepStatus};
use hypcert::triangulation::TriangulationFile;
use hypcert::verify::{bootstrap_solve, CertifyMethod, CertifyOptions, SolveOptions};
use hypcert::Triangulation;

const EXIT_INPUT: u8 = 1;
const EXIT_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "hypcert", version, about = "Rigorous verification of hyperbolic structures on closed 3-manifold triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the combinatorics of a triangulation file.
    Check { file: PathBuf },
    /// Find approximate edge lengths and print a triangulation file with them.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full certification and report the verdict.
    Certify {
        file: PathBuf,
        /// Working precision in bits; only 53 is supported.
        #[arg(long, default_value_t = PRECISION_BITS)]
        precision: u32,
        /// Certify with the Krawczyk operator (default).
        #[arg(long, conflicts_with = "interval_newton")]
        krawczyk: bool,
        /// Certify with the interval Newton operator.
        #[arg(long)]
        interval_newton: bool,
        /// Polish the input with float Newton on the kept equations first.
        #[arg(long)]
        refine: bool,
        /// Record step timings in the certificate.
        #[arg(long)]
        timings: bool,
        /// Write the certificate to this file.
        #[arg(short, long)]
        certificate: Option<PathBuf>,
        /// Print the certificate instead of the summary.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Re-verify the realization, angle sum and gimbal steps from a certificate.
    Recheck { file: PathBuf, certificate: PathBuf },
    /// Survey which approximate edge sets avoid gimbal lock.
    ProbeGimbal {
        file: PathBuf,
        /// Maximal number of partitions to evaluate.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// Options for the bootstrap solver, used when a file has no lengths.
#[derive(Args, Clone, Copy)]
struct SolverArgs {
    #[arg(long, default_value_t = SolveOptions::default().max_iters)]
    max_iters: usize,
    #[arg(long, default_value_t = SolveOptions::default().seed)]
    seed: u64,
}

impl From<SolverArgs> for SolveOptions {
    fn from(a: SolverArgs) -> Self {
        SolveOptions {
            max_iters: a.max_iters,
            seed: a.seed,
        }
    }
}

/// Failure with its exit code.
struct Failure(u8, String);

type CmdResult = Result<ExitCode, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(TriangulationFile, String), Failure> {
    let text = read_text(path)?;
    let file = Triangulation::parse(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok((file, text))
}

fn write_out(path: Option<&Path>, s: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, s).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

/// Approximate parameters: the file's lengths if present, else the solver's
/// best point, which may still be far from a solution.
fn approximate_params(file: &TriangulationFile, solver: SolverArgs) -> Result<Vec<f64>, String> {
    if let Some(l) = &file.lengths {
        return Ok(params_from_lengths(l));
    }
    match bootstrap_solve(&file.triangulation, None, &solver.into()) {
        Ok(r) => Ok(r.nu),
        Err(e) => match e.best() {
            Some((nu, _)) => Ok(nu.to_vec()),
            None => Err(format!("no approximate solution: {e}")),
        },
    }
}

fn cmd_check(file: &Path) -> CmdResult {
    let (f, _) = load(file)?;
    let t = &f.triangulation;
    println!("OK");
    println!("tetrahedra {}", t.num_tets());
    println!("edges {}", t.num_edges());
    println!("vertices {}", t.num_vertices());
    println!("euler characteristic {}", t.euler_characteristic());
    if let Some(l) = &f.lengths {
        println!("lengths {}", l.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn leading_comments(text: &str) -> String {
    text.lines()
        .take_while(|l| l.trim_start().starts_with('#'))
        .fold(String::new(), |mut s, l| {
            let _ = writeln!(s, "{l}");
            s
        })
}

fn cmd_solve(file: &Path, solver: SolverArgs, output: Option<&Path>) -> CmdResult {
    let (f, text) = load(file)?;
    let t = &f.triangulation;
    let init = f.lengths.as_deref().map(params_from_lengths);
    match bootstrap_solve(t, init.as_deref(), &solver.into()) {
        Ok(r) => {
            eprintln!("solved: residual {:e} after {} iterations", r.residual, r.iterations);
            let out = leading_comments(&text) + &t.to_text(Some(&lengths_from_params(&r.nu)));
            write_out(output, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Err(Failure(EXIT_FAILED, format!("unsolved: {e}"))),
    }
}

fn summary(out: &PipelineOutcome) -> String {
    let mut s = String::new();
    for r in &out.steps {
        let status = match &r.status {
            StepStatus::Passed => "passed".to_string(),
            StepStatus::Failed(d) => format!("FAILED: {d}"),
            StepStatus::Skipped => "skipped".to_string(),
        };
        let _ = writeln!(s, "step {:<3} {:<32} {status}", r.step, r.step.description());
    }
    if let Some(b) = &out.certified {
        let w = b.nu.iter().map(|x| x.width()).fold(0.0, f64::max);
        let _ = writeln!(s, "parameter box: {} inflation rounds, max width {w:.3e}", b.rounds);
    }
    if let Some(th) = &out.theta {
        let w = th.iter().map(|x| x.width()).fold(0.0, f64::max);
        let _ = writeln!(s, "angle sums: max width {w:.3e}");
    }
    match out.failed_step() {
        None if out.verified() => s.push_str("VERIFIED\n"),
        Some(step) => {
            let _ = writeln!(s, "NOT VERIFIED (step {step})");
        }
        None => s.push_str("NOT VERIFIED\n"),
    }
    s
}

struct CertifyArgs {
    precision: u32,
    interval_newton: bool,
    refine: bool,
    timings: bool,
    certificate: Option<PathBuf>,
    json: bool,
    solver: SolverArgs,
}

fn cmd_certify(file: &Path, a: CertifyArgs) -> CmdResult {
    if a.precision != PRECISION_BITS {
        return Err(input_error(format!(
            "precision {} is not supported; only {PRECISION_BITS} bits are available",
            a.precision
        )));
    }
    let (f, _) = load(file)?;
    let t = &f.triangulation;
    let opts = CertifyOptions {
        method: if a.interval_newton {
            CertifyMethod::IntervalNewton
        } else {
            CertifyMethod::Krawczyk
        },
        refine: a.refine,
    };
    let nu0 = approximate_params(&f, a.solver).map_err(|e| Failure(EXIT_FAILED, e))?;
    let out = run_pipeline(t, &nu0, &opts);
    let cert = Certificate::from_outcome(t, &out, &opts, a.timings);
    let json = cert.to_json() + "\n";
    if let Some(p) = &a.certificate {
        write_out(Some(p), &json)?;
    }
    if a.json {
        print!("{json}");
    } else {
        print!("{}", summary(&out));
    }
    Ok(if out.verified() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    })
}

fn cmd_recheck(file: &Path, certificate: &Path) -> CmdResult {
    let (f, _) = load(file)?;
    let cert = Certificate::from_json(&read_text(certificate)?).map_err(|e| input_error(e.to_string()))?;
    let out = cert
        .recheck(&f.triangulation)
        .map_err(|e| Failure(EXIT_FAILED, e.to_string()))?;
    print!("{}", summary(&out));
    Ok(if out.verified() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    })
}

fn cmd_probe(file: &Path, budget: usize, json: bool, solver: SolverArgs) -> CmdResult {
    let (f, _) = load(file)?;
    let t = &f.triangulation;
    let nu = approximate_params(&f, solver).map_err(|e| Failure(EXIT_FAILED, e))?;
    let report = probe_partitions(t, &nu, budget, solver.seed).map_err(|e| Failure(EXIT_FAILED, e.to_string()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
        return Ok(ExitCode::SUCCESS);
    }
    println!("# {} partitions ({})", report.rows.len(), if report.exhaustive { "exhaustive" } else { "sampled" });
    println!("{:<24} {:>12} {:>8}", "approximate edges", "sigma_min", "F_e tie");
    for r in &report.rows {
        let sim = r.sim.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        let sigma = r.sigma_min.map_or("-".to_string(), |s| format!("{s:.3e}"));
        let tie = match r.fixed_points_coincide {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        println!("{sim:<24} {sigma:>12} {tie:>8}");
    }
    const THRESHOLD: f64 = 1e-6;
    println!("# {} partitions with sigma_min > {THRESHOLD:e}", report.avoiding(THRESHOLD).count());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Solve { file, solver, output } => cmd_solve(&file, solver, output.as_deref()),
        Command::Certify {
            file,
            precision,
            krawczyk: _,
            interval_newton,
            refine,
            timings,
            certificate,
            json,
            solver,
        } => cmd_certify(
            &file,
            CertifyArgs {
                precision,
                interval_newton,
                refine,
                timings,
                certificate,
                json,
                solver,
            },
        ),
        Command::Recheck { file, certificate } => cmd_recheck(&file, &certificate),
        Command::ProbeGimbal {
            file,
            budget,
            json,
            solver,
        } => cmd_probe(&file, budget, json, solver),
    }
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own code would collide with the
    // conservative-failure code.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("hypcert: {msg}");
            ExitCode::from(code)
        }
    }
}
