//! Command-line front end: run catalog problems, grid-convergence
//! studies and solver-vs-oracle comparisons, emitting CSV artifacts.
//!
//! Exit codes: 0 success, 1 usage error, 2 solver error.

mod config_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config_file::RunConfigFile;
use kinlb::diagnostics::STUDY_OMEGA;
use kinlb::{EoSolver, LbSolver, Overrides, Problem, SolverConfig, SolverError};

const USAGE_EXIT: u8 = 1;
const SOLVER_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "kinlb",
    version,
    about = "Lattice Boltzmann solver for scalar conservation laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a problem and write the final field and per-step report CSVs
    Run(RunArgs),
    /// Grid-refinement study: points, spacing, L2 error and measured order
    Convergence(ConvergenceArgs),
    /// Lockstep comparison of the kinetic run against the macroscopic oracle
    CompareEo(CompareArgs),
    /// List the bundled problems
    List,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Problem id (see `kinlb list`)
    #[arg(long)]
    problem: Option<String>,
    /// Flat key = value config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Lattice points, e.g. `81` or `65,33`
    #[arg(long)]
    points: Option<String>,
    /// Relaxation parameter in (0, 2)
    #[arg(long)]
    omega: Option<f64>,
    /// Safety factor on the sampled wave-speed bound (default 1.05)
    #[arg(long)]
    lambda_safety: Option<f64>,
    /// End time override (turns steady problems into transient runs)
    #[arg(long)]
    t_end: Option<f64>,
    /// Steady-state stopping tolerance on the per-step change
    #[arg(long)]
    steady_tol: Option<f64>,
    /// Step budget for steady runs
    #[arg(long)]
    max_steps: Option<usize>,
    /// Source stiffness for `leveque-yee`
    #[arg(long)]
    mu: Option<f64>,
    /// Output directory (or KINLB_OUT, default `.`)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated grid ladder (default 40,80,160,320)
    #[arg(long, default_value = "40,80,160,320")]
    grids: String,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest acceptable per-step L-inf difference (accepts `inf`)
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

enum CliError {
    Usage(String),
    Solver(SolverError),
    /// A requested check failed (reported like a solver error).
    Check(String),
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::UnknownProblem(_)
            | SolverError::InvalidConfig(_)
            | SolverError::InvalidInput(_)
            | SolverError::NoExactSolution(_) => CliError::Usage(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_EXIT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::CompareEo(args) => cmd_compare_eo(args),
        Command::List => cmd_list(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_EXIT)
        }
        Err(CliError::Solver(e)) => {
            eprintln!("solver error: {e}");
            ExitCode::from(SOLVER_EXIT)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(SOLVER_EXIT)
        }
    }
}

/// Merge config file and flags into a problem, overrides and output dir.
fn resolve(common: &CommonArgs) -> Result<(Problem<f64>, Overrides<f64>, PathBuf), CliError> {
    let file_cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            RunConfigFile::parse(&text).map_err(CliError::Usage)?
        }
        None => RunConfigFile::default(),
    };

    let id = common
        .problem
        .clone()
        .or(file_cfg.problem.clone())
        .ok_or_else(|| {
            CliError::Usage("no problem given (use --problem or a config file)".into())
        })?;
    let mu = common.mu.or(file_cfg.mu);
    let problem = if let Some(mu) = mu {
        if id != "leveque-yee" {
            return Err(CliError::Usage(format!(
                "--mu applies to `leveque-yee` only, not `{id}`"
            )));
        }
        kinlb::problems::leveque_yee::<f64>(mu)
    } else {
        kinlb::problems::by_id::<f64>(&id)?
    };

    let points_text = common.points.clone().or_else(|| {
        file_cfg.points.clone().map(|v| {
            v.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
    });
    let points = match points_text {
        Some(text) => Some(parse_points(&text, problem.domain.dim).map_err(CliError::Usage)?),
        None => None,
    };

    let overrides = Overrides {
        points,
        omega: common.omega.or(file_cfg.omega),
        lambda_safety: common.lambda_safety.or(file_cfg.lambda_safety),
        t_end: common.t_end.or(file_cfg.t_end),
        steady_tol: common.steady_tol.or(file_cfg.steady_tol),
        max_steps: common.max_steps.or(file_cfg.max_steps),
    };
    if let Some(w) = overrides.omega {
        if !(w > 0.0 && w < 2.0) {
            return Err(CliError::Usage(format!(
                "omega must lie in (0, 2), got {w}"
            )));
        }
    }
    if let Some(p) = &overrides.points {
        if p.iter().take(problem.domain.dim).any(|&n| n < 3) {
            return Err(CliError::Usage(
                "grids need at least 3 points per direction".into(),
            ));
        }
    }

    let out = common
        .out
        .clone()
        .or_else(|| std::env::var_os("KINLB_OUT").map(PathBuf::from))
        .or_else(|| file_cfg.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
    Ok((problem, overrides, out))
}

fn parse_points(text: &str, dim: usize) -> Result<[usize; 2], String> {
    let parts: Result<Vec<usize>, _> = text.split(',').map(|v| v.trim().parse()).collect();
    let parts = parts.map_err(|e| format!("bad --points `{text}`: {e}"))?;
    match (dim, parts.as_slice()) {
        (1, [n]) => Ok([*n, 1]),
        (2, [n]) => Ok([*n, *n]),
        (2, [n, m]) => Ok([*n, *m]),
        _ => Err(format!(
            "--points expects {} value(s) for a {dim}D problem",
            if dim == 1 { "one" } else { "one or two" }
        )),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let (problem, overrides, out) = resolve(&args.common)?;
    let config = SolverConfig::for_problem(&problem, &overrides)?;
    let (u, report) = if problem.source.is_some() {
        kinlb::run_with_source(&problem, &config)?
    } else {
        kinlb::run(&problem, &config)?
    };
    let field_path = out.join(format!("{}_final.csv", problem.id));
    let report_path = out.join(format!("{}_report.csv", problem.id));
    output::write_field(&field_path, &u)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", field_path.display())))?;
    output::write_report(&report_path, &report)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", report_path.display())))?;
    let last = report
        .final_record()
        .expect("run records its initial state");
    println!(
        "{}: {} steps to t = {:.6}, mass {:.6e}, wall {:.3}s",
        problem.id, report.steps, last.t, last.mass, report.wall_seconds
    );
    println!("wrote {}", field_path.display());
    println!("wrote {}", report_path.display());
    Ok(())
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<(), CliError> {
    let (problem, mut overrides, out) = resolve(&args.common)?;
    let grids: Result<Vec<usize>, _> = args.grids.split(',').map(|v| v.trim().parse()).collect();
    let grids = grids.map_err(|e| CliError::Usage(format!("bad --grids: {e}")))?;
    // refinement studies default to the low-dissipation relaxation
    overrides.omega = Some(overrides.omega.unwrap_or(STUDY_OMEGA));
    let rows = kinlb::convergence_study(&problem, &grids, &overrides)?;
    let path = out.join(format!("{}_convergence.csv", problem.id));
    output::write_convergence(&path, &rows)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("points        h              L2        EOC");
    for r in &rows {
        match r.eoc {
            Some(q) => println!("{:6}  {:.6e}  {:.6e}  {:.6}", r.points, r.h, r.l2, q),
            None => println!("{:6}  {:.6e}  {:.6e}        -", r.points, r.h, r.l2),
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_compare_eo(args: CompareArgs) -> Result<(), CliError> {
    let (problem, overrides, out) = resolve(&args.common)?;
    if problem.source.is_some() {
        return Err(CliError::Usage(format!(
            "`{}` has a source term; the macroscopic oracle is homogeneous-only",
            problem.id
        )));
    }
    let config = SolverConfig::for_problem(&problem, &overrides)?;
    let mut lb = LbSolver::new(&problem, &config)?;
    let mut eo = EoSolver::new(&problem, &config)?;
    let mut rows = Vec::new();
    let mut max_diff = 0.0f64;
    let linf = |a: &kinlb::RealField, b: &kinlb::RealField| {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    rows.push((0usize, 0.0f64, linf(lb.u(), eo.u())));
    while !(lb.is_finished() || eo.is_finished()) {
        if lb.steps() >= config.max_steps {
            return Err(CliError::Solver(SolverError::MaxStepsExceeded {
                max_steps: config.max_steps,
                last_delta: lb.last_delta(),
            }));
        }
        lb.step()?;
        eo.step()?;
        let d = linf(lb.u(), eo.u());
        max_diff = max_diff.max(d);
        rows.push((lb.steps(), lb.time(), d));
    }
    let path = out.join(format!("{}_eo_diff.csv", problem.id));
    output::write_diffs(&path, &rows)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!(
        "{}: {} steps, max |lb - eo| = {max_diff:.3e} (tol {})",
        problem.id,
        lb.steps(),
        args.tol
    );
    println!("wrote {}", path.display());
    if max_diff <= args.tol {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "kinetic and macroscopic runs differ by {max_diff:.3e} > tol {}",
            args.tol
        )))
    }
}

fn cmd_list() -> Result<(), CliError> {
    println!("{:24} {:>9}  reference", "id", "grid");
    for p in kinlb::catalog::<f64>() {
        let grid = if p.domain.dim == 1 {
            format!("{}", p.default_points[0])
        } else {
            format!("{}x{}", p.default_points[0], p.default_points[1])
        };
        println!("{:24} {:>9}  {}", p.id, grid, p.reference);
    }
    Ok(())
}
