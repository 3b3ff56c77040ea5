//! `swe`: command-line frontend for swe-core.
//!
//! Exit codes: 0 on success, 1 for bad input or usage, 2 when a run fails.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use swe_core::cases::{builtin_cases, case_by_name, case_names, CaseSpec};
use swe_core::drivers;
use swe_core::io::{self, RunConfig};
use swe_core::mesh::{generate_structured, write_mesh, Pattern, Side, Sides};
use swe_core::{Error, Scheme};

#[derive(Parser, Debug)]
#[command(name = "swe", version, about = "Semi-implicit shallow water solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a case described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the weak problem solved in the projection.
        #[arg(long)]
        mode: Option<Mode>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the end time.
        #[arg(long)]
        t_end: Option<f64>,
    },
    /// Write a structured rectangle mesh.
    MeshGen {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// xmin,xmax,ymin,ymax
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0, 0.0, 1.0])]
        bounds: Vec<f64>,
        #[arg(long, default_value = "alternating")]
        pattern: String,
        /// Tag for all four sides.
        #[arg(long, default_value = "wall")]
        sides: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// L2 errors and observed orders on a sequence of grids.
    Convergence {
        #[arg(long, default_value = "vortex")]
        case: String,
        #[arg(long, value_delimiter = ',', default_values_t = [32, 64, 128])]
        levels: Vec<usize>,
    },
    /// Drift of a lake at rest after a number of steps.
    Wellbalance {
        #[arg(long, default_value = "leveque-bump")]
        case: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Cut through a Riemann problem compared with the exact solution.
    RiemannCompare {
        #[arg(long)]
        case: String,
        /// Time of the cut; defaults to the case end time.
        #[arg(long)]
        t: Option<f64>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in cases.
    ListCases,
    /// Print the full config of a built-in case.
    ShowConfig {
        #[arg(long)]
        case: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Wp1,
    Wp2,
    Wp3,
}

impl From<Mode> for Scheme {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Wp1 => Scheme::Wp1,
            Mode::Wp2 => Scheme::Wp2,
            Mode::Wp3 => Scheme::Wp3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run { config, mode, out, t_end } => run(&config, mode, out, t_end),
        Command::MeshGen {
            nx,
            ny,
            bounds,
            pattern,
            sides,
            out,
        } => mesh_gen(nx, ny, &bounds, &pattern, &sides, &out),
        Command::Convergence { case, levels } => convergence(&case, &levels),
        Command::Wellbalance { case, steps } => wellbalance(&case, steps),
        Command::RiemannCompare { case, t, out } => riemann_compare(&case, t, out.as_deref()),
        Command::ListCases => {
            for c in builtin_cases() {
                println!("{:<22} {:<18} T = {}", c.name, c.kind.name(), c.end_time);
            }
            Ok(())
        }
        Command::ShowConfig { case } => {
            emit(&io::write_config(&RunConfig::from_case(builtin(&case)?)))
        }
    }
}

/// Writes to stdout; a closed pipe (`swe ... | head`) is not an error.
fn emit(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn builtin(name: &str) -> Result<CaseSpec, Error> {
    case_by_name(name)
        .ok_or_else(|| Error::Invalid(format!("unknown case `{name}`; known: {}", case_names().join(", "))))
}

fn run(config: &Path, mode: Option<Mode>, out: Option<PathBuf>, t_end: Option<f64>) -> Result<(), Error> {
    let mut cfg = io::read_config(config)?;
    if let Some(m) = mode {
        let scheme = Scheme::from(m);
        if scheme != Scheme::Wp2 && cfg.case.numerics.theta != 1.0 {
            eprintln!("note: {scheme} is fully implicit; theta {} -> 1", cfg.case.numerics.theta);
            cfg.case.numerics.theta = 1.0;
        }
        cfg.case.numerics.scheme = scheme;
    }
    if let Some(t) = t_end {
        cfg.case.end_time = t;
    }
    if out.is_some() {
        cfg.output.dir = out;
    }
    cfg.case.validate()?;
    let spec = &cfg.case;
    let dir = cfg.output.dir.clone();
    if let Some(d) = &dir {
        std::fs::create_dir_all(d)?;
    }
    let write_vtk = cfg.output.vtk && dir.is_some();
    let mut solver = spec.solver()?;
    eprintln!(
        "{}: {} vertices, {} dual cells, scheme {}, T = {}",
        spec.name,
        solver.mesh.primal.num_vertices(),
        solver.mesh.dual.num_cells(),
        spec.numerics.scheme,
        spec.end_time
    );

    let mut frame = 0usize;
    let mut last_snapshot = 0usize;
    let mut next_out = cfg.output.dt_out;
    let mut io_err: Option<std::io::Error> = None;
    let snapshot = |solver: &swe_core::solver::Solver, frame: &mut usize, err: &mut Option<std::io::Error>| {
        if let (true, Some(d)) = (write_vtk, &dir) {
            let path = d.join(format!("{}_{:05}.vtk", spec.name, *frame));
            if let Err(e) = io::write_vtk(&solver.mesh, &solver.state, &path) {
                err.get_or_insert(e);
            }
            *frame += 1;
        }
    };
    snapshot(&solver, &mut frame, &mut io_err);
    let started = std::time::Instant::now();
    solver.run_until(spec.end_time, |s, _| {
        let due = match (cfg.output.every, next_out.as_mut()) {
            (Some(n), _) => s.summary.steps % n == 0,
            (None, Some(next)) if s.state.t >= *next - 1e-12 => {
                while *next <= s.state.t + 1e-12 {
                    *next += cfg.output.dt_out.unwrap_or(f64::INFINITY);
                }
                true
            }
            _ => false,
        };
        if due {
            snapshot(s, &mut frame, &mut io_err);
            last_snapshot = s.summary.steps;
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if last_snapshot != solver.summary.steps {
        let mut err = None;
        snapshot(&solver, &mut frame, &mut err);
        if let Some(e) = err {
            return Err(e.into());
        }
    }
    if let Some(d) = &dir {
        if !spec.gauges.is_empty() {
            io::write_gauges_csv(&solver.gauges, &d.join(format!("{}_gauges.csv", spec.name)))?;
        }
    }
    let s = &solver.summary;
    println!(
        "t = {:.6} steps = {} dt = [{:.3e}, {:.3e}] cg = {} (max {}) min depth = {:.3e} wall = {:.2?}",
        solver.state.t,
        s.steps,
        s.min_dt,
        s.max_dt,
        s.total_cg_iterations,
        s.max_cg_iterations,
        s.min_depth,
        started.elapsed()
    );
    if write_vtk {
        println!("wrote {frame} VTK snapshot(s)");
    }
    Ok(())
}

fn mesh_gen(nx: usize, ny: usize, bounds: &[f64], pattern: &str, sides: &str, out: &Path) -> Result<(), Error> {
    let pattern: Pattern = pattern.parse().map_err(Error::Invalid)?;
    let side: Side = sides.parse().map_err(Error::Invalid)?;
    let bounds: [f64; 4] = bounds
        .try_into()
        .map_err(|_| Error::Invalid("bounds needs four values".into()))?;
    let data = generate_structured(bounds, nx, ny, pattern, Sides::all(side))?;
    write_mesh(&data, out)?;
    println!(
        "wrote {} vertices, {} triangles to {}",
        data.vertices.len(),
        data.triangles.len(),
        out.display()
    );
    Ok(())
}

fn fmt_order(o: Option<f64>) -> String {
    o.map_or("-".into(), |o| format!("{o:.2}"))
}

fn convergence(case: &str, levels: &[usize]) -> Result<(), Error> {
    if levels.is_empty() {
        return Err(Error::Invalid("no levels given".into()));
    }
    let rows = drivers::convergence(&builtin(case)?, levels)?;
    let mut s = format!("{:>6} {:>12} {:>6} {:>12} {:>6} {:>12} {:>6}\n", "n", "v1", "O", "v2", "O", "eta", "O");
    for r in &rows {
        let _ = writeln!(
            s,
            "{:>6} {:>12.4e} {:>6} {:>12.4e} {:>6} {:>12.4e} {:>6}",
            r.n,
            r.errors.v1,
            fmt_order(r.orders[0]),
            r.errors.v2,
            fmt_order(r.orders[1]),
            r.errors.eta,
            fmt_order(r.orders[2])
        );
    }
    emit(&s)
}

fn wellbalance(case: &str, steps: usize) -> Result<(), Error> {
    let r = drivers::wellbalance(&builtin(case)?, steps)?;
    println!(
        "steps = {} |eta - eta0| = {:.3e} |q| = {:.3e} q identically zero: {}",
        r.steps, r.eta_drift, r.q_norm, r.q_exactly_zero
    );
    Ok(())
}

fn riemann_compare(case: &str, t: Option<f64>, out: Option<&Path>) -> Result<(), Error> {
    let spec = builtin(case)?;
    let (_, rows) = drivers::riemann_compare(&spec, t.unwrap_or(spec.end_time))?;
    match out {
        Some(p) => {
            io::write_cut_csv(&rows, p)?;
            eprintln!("wrote {} rows to {}", rows.len(), p.display());
        }
        None => emit(&io::cut_csv_string(&rows))?,
    }
    Ok(())
}
