//! Studies built on top of single runs: convergence tables, lake-at-rest
//! drift, Riemann-problem cuts.

use crate::cases::{CaseKind, CaseSpec, MeshSpec};
use crate::error::Error;
use crate::geom::Vec2;
use crate::norms::{cut_along_x, l2_error_dual, l2_error_vertex, observed_order, state_errors, FieldErrors};
use crate::solver::Solver;

/// Runs a case to its end time, calling `on_step` after every step.
pub fn run_case(spec: &CaseSpec, on_step: impl FnMut(&Solver, &crate::solver::StepDiagnostics)) -> Result<Solver, Error> {
    let mut solver = spec.solver()?;
    solver.run_until(spec.end_time, on_step)?;
    Ok(solver)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub dt: Option<f64>,
    pub errors: FieldErrors,
    /// Orders against the previous row; `None` on the first row or when undefined.
    pub orders: [Option<f64>; 3],
}

/// Runs `spec` on `n x n` grids and tabulates L2 errors against its exact
/// solution at the end time.
pub fn convergence(spec: &CaseSpec, levels: &[usize]) -> Result<Vec<ConvergenceRow>, Error> {
    if spec.exact().is_none() {
        return Err(Error::Invalid(format!("case `{}` has no exact solution", spec.name)));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for &n in levels {
        let refined = spec.refined(n)?;
        let solver = run_case(&refined, |_, _| {})?;
        let exact = refined.exact().expect("checked above");
        let t = solver.state.t;
        let errors = state_errors(&solver.mesh, &solver.state, refined.numerics.eps_vel, |p| exact(p, t));
        let orders = match rows.last() {
            Some(prev) => [
                observed_order(prev.errors.v1, errors.v1),
                observed_order(prev.errors.v2, errors.v2),
                observed_order(prev.errors.eta, errors.eta),
            ],
            None => [None; 3],
        };
        rows.push(ConvergenceRow {
            n,
            dt: refined.numerics.fixed_dt,
            errors,
            orders,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellBalanceReport {
    pub steps: usize,
    /// L2 norm of `eta - eta_0` over vertices.
    pub eta_drift: f64,
    /// L2 norm of `q` over dual cells.
    pub q_norm: f64,
    pub q_exactly_zero: bool,
}

/// Takes `steps` steps from a lake at rest and measures the drift.
pub fn wellbalance(spec: &CaseSpec, steps: usize) -> Result<WellBalanceReport, Error> {
    let at_rest = matches!(
        spec.kind,
        CaseKind::LeVequeBump { eps } | CaseKind::CosineBump { eps } if eps == 0.0
    );
    if !at_rest {
        return Err(Error::Invalid(format!(
            "case `{}` does not start from a lake at rest",
            spec.name
        )));
    }
    let mut solver = spec.solver()?;
    let eta0 = solver.state.eta.clone();
    solver.run_steps(steps)?;
    let mesh = &solver.mesh;
    let diff: Vec<f64> = solver.state.eta.iter().zip(&eta0).map(|(a, b)| a - b).collect();
    let qn: Vec<f64> = solver.state.q.iter().map(|q| q.norm()).collect();
    Ok(WellBalanceReport {
        steps,
        eta_drift: l2_error_vertex(mesh, &diff, |_| 0.0),
        q_norm: l2_error_dual(mesh, &qn, |_| 0.0),
        q_exactly_zero: solver.state.q.iter().all(|q| *q == Vec2::ZERO),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutRow {
    pub x: f64,
    pub h: f64,
    pub eta: f64,
    pub u: f64,
    pub h_exact: Option<f64>,
    pub u_exact: Option<f64>,
}

/// Runs a Riemann case to `t_end` and returns the 1D cut along the
/// mid-line of the strip with exact values where they exist.
pub fn riemann_compare(spec: &CaseSpec, t_end: f64) -> Result<(Solver, Vec<CutRow>), Error> {
    let (y_mid, half) = match (&spec.kind, &spec.mesh) {
        (CaseKind::Riemann { .. }, MeshSpec::Structured { bounds, ny, .. }) => {
            (0.5 * (bounds[2] + bounds[3]), 0.5 * (bounds[3] - bounds[2]) / *ny as f64)
        }
        _ => {
            return Err(Error::Invalid(format!(
                "case `{}` is not a Riemann problem on a structured strip",
                spec.name
            )))
        }
    };
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Invalid(format!("invalid end time {t_end}")));
    }
    let mut solver = spec.solver()?;
    solver.run_until(t_end, |_, _| {})?;
    let exact = spec.exact();
    let t = solver.state.t;
    let rows = cut_along_x(&solver.mesh, &solver.state, y_mid, half * (1.0 + 1e-9), spec.numerics.eps_vel)
        .into_iter()
        .map(|c| {
            let node = solver.mesh.dual.cells[c.cell].node;
            let ex = exact.as_ref().map(|f| f(node, t));
            CutRow {
                x: c.x,
                h: c.h,
                eta: c.eta,
                u: c.u,
                h_exact: ex.map(|(eta, _)| eta - spec.bottom(node)),
                u_exact: ex.map(|(_, v)| v.x),
            }
        })
        .collect();
    Ok((solver, rows))
}
