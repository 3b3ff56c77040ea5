//! Time loop: transport, projection and correction, with gauge sampling.

use std::sync::Arc;

use crate::error::StepError;
use crate::geom::Vec2;
use crate::mesh::{BoundaryTag, Mesh};
use crate::projection::{project, BoundaryTargets, FeSpace};
use crate::state::{velocity_from_momentum, NumericsConfig, PhysicalParams, State};
use crate::transport::transport_step;

/// Prescribed `(eta, q)` at a point and time, used by inflow and exact boundaries.
pub type BoundaryFn = Arc<dyn Fn(Vec2, f64) -> (f64, Vec2) + Send + Sync>;

/// Time step from the convective wave speed `2|v|` on every dual cell.
pub fn compute_dt(mesh: &Mesh, state: &State, cfg: &NumericsConfig) -> f64 {
    let mut dt = cfg.dt_max;
    for (i, cell) in mesh.dual.cells.iter().enumerate() {
        let h = state.h_dual(mesh, i);
        let lambda = 2.0 * velocity_from_momentum(state.q[i], h, cfg.eps_vel).norm();
        if lambda >= 1e-14 {
            dt = dt.min(cfg.cfl * cell.incircle / lambda);
        }
    }
    dt
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub dt: f64,
    pub cg_iterations: usize,
    pub cg_residual: f64,
    pub first_order_faces: usize,
    /// Largest convective speed `2|v|` over dual cells at the start of the step.
    pub max_lambda: f64,
    /// Dual cells with depth above the dry threshold at the end of the step.
    pub wet_cells: usize,
    /// Vertices whose free surface was lifted back to the bottom.
    pub clamped_vertices: usize,
    /// Water volume added by that lift (lumped-mass weighted).
    pub volume_added: f64,
}

/// Free-surface time series at fixed probe points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaugeSeries {
    pub names: Vec<String>,
    /// Primal vertex sampled by each gauge.
    pub vertices: Vec<usize>,
    pub times: Vec<f64>,
    /// `values[s][g]`: sample `s` of gauge `g`.
    pub values: Vec<Vec<f64>>,
}

impl GaugeSeries {
    pub fn new(mesh: &Mesh, gauges: &[(String, [f64; 2])]) -> Self {
        GaugeSeries {
            names: gauges.iter().map(|g| g.0.clone()).collect(),
            vertices: gauges.iter().map(|g| mesh.nearest_vertex(g.1)).collect(),
            times: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn record(&mut self, state: &State) {
        if self.names.is_empty() {
            return;
        }
        self.times.push(state.t);
        self.values
            .push(self.vertices.iter().map(|&v| state.eta[v]).collect());
    }

    /// Series of gauge `g`.
    pub fn column(&self, g: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[g]).collect()
    }
}

/// Aggregate statistics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    pub total_cg_iterations: usize,
    pub max_cg_iterations: usize,
    /// Smallest vertex depth seen after any step.
    pub min_depth: f64,
    pub volume_added: f64,
}

impl Default for RunSummary {
    fn default() -> Self {
        RunSummary {
            steps: 0,
            min_dt: f64::INFINITY,
            max_dt: 0.0,
            total_cg_iterations: 0,
            max_cg_iterations: 0,
            min_depth: f64::INFINITY,
            volume_added: 0.0,
        }
    }
}

impl RunSummary {
    fn add(&mut self, d: &StepDiagnostics, min_depth: f64) {
        self.steps += 1;
        self.min_dt = self.min_dt.min(d.dt);
        self.max_dt = self.max_dt.max(d.dt);
        self.total_cg_iterations += d.cg_iterations;
        self.max_cg_iterations = self.max_cg_iterations.max(d.cg_iterations);
        self.min_depth = self.min_depth.min(min_depth);
        self.volume_added += d.volume_added;
    }
}

pub struct Solver {
    pub mesh: Mesh,
    pub params: PhysicalParams,
    pub cfg: NumericsConfig,
    pub state: State,
    pub gauges: GaugeSeries,
    pub summary: RunSummary,
    space: FeSpace,
    lumped: Vec<f64>,
    boundary: Option<BoundaryFn>,
}

impl Solver {
    pub fn new(
        mesh: Mesh,
        state: State,
        params: PhysicalParams,
        cfg: NumericsConfig,
        boundary: Option<BoundaryFn>,
    ) -> Self {
        let space = FeSpace::new(&mesh);
        Solver {
            space,
            lumped: mesh.primal.lumped_mass(),
            mesh,
            params,
            cfg,
            state,
            gauges: GaugeSeries::default(),
            summary: RunSummary::default(),
            boundary,
        }
    }

    pub fn with_gauges(mut self, gauges: &[(String, [f64; 2])]) -> Self {
        self.gauges = GaugeSeries::new(&self.mesh, gauges);
        self.gauges.record(&self.state);
        self
    }

    /// Time step the next call to [`Solver::step`] would use without truncation.
    pub fn next_dt(&self) -> f64 {
        self.cfg
            .fixed_dt
            .unwrap_or_else(|| compute_dt(&self.mesh, &self.state, &self.cfg))
    }

    fn prescribed(&self, p: Vec2, t: f64, cell: usize) -> Result<(f64, Vec2), StepError> {
        let f = self
            .boundary
            .as_ref()
            .ok_or(StepError::MissingBoundaryData(cell))?;
        Ok(f(p, t))
    }

    fn targets(&self, dt: f64) -> Result<BoundaryTargets, StepError> {
        let mesh = &self.mesh;
        let t = self.state.t;
        let mut targets = BoundaryTargets::none(mesh);
        let mut exact_vertices = Vec::new();
        for (b, bf) in mesh.dual.boundary_faces.iter().enumerate() {
            if !bf.tag.is_prescribed() {
                continue;
            }
            let node = mesh.dual.cells[bf.cell].node;
            targets.q_new[b] = Some(self.prescribed(node, t + dt, bf.cell)?.1);
            targets.q_theta[b] = Some(self.prescribed(node, t + self.cfg.theta * dt, bf.cell)?.1);
            if bf.tag == BoundaryTag::Exact {
                exact_vertices.extend(mesh.primal.edges[bf.cell].vertices);
            }
        }
        exact_vertices.sort_unstable();
        exact_vertices.dedup();
        for v in exact_vertices {
            let p = mesh.primal.vertices[v];
            targets.eta_new.push((v, self.prescribed(p, t + dt, v)?.0));
        }
        Ok(targets)
    }

    /// Positivity fix after the projection: lift free-surface values below
    /// the bottom and stop momentum in dual cells that fell dry.
    fn dry_fix(&self, eta: &mut [f64], q: &mut [Vec2]) -> (usize, f64) {
        let b = &self.state.b_vertex;
        let mut clamped = 0;
        let mut added = 0.0;
        for (v, e) in eta.iter_mut().enumerate() {
            if *e < b[v] {
                added += self.lumped[v] * (b[v] - *e);
                *e = b[v];
                clamped += 1;
            }
        }
        for (i, edge) in self.mesh.primal.edges.iter().enumerate() {
            let [a, c] = edge.vertices;
            if 0.5 * (eta[a] + eta[c]) - self.state.b_dual[i] < self.cfg.h_dry {
                q[i] = Vec2::ZERO;
            }
        }
        (clamped, added)
    }

    /// Advance one step of size `dt`. On error the state is left untouched.
    pub fn step(&mut self, dt: f64) -> Result<StepDiagnostics, StepError> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(StepError::InvalidTimeStep(dt));
        }
        let mesh = &self.mesh;
        let state = &self.state;
        let mut ghosts = vec![None; mesh.dual.boundary_faces.len()];
        for (b, bf) in mesh.dual.boundary_faces.iter().enumerate() {
            if bf.tag.is_prescribed() {
                let node = mesh.dual.cells[bf.cell].node;
                let (eta, q) = self.prescribed(node, state.t, bf.cell)?;
                ghosts[b] = Some(((eta - state.b_dual[bf.cell]).max(0.0), q));
            }
        }
        let max_lambda = (0..mesh.dual.num_cells())
            .map(|i| 2.0 * velocity_from_momentum(state.q[i], state.h_dual(mesh, i), self.cfg.eps_vel).norm())
            .fold(0.0, f64::max);
        let (q_star, tstats) = transport_step(mesh, state, dt, &self.cfg, &ghosts)?;
        let targets = self.targets(dt)?;
        let res = project(mesh, &self.space, state, &q_star, dt, &self.params, &self.cfg, &targets)?;
        if res.eta.iter().any(|v| !v.is_finite()) {
            return Err(StepError::NonFiniteState("free surface"));
        }
        if res.q.iter().any(|v| !v.is_finite()) {
            return Err(StepError::NonFiniteState("momentum"));
        }
        let mut eta = res.eta;
        let mut q = res.q;
        let (clamped_vertices, volume_added) = self.dry_fix(&mut eta, &mut q);
        self.state.eta = eta;
        self.state.q = q;
        self.state.t += dt;
        let h_dry = self.cfg.h_dry;
        let wet_cells = (0..self.mesh.dual.num_cells())
            .filter(|&i| self.state.h_dual(&self.mesh, i) > h_dry)
            .count();
        let min_depth = self
            .state
            .eta
            .iter()
            .zip(&self.state.b_vertex)
            .map(|(e, b)| e - b)
            .fold(f64::INFINITY, f64::min);
        let diag = StepDiagnostics {
            dt,
            cg_iterations: res.cg.iterations,
            cg_residual: res.cg.residual,
            first_order_faces: tstats.first_order_faces,
            max_lambda,
            wet_cells,
            clamped_vertices,
            volume_added,
        };
        self.summary.add(&diag, min_depth);
        self.gauges.record(&self.state);
        Ok(diag)
    }

    /// Advance to `t_end`, truncating the last step to land on it exactly.
    pub fn run_until(
        &mut self,
        t_end: f64,
        mut on_step: impl FnMut(&Solver, &StepDiagnostics),
    ) -> Result<(), crate::Error> {
        while self.state.t < t_end {
            let remaining = t_end - self.state.t;
            let mut dt = self.next_dt();
            // Avoid a sliver step from rounding when the last step nearly fits.
            if dt >= remaining * (1.0 - 1e-10) {
                dt = remaining;
            }
            let d = self.step(dt).map_err(|source| crate::Error::Step {
                step: self.summary.steps + 1,
                time: self.state.t,
                source,
            })?;
            if dt == remaining {
                self.state.t = t_end;
            }
            on_step(self, &d);
        }
        Ok(())
    }

    /// Take exactly `n` steps with the current time step rule.
    pub fn run_steps(&mut self, n: usize) -> Result<(), crate::Error> {
        for _ in 0..n {
            let dt = self.next_dt();
            self.step(dt).map_err(|source| crate::Error::Step {
                step: self.summary.steps + 1,
                time: self.state.t,
                source,
            })?;
        }
        Ok(())
    }
}
