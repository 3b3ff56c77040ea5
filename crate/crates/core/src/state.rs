//! Discrete unknowns and the pointwise physics shared by all stages.

use std::fmt;
use std::str::FromStr;

use crate::geom::Vec2;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub g: f64,
    /// Manning roughness; zero disables friction.
    pub n_manning: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            g: 9.81,
            n_manning: 0.0,
        }
    }
}

/// Which weak problem the projection stage solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Backward Euler in the free surface (requires theta = 1).
    Wp1,
    /// Theta method.
    #[default]
    Wp2,
    /// Pressure correction: solve for the free-surface increment.
    Wp3,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Wp1 => "wp1",
            Scheme::Wp2 => "wp2",
            Scheme::Wp3 => "wp3",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wp1" => Ok(Scheme::Wp1),
            "wp2" => Ok(Scheme::Wp2),
            "wp3" => Ok(Scheme::Wp3),
            _ => Err(format!("unknown scheme `{s}` (expected wp1, wp2 or wp3)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    pub cfl: f64,
    pub theta: f64,
    /// Extra Rusanov dissipation speed in the transport flux.
    pub c_alpha: f64,
    pub fe_rusanov: bool,
    pub use_lader: bool,
    pub eps_vel: f64,
    pub h_dry: f64,
    pub dt_max: f64,
    /// Fixed time step; overrides the CFL rule when set.
    pub fixed_dt: Option<f64>,
    pub cg_tol: f64,
    pub cg_maxiter: usize,
    pub scheme: Scheme,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            cfl: 0.5,
            theta: 1.0,
            c_alpha: 0.0,
            fe_rusanov: false,
            use_lader: true,
            eps_vel: 1e-7,
            h_dry: 1e-6,
            dt_max: 1.0,
            fixed_dt: None,
            cg_tol: 1e-12,
            cg_maxiter: 5000,
            scheme: Scheme::Wp2,
        }
    }
}

impl NumericsConfig {
    /// Check ranges; returns the name of the offending field and why.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("cfl", self.cfl)?;
        if self.cfl > 1.0 {
            return Err(("cfl", format!("must not exceed 1, got {}", self.cfl)));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(("theta", format!("must lie in [0.5, 1], got {}", self.theta)));
        }
        if !(self.c_alpha >= 0.0 && self.c_alpha.is_finite()) {
            return Err(("c_alpha", format!("must be non-negative, got {}", self.c_alpha)));
        }
        positive("eps_vel", self.eps_vel)?;
        positive("h_dry", self.h_dry)?;
        positive("dt_max", self.dt_max)?;
        positive("cg_tol", self.cg_tol)?;
        if let Some(dt) = self.fixed_dt {
            positive("fixed_dt", dt)?;
        }
        if self.cg_maxiter == 0 {
            return Err(("cg_maxiter", "must be at least 1".into()));
        }
        if self.scheme != Scheme::Wp2 && self.theta != 1.0 {
            return Err((
                "theta",
                format!("scheme {} requires theta = 1, got {}", self.scheme, self.theta),
            ));
        }
        Ok(())
    }
}

/// Free surface on primal vertices, momentum on dual cells.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub eta: Vec<f64>,
    pub q: Vec<Vec2>,
    pub b_vertex: Vec<f64>,
    pub b_dual: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn new(mesh: &Mesh, eta: Vec<f64>, q: Vec<Vec2>, b_vertex: Vec<f64>) -> Self {
        assert_eq!(eta.len(), mesh.primal.num_vertices());
        assert_eq!(b_vertex.len(), mesh.primal.num_vertices());
        assert_eq!(q.len(), mesh.dual.num_cells());
        let b_dual = mesh
            .primal
            .edges
            .iter()
            .map(|e| 0.5 * (b_vertex[e.vertices[0]] + b_vertex[e.vertices[1]]))
            .collect();
        State {
            eta,
            q,
            b_vertex,
            b_dual,
            t: 0.0,
        }
    }

    /// Sample fields: `b` and `eta` at vertices, `q` at dual nodes.
    pub fn from_fields(
        mesh: &Mesh,
        b: impl Fn(Vec2) -> f64,
        eta: impl Fn(Vec2) -> f64,
        q: impl Fn(Vec2) -> Vec2,
    ) -> Self {
        let verts = &mesh.primal.vertices;
        let b_vertex: Vec<f64> = verts.iter().map(|&p| b(p)).collect();
        let eta = verts.iter().map(|&p| eta(p)).collect();
        let q = mesh.dual.cells.iter().map(|c| q(c.node)).collect();
        State::new(mesh, eta, q, b_vertex)
    }

    /// Depth at vertex `v`, clamped at zero.
    pub fn h_vertex(&self, v: usize) -> f64 {
        (self.eta[v] - self.b_vertex[v]).max(0.0)
    }

    /// Depth at dual cell `i`: mean endpoint free surface minus the cell bottom.
    pub fn h_dual(&self, mesh: &Mesh, i: usize) -> f64 {
        let [a, b] = mesh.primal.edges[i].vertices;
        (0.5 * (self.eta[a] + self.eta[b]) - self.b_dual[i]).max(0.0)
    }

    pub fn h_dual_all(&self, mesh: &Mesh) -> Vec<f64> {
        (0..mesh.dual.num_cells()).map(|i| self.h_dual(mesh, i)).collect()
    }

    /// Mean depth of element `k`.
    pub fn h_element(&self, mesh: &Mesh, k: usize) -> f64 {
        let t = mesh.primal.triangles[k];
        element_depth(t.map(|v| self.eta[v]), t.map(|v| self.b_vertex[v]))
    }

    pub fn is_finite(&self) -> bool {
        self.eta.iter().all(|v| v.is_finite()) && self.q.iter().all(|v| v.is_finite())
    }

    /// Check sizes, finiteness and depth sign; returns the first violation.
    pub fn validate(&self, mesh: &Mesh) -> Result<(), String> {
        let nv = mesh.primal.num_vertices();
        let nc = mesh.dual.num_cells();
        if self.eta.len() != nv || self.b_vertex.len() != nv {
            return Err(format!("expected {nv} vertex values"));
        }
        if self.q.len() != nc || self.b_dual.len() != nc {
            return Err(format!("expected {nc} dual values"));
        }
        if !self.is_finite() || self.b_vertex.iter().any(|v| !v.is_finite()) {
            return Err("non-finite value in state".into());
        }
        if let Some(v) = (0..nv).find(|&v| self.eta[v] - self.b_vertex[v] < -1e-12) {
            return Err(format!(
                "negative depth {} at vertex {v}",
                self.eta[v] - self.b_vertex[v]
            ));
        }
        Ok(())
    }
}

/// Mean depth over a triangle, clamped at zero.
pub fn element_depth(eta: [f64; 3], b: [f64; 3]) -> f64 {
    let h = ((eta[0] - b[0]) + (eta[1] - b[1]) + (eta[2] - b[2])) / 3.0;
    h.max(0.0)
}

/// Regularized velocity `h q / (h^2 + eps)`; vanishes on dry cells.
#[inline]
pub fn velocity_from_momentum(q: Vec2, h: f64, eps: f64) -> Vec2 {
    q * (h / (h * h + eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Full,
    Convective,
    Pressure,
}

/// Wave speeds in direction `n` (unit vector), ascending for the full system.
pub fn eigenvalues(h: f64, v: Vec2, n: Vec2, g: f64, which: Subsystem) -> [f64; 4] {
    let un = v.dot(n);
    let c = (g * h.max(0.0)).sqrt();
    match which {
        Subsystem::Full => [un - c, 0.0, un, un + c],
        Subsystem::Convective => [0.0, 0.0, un, 2.0 * un],
        Subsystem::Pressure => [-c, 0.0, 0.0, c],
    }
}

/// Manning friction coefficient `g n^2 |v| / h^(4/3)` with the depth floored at `h_dry`.
pub fn friction_gamma(h: f64, v: Vec2, params: &PhysicalParams, h_dry: f64) -> f64 {
    if params.n_manning == 0.0 {
        return 0.0;
    }
    let n2 = params.n_manning * params.n_manning;
    params.g * n2 * v.norm() / h.max(h_dry).powf(4.0 / 3.0)
}
