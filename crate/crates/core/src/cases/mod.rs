//! Benchmark catalog: geometry, initial and boundary data, reference solutions.

mod exact;
mod meshes;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

pub use exact::{cylinder_potential_exact, exact_riemann_flat, vortex_exact, RiemannError, RiemannSolution, StepRiemannSolution, DRY_DEPTH};
pub use meshes::{cylinder_mesh, dambreak_mesh, half_annulus_mesh};

use crate::error::{ConfigError, Error};
use crate::geom::Vec2;
use crate::mesh::{generate_structured, read_mesh, Mesh, MeshData, Pattern, Side, Sides};
use crate::solver::{BoundaryFn, Solver};
use crate::state::{NumericsConfig, PhysicalParams, Scheme, State};

/// Reference solution: `(eta, v)` at a point and time.
pub type ExactFn = Arc<dyn Fn(Vec2, f64) -> (f64, Vec2) + Send + Sync>;

/// Physical setup of a case; each variant owns its scalar parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseKind {
    /// Steady vortex on background depth `h0`.
    Vortex { h0: f64 },
    /// Lake at rest over a Gaussian bump, optionally with a free-surface
    /// perturbation of height `eps` in the strip -0.95 <= x <= -0.85.
    LeVequeBump { eps: f64 },
    /// Lake at rest over a cosine bump with a perturbation `eps` on 1.1 <= x <= 1.2.
    CosineBump { eps: f64 },
    /// Planar Riemann problem with a bottom step at `x_c`.
    Riemann {
        eta_l: f64,
        eta_r: f64,
        u_l: f64,
        u_r: f64,
        b_l: f64,
        b_r: f64,
        x_c: f64,
    },
    /// Circular dam over a raised disk of radius 1.
    CircularDambreak,
    /// Potential flow around a cylinder at the origin.
    Cylinder { v_m: f64, eta0: f64, r_c: f64 },
    /// Supercritical free stream of depth `h` and Froude number `froude`.
    BluntBody { h: f64, froude: f64 },
    /// Tank at depth `h0` released onto a dry plate.
    Dambreak { h0: f64 },
}

impl CaseKind {
    pub const NAMES: [&'static str; 8] = [
        "vortex",
        "leveque",
        "cosine-bump",
        "riemann",
        "circular-dambreak",
        "cylinder",
        "blunt-body",
        "dambreak",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseKind::Vortex { .. } => "vortex",
            CaseKind::LeVequeBump { .. } => "leveque",
            CaseKind::CosineBump { .. } => "cosine-bump",
            CaseKind::Riemann { .. } => "riemann",
            CaseKind::CircularDambreak => "circular-dambreak",
            CaseKind::Cylinder { .. } => "cylinder",
            CaseKind::BluntBody { .. } => "blunt-body",
            CaseKind::Dambreak { .. } => "dambreak",
        }
    }

    /// Default parameters for a kind name.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "vortex" => CaseKind::Vortex { h0: 1.0 },
            "leveque" => CaseKind::LeVequeBump { eps: 0.0 },
            "cosine-bump" => CaseKind::CosineBump { eps: 1e-3 },
            "riemann" => CaseKind::Riemann {
                eta_l: 1.0,
                eta_r: 2.0,
                u_l: 0.0,
                u_r: 0.0,
                b_l: 0.0,
                b_r: 0.0,
                x_c: 0.0,
            },
            "circular-dambreak" => CaseKind::CircularDambreak,
            "cylinder" => CaseKind::Cylinder {
                v_m: 1e-2,
                eta0: 1.0,
                r_c: 1.0,
            },
            "blunt-body" => CaseKind::BluntBody { h: 1.0, froude: 3.0 },
            "dambreak" => CaseKind::Dambreak { h0: 0.6 },
            _ => return None,
        })
    }

    /// Named scalar parameters, in a stable order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            CaseKind::Vortex { h0 } => vec![("h0", h0)],
            CaseKind::LeVequeBump { eps } | CaseKind::CosineBump { eps } => vec![("eps", eps)],
            CaseKind::Riemann {
                eta_l,
                eta_r,
                u_l,
                u_r,
                b_l,
                b_r,
                x_c,
            } => vec![
                ("eta_l", eta_l),
                ("eta_r", eta_r),
                ("u_l", u_l),
                ("u_r", u_r),
                ("b_l", b_l),
                ("b_r", b_r),
                ("x_c", x_c),
            ],
            CaseKind::CircularDambreak => vec![],
            CaseKind::Cylinder { v_m, eta0, r_c } => vec![("v_m", v_m), ("eta0", eta0), ("r_c", r_c)],
            CaseKind::BluntBody { h, froude } => vec![("h", h), ("froude", froude)],
            CaseKind::Dambreak { h0 } => vec![("h0", h0)],
        }
    }

    /// Sets a named parameter; returns false if this kind has no such key.
    pub fn set_param(&mut self, key: &str, value: f64) -> bool {
        let slot = match (self, key) {
            (CaseKind::Vortex { h0 }, "h0") | (CaseKind::Dambreak { h0 }, "h0") => h0,
            (CaseKind::LeVequeBump { eps }, "eps") | (CaseKind::CosineBump { eps }, "eps") => eps,
            (CaseKind::Riemann { eta_l, .. }, "eta_l") => eta_l,
            (CaseKind::Riemann { eta_r, .. }, "eta_r") => eta_r,
            (CaseKind::Riemann { u_l, .. }, "u_l") => u_l,
            (CaseKind::Riemann { u_r, .. }, "u_r") => u_r,
            (CaseKind::Riemann { b_l, .. }, "b_l") => b_l,
            (CaseKind::Riemann { b_r, .. }, "b_r") => b_r,
            (CaseKind::Riemann { x_c, .. }, "x_c") => x_c,
            (CaseKind::Cylinder { v_m, .. }, "v_m") => v_m,
            (CaseKind::Cylinder { eta0, .. }, "eta0") => eta0,
            (CaseKind::Cylinder { r_c, .. }, "r_c") => r_c,
            (CaseKind::BluntBody { h, .. }, "h") => h,
            (CaseKind::BluntBody { froude, .. }, "froude") => froude,
            _ => return false,
        };
        *slot = value;
        true
    }
}

/// Where the mesh comes from. Exactly one source per case.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSpec {
    Structured {
        bounds: [f64; 4],
        nx: usize,
        ny: usize,
        pattern: Pattern,
        sides: Sides,
    },
    File(PathBuf),
    Cylinder {
        r_c: f64,
        half_width: f64,
        n_theta: usize,
        n_r: usize,
        stretch: f64,
    },
    HalfAnnulus {
        center: [f64; 2],
        r_in: f64,
        r_out: f64,
        n_theta: usize,
        n_r: usize,
    },
    Dambreak {
        cells_per_meter: usize,
        gate_half_width: f64,
    },
}

impl MeshSpec {
    pub const TYPES: [&'static str; 5] = ["structured", "file", "cylinder", "half-annulus", "dambreak"];

    pub fn type_name(&self) -> &'static str {
        match self {
            MeshSpec::Structured { .. } => "structured",
            MeshSpec::File(_) => "file",
            MeshSpec::Cylinder { .. } => "cylinder",
            MeshSpec::HalfAnnulus { .. } => "half-annulus",
            MeshSpec::Dambreak { .. } => "dambreak",
        }
    }

    /// Default spec for a mesh type name.
    pub fn from_type(name: &str) -> Option<Self> {
        Some(match name {
            "structured" => MeshSpec::Structured {
                bounds: [0.0, 1.0, 0.0, 1.0],
                nx: 16,
                ny: 16,
                pattern: Pattern::Uniform,
                sides: Sides::all(Side::Wall),
            },
            "file" => MeshSpec::File(PathBuf::new()),
            "cylinder" => MeshSpec::Cylinder {
                r_c: 1.0,
                half_width: 8.0,
                n_theta: 96,
                n_r: 40,
                stretch: 3.0,
            },
            "half-annulus" => MeshSpec::HalfAnnulus {
                center: [0.5, 0.0],
                r_in: 0.5,
                r_out: 2.0,
                n_theta: 80,
                n_r: 40,
            },
            "dambreak" => MeshSpec::Dambreak {
                cells_per_meter: 30,
                gate_half_width: 0.2,
            },
            _ => return None,
        })
    }

    pub fn build_data(&self) -> Result<MeshData, Error> {
        Ok(match self {
            MeshSpec::Structured {
                bounds,
                nx,
                ny,
                pattern,
                sides,
            } => generate_structured(*bounds, *nx, *ny, *pattern, *sides)?,
            MeshSpec::File(path) => read_mesh(path)?,
            MeshSpec::Cylinder {
                r_c,
                half_width,
                n_theta,
                n_r,
                stretch,
            } => cylinder_mesh(*r_c, *half_width, *n_theta, *n_r, *stretch)?,
            MeshSpec::HalfAnnulus {
                center,
                r_in,
                r_out,
                n_theta,
                n_r,
            } => half_annulus_mesh(*center, *r_in, *r_out, *n_theta, *n_r)?,
            MeshSpec::Dambreak {
                cells_per_meter,
                gate_half_width,
            } => dambreak_mesh(*cells_per_meter, *gate_half_width)?,
        })
    }

    pub fn build(&self) -> Result<Mesh, Error> {
        Ok(Mesh::new(self.build_data()?)?)
    }
}

/// A fully specified run: physics, mesh, numerics and end time.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub name: String,
    pub kind: CaseKind,
    pub mesh: MeshSpec,
    pub params: PhysicalParams,
    pub numerics: NumericsConfig,
    pub end_time: f64,
    pub gauges: Vec<(String, [f64; 2])>,
}

fn range_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config(ConfigError::Range {
        key: key.to_string(),
        msg: msg.into(),
    })
}

fn smooth_step_bump(x: f64) -> f64 {
    if (1.4..=1.6).contains(&x) {
        0.25 * ((10.0 * PI * (x - 1.5)).cos() + 1.0)
    } else {
        0.0
    }
}

impl CaseSpec {
    pub fn new(name: &str, kind: CaseKind, mesh: MeshSpec, numerics: NumericsConfig, end_time: f64) -> Self {
        CaseSpec {
            name: name.to_string(),
            kind,
            mesh,
            params: PhysicalParams::default(),
            numerics,
            end_time,
            gauges: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.numerics
            .validate()
            .map_err(|(key, msg)| range_err(key, msg))?;
        if !(self.params.g > 0.0 && self.params.g.is_finite()) {
            return Err(range_err("g", format!("must be positive, got {}", self.params.g)));
        }
        if !(self.params.n_manning >= 0.0 && self.params.n_manning.is_finite()) {
            return Err(range_err("n_manning", "must be non-negative"));
        }
        if !(self.end_time >= 0.0 && self.end_time.is_finite()) {
            return Err(range_err("end_time", format!("must be non-negative, got {}", self.end_time)));
        }
        for (key, v) in self.kind.params() {
            if !v.is_finite() {
                return Err(range_err(key, "must be finite"));
            }
        }
        match &self.kind {
            CaseKind::Vortex { h0 } if *h0 <= 1.0 / (2.0 * self.params.g) => {
                Err(range_err("h0", "vortex depth would become non-positive"))
            }
            CaseKind::Riemann { eta_l, eta_r, b_l, b_r, .. } if eta_l < b_l || eta_r < b_r => {
                Err(range_err("eta_l", "free surface below the bottom"))
            }
            CaseKind::Cylinder { r_c, .. } if *r_c <= 0.0 => Err(range_err("r_c", "must be positive")),
            CaseKind::BluntBody { h, .. } if *h <= 0.0 => Err(range_err("h", "must be positive")),
            CaseKind::Dambreak { h0 } if *h0 <= 0.0 => Err(range_err("h0", "must be positive")),
            _ => Ok(()),
        }
    }

    /// Bottom elevation.
    pub fn bottom(&self, p: Vec2) -> f64 {
        match self.kind {
            CaseKind::LeVequeBump { .. } => 0.8 * (-5.0 * (p.x + 0.1).powi(2) - 50.0 * p.y * p.y).exp(),
            CaseKind::CosineBump { .. } => smooth_step_bump(p.x),
            CaseKind::Riemann { b_l, b_r, x_c, .. } => {
                if p.x <= x_c {
                    b_l
                } else {
                    b_r
                }
            }
            CaseKind::CircularDambreak
                if p.norm() <= 1.0 => {
                    0.2
                }
            _ => 0.0,
        }
    }

    /// Exact `(h, u)` at `(x, t)` for flat-bottom problems and for step
    /// problems with a stationary contact on the step.
    fn riemann_reference(&self) -> Option<Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>> {
        let CaseKind::Riemann {
            eta_l,
            eta_r,
            u_l,
            u_r,
            b_l,
            b_r,
            x_c,
        } = self.kind
        else {
            return None;
        };
        let g = self.params.g;
        let (h_l, h_r) = (eta_l - b_l, eta_r - b_r);
        if b_l == b_r {
            let s = RiemannSolution::new(h_l, u_l, h_r, u_r, g).ok()?;
            Some(Arc::new(move |x, t| s.at(x, t, x_c)))
        } else {
            let s = StepRiemannSolution::new(h_l, u_l, h_r, u_r, b_r - b_l, g)?;
            Some(Arc::new(move |x, t| s.at(x, t, x_c)))
        }
    }

    /// Reference solution where one is known in closed form.
    pub fn exact(&self) -> Option<ExactFn> {
        let g = self.params.g;
        match self.kind {
            CaseKind::Vortex { h0 } => Some(Arc::new(move |p, _t| {
                let (v, h) = vortex_exact(p, h0, g);
                (h, v)
            })),
            CaseKind::LeVequeBump { eps: 0.0 } | CaseKind::CosineBump { eps: 0.0 } => {
                Some(Arc::new(|_p, _t| (1.0, Vec2::ZERO)))
            }
            CaseKind::Riemann { .. } => {
                let s = self.riemann_reference()?;
                let spec = self.clone();
                Some(Arc::new(move |p, t| {
                    let (h, u) = s(p.x, t);
                    (h + spec.bottom(p), Vec2::new(u, 0.0))
                }))
            }
            CaseKind::Cylinder { v_m, eta0, r_c } => Some(Arc::new(move |p, _t| {
                let (v, eta) = cylinder_potential_exact(p, v_m, r_c, eta0, g);
                (eta, v)
            })),
            _ => None,
        }
    }

    /// Data for inflow and exact boundaries: `(eta, q)` at a point and time.
    pub fn boundary(&self) -> Option<BoundaryFn> {
        let g = self.params.g;
        match self.kind {
            CaseKind::LeVequeBump { .. } => Some(Arc::new(|_p, _t| (1.0, Vec2::ZERO))),
            CaseKind::Riemann {
                eta_l,
                eta_r,
                u_l,
                u_r,
                b_l,
                b_r,
                x_c,
            } => {
                let spec = self.clone();
                match self.riemann_reference() {
                    Some(s) => Some(Arc::new(move |p, t| {
                        let (h, u) = s(p.x, t);
                        (h + spec.bottom(p), Vec2::new(h * u, 0.0))
                    })),
                    // Without a reference solution the far field keeps its
                    // initial state until a wave reaches the boundary.
                    None => Some(Arc::new(move |p, _t| {
                        let (eta, u, b) = if p.x <= x_c { (eta_l, u_l, b_l) } else { (eta_r, u_r, b_r) };
                        (eta, Vec2::new((eta - b) * u, 0.0))
                    })),
                }
            }
            // The potential flow rather than its uniform far-field limit: the
            // two differ by r_c^2/r^2 on the box, and that flux mismatch
            // starts a basin seiche that outlives the run.
            CaseKind::Cylinder { v_m, eta0, r_c } => Some(Arc::new(move |p, _t| {
                let (v, eta) = cylinder_potential_exact(p, v_m, r_c, eta0, g);
                (eta, v * eta)
            })),
            CaseKind::BluntBody { h, froude } => {
                let u = froude * (g * h).sqrt();
                Some(Arc::new(move |_p, _t| (h, Vec2::new(h * u, 0.0))))
            }
            _ => None,
        }
    }

    /// Free surface and momentum at `t = 0`.
    pub fn initial_fields(&self) -> (Box<dyn Fn(Vec2) -> f64 + '_>, Box<dyn Fn(Vec2) -> Vec2 + '_>) {
        let g = self.params.g;
        match self.kind {
            CaseKind::Vortex { h0 } => (
                Box::new(move |p| vortex_exact(p, h0, g).1),
                Box::new(move |p| {
                    let (v, h) = vortex_exact(p, h0, g);
                    v * h
                }),
            ),
            CaseKind::LeVequeBump { eps } => (
                Box::new(move |p| if (-0.95..=-0.85).contains(&p.x) { 1.0 + eps } else { 1.0 }),
                Box::new(|_| Vec2::ZERO),
            ),
            CaseKind::CosineBump { eps } => (
                Box::new(move |p| if (1.1..=1.2).contains(&p.x) { 1.0 + eps } else { 1.0 }),
                Box::new(|_| Vec2::ZERO),
            ),
            CaseKind::Riemann {
                eta_l,
                eta_r,
                u_l,
                u_r,
                b_l,
                b_r,
                x_c,
            } => (
                Box::new(move |p| if p.x <= x_c { eta_l } else { eta_r }),
                Box::new(move |p| {
                    if p.x <= x_c {
                        Vec2::new((eta_l - b_l) * u_l, 0.0)
                    } else {
                        Vec2::new((eta_r - b_r) * u_r, 0.0)
                    }
                }),
            ),
            CaseKind::CircularDambreak => (
                Box::new(|p| if p.norm() <= 1.0 { 1.0 } else { 0.5 }),
                Box::new(|_| Vec2::ZERO),
            ),
            CaseKind::Cylinder { v_m, eta0, r_c } => (
                Box::new(move |p| cylinder_potential_exact(p, v_m, r_c, eta0, g).1),
                Box::new(move |p| {
                    let (v, eta) = cylinder_potential_exact(p, v_m, r_c, eta0, g);
                    v * eta
                }),
            ),
            CaseKind::BluntBody { h, froude } => {
                let u = froude * (g * h).sqrt();
                (Box::new(move |_| h), Box::new(move |_| Vec2::new(h * u, 0.0)))
            }
            CaseKind::Dambreak { h0 } => (
                Box::new(move |p| if p.x < 0.0 { h0 } else { 0.0 }),
                Box::new(|_| Vec2::ZERO),
            ),
        }
    }

    pub fn initial_state(&self, mesh: &Mesh) -> State {
        let (eta, q) = self.initial_fields();
        let mut state = State::from_fields(mesh, |p| self.bottom(p), eta, q);
        if let CaseKind::Dambreak { h0 } = self.kind {
            // Wet every vertex touching the tank; duplicated wall vertices on
            // the plate side only touch plate triangles and stay dry.
            let primal = &mesh.primal;
            for (k, t) in primal.triangles.iter().enumerate() {
                if primal.barycenters[k].x < 0.0 {
                    for &v in t {
                        state.eta[v] = state.b_vertex[v] + h0;
                    }
                }
            }
            state = State::new(mesh, state.eta, state.q, state.b_vertex);
        }
        // Dry regions start exactly at rest with eta = b.
        for (e, &b) in state.eta.iter_mut().zip(&state.b_vertex) {
            if *e < b {
                *e = b;
            }
        }
        state
    }

    /// Validates, builds the mesh and returns a ready solver.
    pub fn solver(&self) -> Result<Solver, Error> {
        self.validate()?;
        let mesh = self.mesh.build()?;
        let state = self.initial_state(&mesh);
        let boundary = self.boundary();
        let needs_data = mesh
            .primal
            .boundary_edges
            .iter()
            .any(|&e| mesh.primal.edges[e].tag.is_some_and(|t| t.is_prescribed()));
        if needs_data && boundary.is_none() {
            return Err(Error::Invalid(format!(
                "case `{}` has inflow/exact boundaries but no boundary data",
                self.name
            )));
        }
        let solver = Solver::new(mesh, state, self.params, self.numerics, boundary);
        Ok(if self.gauges.is_empty() {
            solver
        } else {
            solver.with_gauges(&self.gauges)
        })
    }

    /// The same case on an `n x n` structured grid (vortex fixed steps scale as 1/n).
    pub fn refined(&self, n: usize) -> Result<CaseSpec, Error> {
        let mut spec = self.clone();
        match &mut spec.mesh {
            MeshSpec::Structured { nx, ny, .. } => {
                *nx = n;
                *ny = n;
            }
            other => {
                return Err(Error::Invalid(format!(
                    "case `{}` uses a {} mesh; refinement needs a structured grid",
                    self.name,
                    other.type_name()
                )))
            }
        }
        if matches!(spec.kind, CaseKind::Vortex { .. }) {
            spec.numerics.fixed_dt = Some(vortex_dt(n));
        }
        Ok(spec)
    }
}

/// Fixed vortex time step for an `n x n` grid: 1e-2 at n = 32, halved per refinement.
pub fn vortex_dt(n: usize) -> f64 {
    1e-2 * 32.0 / n as f64
}

fn vortex_case(name: &str, h0: f64, scheme: Scheme) -> CaseSpec {
    let n = 32;
    CaseSpec::new(
        name,
        CaseKind::Vortex { h0 },
        MeshSpec::Structured {
            bounds: [-5.0, 5.0, -5.0, 5.0],
            nx: n,
            ny: n,
            pattern: Pattern::Uniform,
            sides: Sides::all(Side::Periodic),
        },
        NumericsConfig {
            fixed_dt: Some(vortex_dt(n)),
            scheme,
            ..NumericsConfig::default()
        },
        0.1,
    )
}

fn riemann_case(name: &str, row: [f64; 10], nx: usize, numerics: NumericsConfig) -> CaseSpec {
    let [eta_l, eta_r, u_l, u_r, b_l, b_r, x_l, x_r, x_c, t] = row;
    // Quiescent sides give no velocity bound on the first steps.
    let numerics = NumericsConfig {
        dt_max: numerics.dt_max.min(1e-3),
        ..numerics
    };
    let dx = (x_r - x_l) / nx as f64;
    let ny = 4;
    CaseSpec::new(
        name,
        CaseKind::Riemann {
            eta_l,
            eta_r,
            u_l,
            u_r,
            b_l,
            b_r,
            x_c,
        },
        MeshSpec::Structured {
            bounds: [x_l, x_r, 0.0, ny as f64 * dx],
            nx,
            ny,
            pattern: Pattern::Alternating,
            sides: Sides::xy(Side::Exact, Side::Periodic),
        },
        numerics,
        t,
    )
}

/// All built-in cases, in display order.
pub fn builtin_cases() -> Vec<CaseSpec> {
    let d = NumericsConfig::default();
    let rusanov = NumericsConfig {
        fe_rusanov: true,
        ..d
    };
    let mut cases = vec![
        vortex_case("vortex", 1.0, Scheme::Wp2),
        vortex_case("vortex-ap-fr1e-1", 10.0, Scheme::Wp3),
        vortex_case("vortex-ap-fr1e-2", 1000.0, Scheme::Wp3),
    ];
    for (name, eps, theta) in [("leveque-bump", 0.0, 0.6), ("leveque-perturbation", 1e-2, 0.51)] {
        let mut c = CaseSpec::new(
            name,
            CaseKind::LeVequeBump { eps },
            MeshSpec::Structured {
                bounds: [-2.0, 1.0, -0.5, 0.5],
                nx: 96,
                ny: 32,
                pattern: Pattern::Alternating,
                sides: Sides::xy(Side::Exact, Side::Periodic),
            },
            NumericsConfig {
                theta,
                dt_max: 1e-3,
                ..d
            },
            0.1,
        );
        if eps > 0.0 {
            c.end_time = 0.2;
        }
        cases.push(c);
    }
    cases.push(CaseSpec::new(
        "cosine-bump-1d",
        CaseKind::CosineBump { eps: 1e-3 },
        MeshSpec::Structured {
            bounds: [0.0, 2.0, 0.0, 0.2],
            nx: 400,
            ny: 10,
            pattern: Pattern::Alternating,
            sides: Sides::xy(Side::Wall, Side::Periodic),
        },
        NumericsConfig {
            theta: 0.51,
            dt_max: 1e-3,
            ..d
        },
        0.2,
    ));
    cases.push(riemann_case("rp1", [1.0, 2.0, 0.0, 0.0, 0.0, 0.0, -0.5, 0.5, 0.0, 0.075], 200, d));
    cases.push(riemann_case(
        "rp2",
        [1.46184, 0.30873, 0.0, 0.0, 0.0, 0.2, -0.5, 0.5, 0.0, 1.0],
        400,
        rusanov,
    ));
    cases.push(riemann_case(
        "rp3",
        [0.75, 1.10594, -9.49365, -4.94074, 0.0, 0.2, -15.0, 5.0, 0.0, 1.0],
        800,
        // The strong rarefaction oscillates under LADER-ENO unless the
        // extra dissipation is comparable to the flow speed.
        NumericsConfig { c_alpha: 20.0, ..rusanov },
    ));
    cases.push(riemann_case(
        "rp4",
        [0.75, 1.10594, -1.35624, -4.94074, 0.0, 0.2, -15.0, 5.0, 0.0, 1.0],
        1600,
        NumericsConfig { c_alpha: 1.0, ..rusanov },
    ));
    cases.push(riemann_case(
        "rp5",
        [1.0, 1e-14, 0.0, 0.0, 0.0, 0.0, -0.5, 0.5, 0.0, 0.075],
        300,
        // Films thinner than a millimetre ahead of the front are treated as dry.
        NumericsConfig { h_dry: 1e-3, ..rusanov },
    ));
    cases.push(CaseSpec::new(
        "circular-dambreak",
        CaseKind::CircularDambreak,
        MeshSpec::Structured {
            bounds: [-2.0, 2.0, -2.0, 2.0],
            nx: 100,
            ny: 100,
            pattern: Pattern::Alternating,
            sides: Sides::all(Side::Wall),
        },
        NumericsConfig { theta: 0.5, ..rusanov },
        0.2,
    ));
    cases.push(CaseSpec::new(
        "cylinder",
        CaseKind::Cylinder {
            v_m: 1e-2,
            eta0: 1.0,
            r_c: 1.0,
        },
        MeshSpec::from_type("cylinder").expect("known mesh type"),
        d,
        10.0,
    ));
    cases.push(CaseSpec::new(
        "blunt-body",
        CaseKind::BluntBody { h: 1.0, froude: 3.0 },
        MeshSpec::from_type("half-annulus").expect("known mesh type"),
        NumericsConfig { c_alpha: 2.0, ..rusanov },
        2.0,
    ));
    let mut dam = CaseSpec::new(
        "dambreak-3d",
        CaseKind::Dambreak { h0: 0.6 },
        MeshSpec::from_type("dambreak").expect("known mesh type"),
        // Still water and a dry plate give no velocity bound on the first step.
        NumericsConfig {
            dt_max: 1e-3,
            h_dry: 1e-3,
            ..rusanov
        },
        2.0,
    );
    dam.params.n_manning = 1e-3;
    dam.gauges = [("-5A", -0.82), ("-3A", -0.62), ("-2A", -0.42), ("0", 0.0), ("1A", 0.02), ("8A", 0.722)]
        .into_iter()
        .map(|(n, x)| (n.to_string(), [x, 0.0]))
        .collect();
    cases.push(dam);
    cases
}

pub fn case_names() -> Vec<String> {
    builtin_cases().into_iter().map(|c| c.name).collect()
}

pub fn case_by_name(name: &str) -> Option<CaseSpec> {
    builtin_cases().into_iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete_and_valid() {
        let cases = builtin_cases();
        assert!(cases.len() >= 12);
        let mut names: Vec<_> = cases.iter().map(|c| c.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cases.len());
        for c in &cases {
            c.validate().unwrap_or_else(|e| panic!("{}: {e}", c.name));
        }
    }

    #[test]
    fn riemann_table_lookup() {
        let rp1 = case_by_name("rp1").unwrap();
        assert_eq!(rp1.end_time, 0.075);
        match rp1.kind {
            CaseKind::Riemann { eta_l, eta_r, b_l, b_r, .. } => {
                assert_eq!((eta_l, eta_r, b_l, b_r), (1.0, 2.0, 0.0, 0.0));
            }
            _ => panic!(),
        }
        assert!(matches!(rp1.mesh, MeshSpec::Structured { nx: 200, .. }));
        let rp3 = case_by_name("rp3").unwrap();
        match rp3.kind {
            CaseKind::Riemann { u_l, u_r, b_r, .. } => assert_eq!((u_l, u_r, b_r), (-9.49365, -4.94074, 0.2)),
            _ => panic!(),
        }
        assert!(matches!(rp3.mesh, MeshSpec::Structured { nx: 800, .. }));
        assert_eq!(rp3.end_time, 1.0);
    }

    #[test]
    fn vortex_time_steps() {
        let v = case_by_name("vortex").unwrap();
        assert_eq!(v.numerics.fixed_dt, Some(1e-2));
        assert_eq!(v.refined(64).unwrap().numerics.fixed_dt, Some(5e-3));
        assert_eq!(v.refined(512).unwrap().numerics.fixed_dt, Some(6.25e-4));
        assert!(case_by_name("cylinder").unwrap().refined(64).is_err());
    }

    #[test]
    fn kind_params_round_trip() {
        for name in CaseKind::NAMES {
            let k = CaseKind::from_name(name).unwrap();
            assert_eq!(k.name(), name);
            let mut k2 = CaseKind::from_name(name).unwrap();
            for (key, v) in k.params() {
                assert!(k2.set_param(key, v + 1.0));
            }
            assert!(!k2.set_param("nonsense", 0.0));
        }
    }

    #[test]
    fn initial_states_are_finite() {
        for c in builtin_cases() {
            if matches!(c.name.as_str(), "rp4" | "circular-dambreak") {
                continue;
            }
            let mesh = c.mesh.build().unwrap();
            let s = c.initial_state(&mesh);
            s.validate(&mesh).unwrap_or_else(|e| panic!("{}: {e}", c.name));
            assert!(s.h_dual_all(&mesh).iter().all(|h| *h >= 0.0));
        }
    }

    #[test]
    fn dambreak_starts_dry_on_plate() {
        let c = case_by_name("dambreak-3d").unwrap();
        let mesh = c.mesh.build().unwrap();
        let s = c.initial_state(&mesh);
        for (v, p) in mesh.primal.vertices.iter().enumerate() {
            let h = s.h_vertex(v);
            if p.x > 1e-9 {
                assert_eq!(h, 0.0);
            } else if p.x < -1e-9 {
                assert_eq!(h, 0.6);
            }
        }
    }
}
