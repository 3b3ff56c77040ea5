//! Continuous P1 free-surface solve and the momentum correction that follows it.

use crate::error::StepError;
use crate::geom::Vec2;
use crate::mesh::{BoundaryTag, Mesh};
use crate::sparse::{solve_spd, CgResult, Nullspace, SparseSym};
use crate::state::{friction_gamma, velocity_from_momentum, NumericsConfig, PhysicalParams, Scheme, State};

/// Consistent P1 mass matrix of one element.
pub fn mass_block(area: f64) -> [[f64; 3]; 3] {
    let d = area / 6.0;
    let o = area / 12.0;
    [[d, o, o], [o, d, o], [o, o, d]]
}

/// `c |T| grad(phi_l) . grad(phi_r)`.
pub fn stiffness_block(area: f64, grads: &[Vec2; 3], c: f64) -> [[f64; 3]; 3] {
    let mut k = [[0.0; 3]; 3];
    for l in 0..3 {
        for r in 0..3 {
            k[l][r] = c * area * grads[l].dot(grads[r]);
        }
    }
    k
}

/// Sparsity pattern of P1 operators plus the mass matrix, built once per mesh.
#[derive(Debug, Clone)]
pub struct FeSpace {
    pattern: SparseSym,
    /// Storage index of local entry (l, r) for every element.
    positions: Vec<[[usize; 3]; 3]>,
    mass: SparseSym,
    perimeters: Vec<f64>,
}

impl FeSpace {
    pub fn new(mesh: &Mesh) -> Self {
        let p = &mesh.primal;
        let mut triplets = Vec::with_capacity(9 * p.num_triangles());
        for t in &p.triangles {
            for &a in t {
                for &b in t {
                    triplets.push((a, b, 0.0));
                }
            }
        }
        let pattern = SparseSym::from_triplets(p.num_vertices(), &triplets)
            .expect("triangle indices are validated");
        let positions = p
            .triangles
            .iter()
            .map(|t| {
                let mut pos = [[0; 3]; 3];
                for l in 0..3 {
                    for r in 0..3 {
                        pos[l][r] = pattern.position(t[l], t[r]).expect("entry in pattern");
                    }
                }
                pos
            })
            .collect();
        let perimeters = p
            .corners
            .iter()
            .map(|c| (c[1] - c[0]).norm() + (c[2] - c[1]).norm() + (c[0] - c[2]).norm())
            .collect();
        let mut space = FeSpace {
            mass: pattern.clone(),
            pattern,
            positions,
            perimeters,
        };
        space.mass = space.assemble(|k| mass_block(p.areas[k]));
        space
    }

    fn assemble(&self, block: impl Fn(usize) -> [[f64; 3]; 3]) -> SparseSym {
        let mut a = self.pattern.zeroed();
        let vals = a.values_mut();
        for (k, pos) in self.positions.iter().enumerate() {
            let b = block(k);
            for l in 0..3 {
                for r in 0..3 {
                    vals[pos[l][r]] += b[l][r];
                }
            }
        }
        a
    }

    pub fn mass(&self) -> &SparseSym {
        &self.mass
    }

    /// Mass matrix with the elements flagged in `lumped` row-sum lumped.
    pub fn mass_lumped_where(&self, mesh: &Mesh, lumped: &[bool]) -> SparseSym {
        let p = &mesh.primal;
        self.assemble(|k| {
            if lumped[k] {
                let d = p.areas[k] / 3.0;
                [[d, 0.0, 0.0], [0.0, d, 0.0], [0.0, 0.0, d]]
            } else {
                mass_block(p.areas[k])
            }
        })
    }

    /// Stiffness matrix with elementwise coefficient `coeff[k]`.
    pub fn stiffness(&self, mesh: &Mesh, coeff: &[f64]) -> SparseSym {
        let p = &mesh.primal;
        self.assemble(|k| stiffness_block(p.areas[k], &p.grads[k], coeff[k]))
    }

    /// Rusanov-type dissipation `(dt |T| / |dT|) lambda_k |T| grad(phi_l) . grad(phi_r)`.
    pub fn stabilization(&self, mesh: &Mesh, lambda: &[f64], dt: f64) -> SparseSym {
        let p = &mesh.primal;
        self.assemble(|k| {
            let scale = dt * p.areas[k] / self.perimeters[k] * lambda[k];
            stiffness_block(p.areas[k], &p.grads[k], scale)
        })
    }
}

/// Mean of the three face values of every element.
pub fn dual_to_primal(mesh: &Mesh, q: &[Vec2]) -> Vec<Vec2> {
    mesh.primal
        .triangle_edges
        .iter()
        .map(|te| (q[te[0]] + q[te[1]] + q[te[2]]) * (1.0 / 3.0))
        .collect()
}

/// Constant gradient of the P1 interpolant on every element.
pub fn primal_gradient(mesh: &Mesh, eta: &[f64]) -> Vec<Vec2> {
    let p = &mesh.primal;
    p.triangles
        .iter()
        .zip(&p.grads)
        .map(|(t, g)| g[0] * eta[t[0]] + g[1] * eta[t[1]] + g[2] * eta[t[2]])
        .collect()
}

/// Subtriangle-area weighted average of element gradients onto dual cells.
pub fn primal_to_dual_gradient(mesh: &Mesh, grad: &[Vec2]) -> Vec<Vec2> {
    mesh.dual
        .cells
        .iter()
        .map(|c| {
            let mut acc = Vec2::ZERO;
            for s in &c.subs {
                acc += grad[s.element] * s.area;
            }
            acc * (1.0 / c.area)
        })
        .collect()
}

/// `rhs_v += dt |T_k| w_k . grad(phi_v)` over all elements.
pub fn add_volume_term(mesh: &Mesh, w: &[Vec2], dt: f64, rhs: &mut [f64]) {
    let p = &mesh.primal;
    for (k, t) in p.triangles.iter().enumerate() {
        let s = dt * p.areas[k];
        for m in 0..3 {
            rhs[t[m]] += s * w[k].dot(p.grads[k][m]);
        }
    }
}

/// `rhs_v -= dt * integral(q.n z)` on boundary edges, `qn[b]` being the
/// normal flux `q . n_weighted` of boundary face `b`.
pub fn add_boundary_term(mesh: &Mesh, qn: &[f64], dt: f64, rhs: &mut [f64]) {
    for (bf, &flux) in mesh.dual.boundary_faces.iter().zip(qn) {
        let [a, b] = mesh.primal.edges[bf.cell].vertices;
        let share = 0.5 * dt * flux;
        rhs[a] -= share;
        rhs[b] -= share;
    }
}

/// Frozen coefficients of one time step.
#[derive(Debug, Clone)]
pub struct StepCoefficients {
    /// Element depth, clamped at zero.
    pub h_elem: Vec<f64>,
    pub gamma_elem: Vec<f64>,
    /// `h / (1 + dt gamma)` per element.
    pub coeff: Vec<f64>,
    /// Element momentum at time level n.
    pub q_elem: Vec<Vec2>,
    pub h_dual: Vec<f64>,
    pub gamma_dual: Vec<f64>,
}

pub fn step_coefficients(
    mesh: &Mesh,
    state: &State,
    dt: f64,
    params: &PhysicalParams,
    cfg: &NumericsConfig,
) -> StepCoefficients {
    let nt = mesh.primal.num_triangles();
    let q_elem = dual_to_primal(mesh, &state.q);
    let h_elem: Vec<f64> = (0..nt).map(|k| state.h_element(mesh, k)).collect();
    let gamma_elem: Vec<f64> = (0..nt)
        .map(|k| {
            let v = velocity_from_momentum(q_elem[k], h_elem[k], cfg.eps_vel);
            friction_gamma(h_elem[k], v, params, cfg.h_dry)
        })
        .collect();
    let coeff = h_elem
        .iter()
        .zip(&gamma_elem)
        .map(|(h, g)| h / (1.0 + dt * g))
        .collect();
    let h_dual = state.h_dual_all(mesh);
    let gamma_dual = h_dual
        .iter()
        .zip(&state.q)
        .map(|(&h, &q)| friction_gamma(h, velocity_from_momentum(q, h, cfg.eps_vel), params, cfg.h_dry))
        .collect();
    StepCoefficients {
        h_elem,
        gamma_elem,
        coeff,
        q_elem,
        h_dual,
        gamma_dual,
    }
}

/// Prescribed boundary data for one step.
#[derive(Debug, Clone, Default)]
pub struct BoundaryTargets {
    /// Momentum at t^{n+1} per boundary face (inflow and exact faces).
    pub q_new: Vec<Option<Vec2>>,
    /// Momentum at t^{n+theta} per boundary face.
    pub q_theta: Vec<Option<Vec2>>,
    /// Free-surface values at t^{n+1} on vertices of exact boundaries.
    pub eta_new: Vec<(usize, f64)>,
}

impl BoundaryTargets {
    /// All-`None` targets for meshes without prescribed boundaries.
    pub fn none(mesh: &Mesh) -> Self {
        let nb = mesh.dual.boundary_faces.len();
        BoundaryTargets {
            q_new: vec![None; nb],
            q_theta: vec![None; nb],
            eta_new: Vec::new(),
        }
    }
}

/// Explicit estimate of the new momentum used to extrapolate outflow fluxes:
/// `(q* - dt g h grad(eta^n)) / (1 + dt gamma)` on a dual cell.
fn outflow_estimate(i: usize, q_star: &[Vec2], grad_n: &[Vec2], c: &StepCoefficients, dt: f64, g: f64) -> Vec2 {
    (q_star[i] - grad_n[i] * (dt * g * c.h_dual[i])) * (1.0 / (1.0 + dt * c.gamma_dual[i]))
}

/// Normal boundary flux `q_b . n` per boundary face.
fn boundary_fluxes(
    mesh: &Mesh,
    prescribed: &[Option<Vec2>],
    interior: impl Fn(usize) -> Vec2,
) -> Result<Vec<f64>, StepError> {
    mesh.dual
        .boundary_faces
        .iter()
        .enumerate()
        .map(|(b, bf)| {
            let q = match bf.tag {
                BoundaryTag::Wall => Vec2::ZERO,
                BoundaryTag::Outflow => interior(bf.cell),
                BoundaryTag::Inflow | BoundaryTag::Exact => prescribed[b].ok_or(StepError::MissingBoundaryData(bf.cell))?,
                BoundaryTag::Periodic(_) => unreachable!("periodic edges are glued"),
            };
            Ok(q.dot(bf.normal))
        })
        .collect()
}

/// Right-hand side of the backward-Euler weak problem.
pub fn assemble_rhs_wp1(
    mesh: &Mesh,
    mass: &SparseSym,
    state: &State,
    q_star: &[Vec2],
    c: &StepCoefficients,
    dt: f64,
    g: f64,
    targets: &BoundaryTargets,
) -> Result<Vec<f64>, StepError> {
    let mut rhs = mass.matvec(&state.eta);
    let q_star_elem = dual_to_primal(mesh, q_star);
    let w: Vec<Vec2> = q_star_elem
        .iter()
        .zip(&c.gamma_elem)
        .map(|(&q, &gm)| q * (1.0 / (1.0 + dt * gm)))
        .collect();
    add_volume_term(mesh, &w, dt, &mut rhs);
    let grad_n = primal_to_dual_gradient(mesh, &primal_gradient(mesh, &state.eta));
    let qn = boundary_fluxes(mesh, &targets.q_new, |i| outflow_estimate(i, q_star, &grad_n, c, dt, g))?;
    add_boundary_term(mesh, &qn, dt, &mut rhs);
    Ok(rhs)
}

/// Right-hand side of the theta-method weak problem.
#[allow(clippy::too_many_arguments)]
pub fn assemble_rhs_wp2(
    mesh: &Mesh,
    mass: &SparseSym,
    state: &State,
    q_star: &[Vec2],
    c: &StepCoefficients,
    stiffness: &SparseSym,
    dt: f64,
    g: f64,
    theta: f64,
    targets: &BoundaryTargets,
) -> Result<Vec<f64>, StepError> {
    let mut rhs = mass.matvec(&state.eta);
    let q_star_elem = dual_to_primal(mesh, q_star);
    let w: Vec<Vec2> = (0..mesh.primal.num_triangles())
        .map(|k| c.q_elem[k] * (1.0 - theta) + q_star_elem[k] * (theta / (1.0 + dt * c.gamma_elem[k])))
        .collect();
    add_volume_term(mesh, &w, dt, &mut rhs);
    if theta != 1.0 {
        let k_eta = stiffness.matvec(&state.eta);
        let s = dt * dt * theta * (1.0 - theta) * g;
        for (r, ke) in rhs.iter_mut().zip(&k_eta) {
            *r -= s * ke;
        }
    }
    let grad_n = primal_to_dual_gradient(mesh, &primal_gradient(mesh, &state.eta));
    let qn = boundary_fluxes(mesh, &targets.q_theta, |i| {
        state.q[i] * (1.0 - theta) + outflow_estimate(i, q_star, &grad_n, c, dt, g) * theta
    })?;
    add_boundary_term(mesh, &qn, dt, &mut rhs);
    Ok(rhs)
}

/// Right-hand side of the pressure-correction weak problem (unknown: increment).
#[allow(clippy::too_many_arguments)]
pub fn assemble_rhs_wp3(
    mesh: &Mesh,
    q_star: &[Vec2],
    c: &StepCoefficients,
    grad_eta_elem: &[Vec2],
    dt: f64,
    g: f64,
    targets: &BoundaryTargets,
) -> Result<Vec<f64>, StepError> {
    let mut rhs = vec![0.0; mesh.primal.num_vertices()];
    let q_star_elem = dual_to_primal(mesh, q_star);
    let w: Vec<Vec2> = (0..mesh.primal.num_triangles())
        .map(|k| {
            let q2 = q_star_elem[k] - grad_eta_elem[k] * (dt * g * c.h_elem[k]);
            q2 * (1.0 / (1.0 + dt * c.gamma_elem[k]))
        })
        .collect();
    add_volume_term(mesh, &w, dt, &mut rhs);
    let grad_n = primal_to_dual_gradient(mesh, grad_eta_elem);
    let qn = boundary_fluxes(mesh, &targets.q_new, |i| outflow_estimate(i, q_star, &grad_n, c, dt, g))?;
    add_boundary_term(mesh, &qn, dt, &mut rhs);
    Ok(rhs)
}

#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub eta: Vec<f64>,
    pub q: Vec<Vec2>,
    pub cg: CgResult,
}

/// Solve for the new free surface and correct the momentum.
#[allow(clippy::too_many_arguments)]
pub fn project(
    mesh: &Mesh,
    space: &FeSpace,
    state: &State,
    q_star: &[Vec2],
    dt: f64,
    params: &PhysicalParams,
    cfg: &NumericsConfig,
    targets: &BoundaryTargets,
) -> Result<ProjectionResult, StepError> {
    let g = params.g;
    let theta = if cfg.scheme == Scheme::Wp2 { cfg.theta } else { 1.0 };
    let c = step_coefficients(mesh, state, dt, params, cfg);
    let stiffness = space.stiffness(mesh, &c.coeff);
    // Consistent mass undershoots ahead of a wet/dry front; lump the
    // elements that touch a dry vertex.
    let front: Vec<bool> = mesh
        .primal
        .triangles
        .iter()
        .map(|t| t.iter().any(|&v| state.eta[v] - state.b_vertex[v] < cfg.h_dry))
        .collect();
    let mass = if front.iter().any(|&f| f) {
        space.mass_lumped_where(mesh, &front)
    } else {
        space.mass().clone()
    };
    let mut lhs = mass.clone();
    lhs.add_scaled(dt * dt * theta * theta * g, &stiffness);
    if cfg.fe_rusanov {
        let lambda: Vec<f64> = (0..mesh.primal.num_triangles())
            .map(|k| {
                let v = velocity_from_momentum(c.q_elem[k], c.h_elem[k], cfg.eps_vel);
                2.0 * v.norm() + (g * c.h_elem[k]).sqrt()
            })
            .collect();
        lhs.add_scaled(1.0, &space.stabilization(mesh, &lambda, dt));
    }
    let grad_eta_elem = primal_gradient(mesh, &state.eta);

    let (mut rhs, x0, fixed): (Vec<f64>, Vec<f64>, Vec<(usize, f64)>) = match cfg.scheme {
        Scheme::Wp1 => (
            assemble_rhs_wp1(mesh, &mass, state, q_star, &c, dt, g, targets)?,
            state.eta.clone(),
            targets.eta_new.clone(),
        ),
        Scheme::Wp2 => (
            assemble_rhs_wp2(mesh, &mass, state, q_star, &c, &stiffness, dt, g, theta, targets)?,
            state.eta.clone(),
            targets.eta_new.clone(),
        ),
        Scheme::Wp3 => (
            assemble_rhs_wp3(mesh, q_star, &c, &grad_eta_elem, dt, g, targets)?,
            vec![0.0; state.eta.len()],
            targets
                .eta_new
                .iter()
                .map(|&(v, e)| (v, e - state.eta[v]))
                .collect(),
        ),
    };
    if !fixed.is_empty() {
        lhs.apply_dirichlet(&fixed, &mut rhs);
    }
    let cg = solve_spd(&lhs, &rhs, &x0, cfg.cg_tol, cfg.cg_maxiter, &Nullspace::None)?;

    let (eta, q) = match cfg.scheme {
        Scheme::Wp3 => {
            let grad_n = primal_to_dual_gradient(mesh, &grad_eta_elem);
            let grad_d = primal_to_dual_gradient(mesh, &primal_gradient(mesh, &cg.x));
            let q = (0..q_star.len())
                .map(|i| {
                    let dth = dt * g * c.h_dual[i];
                    let q2 = q_star[i] - grad_n[i] * dth;
                    (q2 - grad_d[i] * dth) * (1.0 / (1.0 + dt * c.gamma_dual[i]))
                })
                .collect();
            let eta = state.eta.iter().zip(&cg.x).map(|(e, d)| e + d).collect();
            (eta, q)
        }
        _ => {
            let eta_theta: Vec<f64> = if theta == 1.0 {
                cg.x.clone()
            } else {
                state
                    .eta
                    .iter()
                    .zip(&cg.x)
                    .map(|(en, e1)| (1.0 - theta) * en + theta * e1)
                    .collect()
            };
            let grad = primal_to_dual_gradient(mesh, &primal_gradient(mesh, &eta_theta));
            let q = (0..q_star.len())
                .map(|i| momentum_correction(q_star[i], c.h_dual[i], grad[i], c.gamma_dual[i], dt, g))
                .collect();
            (cg.x.clone(), q)
        }
    };
    let mut q: Vec<Vec2> = q;
    for (b, bf) in mesh.dual.boundary_faces.iter().enumerate() {
        if bf.tag.is_prescribed() {
            if let Some(qb) = targets.q_new[b] {
                q[bf.cell] = qb;
            }
        }
    }
    Ok(ProjectionResult { eta, q, cg })
}

/// `(q* - dt g h grad(eta)) / (1 + dt gamma)` on one dual cell.
#[inline]
pub fn momentum_correction(q_star: Vec2, h: f64, grad_eta: Vec2, gamma: f64, dt: f64, g: f64) -> Vec2 {
    (q_star - grad_eta * (dt * g * h)) * (1.0 / (1.0 + dt * gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::p1_gradients;

    #[test]
    fn unit_right_triangle_blocks() {
        let m = mass_block(0.5);
        let want = [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]];
        for l in 0..3 {
            for r in 0..3 {
                assert!((m[l][r] - want[l][r] / 24.0).abs() < 1e-16);
            }
            let row: f64 = m[l].iter().sum();
            assert!((row - 0.5 / 3.0).abs() < 1e-16);
        }
        let p = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let k = stiffness_block(0.5, &p1_gradients(&p), 1.0);
        let want = [[2.0, -1.0, -1.0], [-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]];
        for l in 0..3 {
            for r in 0..3 {
                assert!((k[l][r] - 0.5 * want[l][r]).abs() < 1e-16);
            }
        }
        assert_eq!(stiffness_block(0.5, &p1_gradients(&p), 0.0), [[0.0; 3]; 3]);
    }

    #[test]
    fn correction_examples() {
        let q = Vec2::new(2.0, 0.0);
        assert_eq!(momentum_correction(q, 1.0, Vec2::ZERO, 1.0, 1.0, 9.81), Vec2::new(1.0, 0.0));
        assert_eq!(momentum_correction(q, 1.0, Vec2::ZERO, 0.0, 0.3, 9.81), q);
    }
}
