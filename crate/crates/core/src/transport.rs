//! Explicit finite-volume transport of momentum on the dual mesh.
//!
//! Computes the intermediate momentum `q* = q - dt div(v (x) q)` with a
//! Rusanov flux, optionally with ENO reconstruction and a half-step
//! Cauchy-Kovalevskaya predictor (LADER) for second order.

use crate::error::StepError;
use crate::geom::Vec2;
use crate::mesh::{BoundaryTag, Mesh};
use crate::state::{velocity_from_momentum, NumericsConfig, State};

/// Normal convective flux `v (q . n)` with the regularized velocity.
#[inline]
pub fn z_flux(h: f64, q: Vec2, n: Vec2, eps: f64) -> Vec2 {
    velocity_from_momentum(q, h, eps) * q.dot(n)
}

/// Rusanov flux across an interface with length-weighted normal `n` (from i to j).
pub fn rusanov_flux(h_i: f64, q_i: Vec2, h_j: f64, q_j: Vec2, n: Vec2, c_alpha: f64, eps: f64) -> Vec2 {
    let v_i = velocity_from_momentum(q_i, h_i, eps);
    let v_j = velocity_from_momentum(q_j, h_j, eps);
    let alpha = (2.0 * v_i.dot(n).abs()).max(2.0 * v_j.dot(n).abs()) + c_alpha * n.norm();
    let central = (v_i * q_i.dot(n) + v_j * q_j.dot(n)) * 0.5;
    central - (q_j - q_i) * (0.5 * alpha)
}

/// Gradient of the linear function taking `w[m]` at the midpoint of the
/// edge opposite corner `m`, given the P1 basis gradients of the element.
#[inline]
pub fn cr_gradient(w: [f64; 3], p1_grads: &[Vec2; 3]) -> Vec2 {
    (p1_grads[0] * w[0] + p1_grads[1] * w[1] + p1_grads[2] * w[2]) * -2.0
}

/// ENO choice between the far-element gradient and the interface element
/// gradient, by the smaller increment along `d`. Ties keep the far element.
#[inline]
pub fn eno_select(far: Vec2, interface: Vec2, d: Vec2) -> Vec2 {
    if far.dot(d).abs() <= interface.dot(d).abs() {
        far
    } else {
        interface
    }
}

#[inline]
pub fn extrapolate(w: f64, grad: Vec2, d: Vec2) -> f64 {
    w + grad.dot(d)
}

/// Point value and gradients of (h, q) reconstructed on one side of an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideState {
    pub h: f64,
    pub q: Vec2,
    pub grad_h: Vec2,
    pub grad_qx: Vec2,
    pub grad_qy: Vec2,
}

impl SideState {
    /// `div(v (x) q)` of the linear reconstruction at this point.
    pub fn convective_divergence(&self, eps: f64) -> Vec2 {
        let v = velocity_from_momentum(self.q, self.h, eps);
        let div_q = self.grad_qx.x + self.grad_qy.y;
        let v_grad_h = v.dot(self.grad_h);
        Vec2::new(
            self.grad_qx.dot(v) + v.x * div_q - v.x * v_grad_h,
            self.grad_qy.dot(v) + v.y * div_q - v.y * v_grad_h,
        )
    }
}

/// Shared half-step increment of the interface momentum.
pub fn half_time_increment(left: &SideState, right: &SideState, dt: f64, eps: f64) -> Vec2 {
    (left.convective_divergence(eps) + right.convective_divergence(eps)) * (-0.25 * dt)
}

/// Per-element Crouzeix-Raviart gradients of h, q_x and q_y.
#[derive(Debug, Clone)]
pub struct ElementGradients {
    pub h: Vec<Vec2>,
    pub qx: Vec<Vec2>,
    pub qy: Vec<Vec2>,
}

pub fn element_gradients(mesh: &Mesh, h: &[f64], q: &[Vec2]) -> ElementGradients {
    let nt = mesh.primal.num_triangles();
    let mut out = ElementGradients {
        h: Vec::with_capacity(nt),
        qx: Vec::with_capacity(nt),
        qy: Vec::with_capacity(nt),
    };
    for (te, g) in mesh.primal.triangle_edges.iter().zip(&mesh.primal.grads) {
        out.h.push(cr_gradient(te.map(|i| h[i]), g));
        out.qx.push(cr_gradient(te.map(|i| q[i].x), g));
        out.qy.push(cr_gradient(te.map(|i| q[i].y), g));
    }
    out
}

/// ENO-reconstructed states on both sides of interior face `f`, or `None`
/// when the face must fall back to first order.
pub fn reconstruct_face(
    mesh: &Mesh,
    f: usize,
    h: &[f64],
    q: &[Vec2],
    grads: &ElementGradients,
    h_dry: f64,
) -> Option<(SideState, SideState)> {
    let face = &mesh.dual.faces[f];
    if h[face.i].min(h[face.j]) < h_dry {
        return None;
    }
    let k = face.element;
    let side = |cell: usize, far: Option<usize>, d: Vec2| {
        let far = far.unwrap_or(k);
        let gh = eno_select(grads.h[far], grads.h[k], d);
        let gx = eno_select(grads.qx[far], grads.qx[k], d);
        let gy = eno_select(grads.qy[far], grads.qy[k], d);
        SideState {
            h: extrapolate(h[cell], gh, d),
            q: Vec2::new(extrapolate(q[cell].x, gx, d), extrapolate(q[cell].y, gy, d)),
            grad_h: gh,
            grad_qx: gx,
            grad_qy: gy,
        }
    };
    let left = side(face.i, face.other_i, face.to_face_i);
    let right = side(face.j, face.other_j, face.to_face_j);
    if left.h < 0.0 || right.h < 0.0 {
        return None;
    }
    Some((left, right))
}

/// Ghost state `(h, q)` outside boundary face `b`.
pub fn ghost_state(
    tag: BoundaryTag,
    h: f64,
    q: Vec2,
    unit_normal: Vec2,
    prescribed: Option<(f64, Vec2)>,
) -> Option<(f64, Vec2)> {
    match tag {
        BoundaryTag::Wall => Some((h, q - unit_normal * (2.0 * q.dot(unit_normal)))),
        BoundaryTag::Outflow => Some((h, q)),
        BoundaryTag::Inflow | BoundaryTag::Exact => prescribed,
        BoundaryTag::Periodic(_) => unreachable!("periodic edges are glued"),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransportStats {
    /// Interior faces that fell back to first order.
    pub first_order_faces: usize,
}

/// Intermediate momentum on every dual cell.
///
/// `boundary_states[b]` holds the prescribed `(h, q)` for boundary face `b`
/// at the start of the step; only inflow and exact faces read it.
pub fn transport_step(
    mesh: &Mesh,
    state: &State,
    dt: f64,
    cfg: &NumericsConfig,
    boundary_states: &[Option<(f64, Vec2)>],
) -> Result<(Vec<Vec2>, TransportStats), StepError> {
    let h = state.h_dual_all(mesh);
    let q = &state.q;
    let eps = cfg.eps_vel;
    let mut acc = vec![Vec2::ZERO; mesh.dual.num_cells()];
    let mut stats = TransportStats::default();
    let grads = cfg.use_lader.then(|| element_gradients(mesh, &h, q));

    for (f, face) in mesh.dual.faces.iter().enumerate() {
        let (i, j) = (face.i, face.j);
        let recon = grads
            .as_ref()
            .and_then(|g| reconstruct_face(mesh, f, &h, q, g, cfg.h_dry));
        let (hi, qi, hj, qj) = match recon {
            Some((l, r)) => {
                let dq = half_time_increment(&l, &r, dt, eps);
                (l.h, l.q + dq, r.h, r.q + dq)
            }
            None => {
                if grads.is_some() {
                    stats.first_order_faces += 1;
                }
                (h[i], q[i], h[j], q[j])
            }
        };
        let phi = rusanov_flux(hi, qi, hj, qj, face.normal, cfg.c_alpha, eps);
        if !phi.is_finite() {
            return Err(StepError::NonFiniteFlux {
                face: f,
                i,
                j,
                q_i: qi.into(),
                q_j: qj.into(),
                h_i: hi,
                h_j: hj,
            });
        }
        acc[i] += phi;
        acc[j] -= phi;
    }

    for (b, bf) in mesh.dual.boundary_faces.iter().enumerate() {
        let i = bf.cell;
        let len = bf.normal.norm();
        let (hg, qg) = ghost_state(bf.tag, h[i], q[i], bf.normal * (1.0 / len), boundary_states[b])
            .ok_or(StepError::MissingBoundaryData(i))?;
        let phi = rusanov_flux(h[i], q[i], hg, qg, bf.normal, cfg.c_alpha, eps);
        if !phi.is_finite() {
            return Err(StepError::NonFiniteFlux {
                face: mesh.dual.faces.len() + b,
                i,
                j: i,
                q_i: q[i].into(),
                q_j: qg.into(),
                h_i: h[i],
                h_j: hg,
            });
        }
        acc[i] += phi;
    }

    let q_star = q
        .iter()
        .zip(&acc)
        .zip(&mesh.dual.cells)
        .map(|((&qi, &a), c)| qi - a * (dt / c.area))
        .collect();
    Ok((q_star, stats))
}
