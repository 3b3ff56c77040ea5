//! Discrete error norms, point sampling and 1D cuts.

use crate::geom::Vec2;
use crate::mesh::Mesh;
use crate::state::{velocity_from_momentum, State};

/// Weighted discrete L2 norm of `a - b`: `sqrt(sum w (a - b)^2)`.
pub fn weighted_l2(weights: &[f64], a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(weights.len(), a.len());
    assert_eq!(a.len(), b.len());
    weights
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| w * (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// L2 error of a vertex field against `exact` sampled at the vertices,
/// weighted by the lumped P1 mass.
pub fn l2_error_vertex(mesh: &Mesh, values: &[f64], exact: impl Fn(Vec2) -> f64) -> f64 {
    let w = mesh.primal.lumped_mass();
    let ex: Vec<f64> = mesh.primal.vertices.iter().map(|&p| exact(p)).collect();
    weighted_l2(&w, values, &ex)
}

/// L2 error of a dual-cell field against `exact` sampled at the dual nodes,
/// weighted by the cell areas.
pub fn l2_error_dual(mesh: &Mesh, values: &[f64], exact: impl Fn(Vec2) -> f64) -> f64 {
    let w = mesh.dual.areas();
    let ex: Vec<f64> = mesh.dual.cells.iter().map(|c| exact(c.node)).collect();
    weighted_l2(&w, values, &ex)
}

/// Errors of a state against a reference `(eta, v)` field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldErrors {
    pub v1: f64,
    pub v2: f64,
    pub eta: f64,
}

pub fn state_errors(mesh: &Mesh, state: &State, eps: f64, exact: impl Fn(Vec2) -> (f64, Vec2)) -> FieldErrors {
    let h = state.h_dual_all(mesh);
    let v: Vec<Vec2> = state
        .q
        .iter()
        .zip(&h)
        .map(|(&q, &h)| velocity_from_momentum(q, h, eps))
        .collect();
    let v1: Vec<f64> = v.iter().map(|v| v.x).collect();
    let v2: Vec<f64> = v.iter().map(|v| v.y).collect();
    FieldErrors {
        v1: l2_error_dual(mesh, &v1, |p| exact(p).1.x),
        v2: l2_error_dual(mesh, &v2, |p| exact(p).1.y),
        eta: l2_error_vertex(mesh, &state.eta, |p| exact(p).0),
    }
}

/// Element containing `p` and its barycentric coordinates (brute force).
pub fn locate(mesh: &Mesh, p: Vec2) -> Option<(usize, [f64; 3])> {
    let primal = &mesh.primal;
    let tol = -1e-12;
    primal.corners.iter().enumerate().find_map(|(k, c)| {
        let area2 = (c[1] - c[0]).cross(c[2] - c[0]);
        let l0 = (c[1] - p).cross(c[2] - p) / area2;
        let l1 = (c[2] - p).cross(c[0] - p) / area2;
        let l2 = 1.0 - l0 - l1;
        (l0 >= tol && l1 >= tol && l2 >= tol).then_some((k, [l0, l1, l2]))
    })
}

/// Point sample of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSample {
    pub eta: f64,
    pub h: f64,
    pub q: Vec2,
}

/// Samples `eta` and `h` by P1 interpolation and `q` by the linear
/// (Crouzeix-Raviart) interpolant through the edge values.
pub fn sample(mesh: &Mesh, state: &State, p: Vec2) -> Option<PointSample> {
    let (k, lam) = locate(mesh, p)?;
    let t = mesh.primal.triangles[k];
    let mut s = PointSample {
        eta: 0.0,
        h: 0.0,
        q: Vec2::ZERO,
    };
    for m in 0..3 {
        s.eta += lam[m] * state.eta[t[m]];
        s.h += lam[m] * state.h_vertex(t[m]);
        // The CR basis of the edge opposite corner m is 1 - 2 lambda_m.
        s.q += state.q[mesh.primal.triangle_edges[k][m]] * (1.0 - 2.0 * lam[m]);
    }
    Some(s)
}

/// One point of a 1D cut through the dual nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    pub cell: usize,
    pub x: f64,
    pub h: f64,
    pub eta: f64,
    pub u: f64,
}

/// Dual cells whose nodes lie within `half_width` of the line `y = y0`,
/// sorted by `x`.
pub fn cut_along_x(mesh: &Mesh, state: &State, y0: f64, half_width: f64, eps: f64) -> Vec<CutPoint> {
    let mut pts: Vec<CutPoint> = mesh
        .dual
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| (c.node.y - y0).abs() <= half_width)
        .map(|(i, c)| {
            let h = state.h_dual(mesh, i);
            CutPoint {
                cell: i,
                x: c.node.x,
                h,
                eta: h + state.b_dual[i],
                u: velocity_from_momentum(state.q[i], h, eps).x,
            }
        })
        .collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.cell.cmp(&b.cell)));
    pts
}

/// Observed order `log2(coarse / fine)`; `None` when undefined.
pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    let r = coarse / fine;
    (r.is_finite() && r > 0.0 && coarse != fine).then(|| r.log2())
}
