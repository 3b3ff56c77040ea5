//! Non-rectangular meshes used by the catalog cases.

use std::f64::consts::PI;

use crate::mesh::{generate_structured, mapped_grid, tag_boundary_edges, BoundaryTag, MeshData, MeshError, Pattern, Sides};

/// O-grid around a cylinder of radius `r_c` at the origin inside the square
/// `[-w, w]^2`. Outer points are spread uniformly along the square perimeter;
/// radial spacing grows geometrically with `stretch` (0 gives uniform).
///
/// Tags: cylinder wall, inflow on left/top/bottom, outflow on the right.
pub fn cylinder_mesh(r_c: f64, half_width: f64, n_theta: usize, n_r: usize, stretch: f64) -> Result<MeshData, MeshError> {
    if n_theta < 8 || !n_theta.is_multiple_of(8) {
        return Err(MeshError::Generator(format!(
            "cylinder mesh needs n_theta to be a positive multiple of 8, got {n_theta}"
        )));
    }
    if n_r == 0 || !(r_c > 0.0) || !(half_width > r_c) || !stretch.is_finite() {
        return Err(MeshError::Generator("invalid cylinder mesh parameters".into()));
    }
    let w = half_width;
    let perimeter_point = |s: f64| {
        // Arc length from (w, 0) counter-clockwise, in units of w.
        let d = 8.0 * s;
        if d <= 1.0 {
            [w, d * w]
        } else if d <= 3.0 {
            [w - (d - 1.0) * w, w]
        } else if d <= 5.0 {
            [-w, w - (d - 3.0) * w]
        } else if d <= 7.0 {
            [-w + (d - 5.0) * w, -w]
        } else {
            [w, -w + (d - 7.0) * w]
        }
    };
    let radial = |t: f64| {
        if stretch.abs() < 1e-12 {
            t
        } else {
            (stretch * t).exp_m1() / stretch.exp_m1()
        }
    };
    let (vertices, triangles) = mapped_grid(n_theta, n_r, Pattern::Alternating, true, |i, j| {
        let phi = 2.0 * PI * i as f64 / n_theta as f64;
        let inner = [r_c * phi.cos(), r_c * phi.sin()];
        let outer = perimeter_point(i as f64 / n_theta as f64);
        let f = radial(j as f64 / n_r as f64);
        [inner[0] + f * (outer[0] - inner[0]), inner[1] + f * (outer[1] - inner[1])]
    });
    let tol = 1e-9 * w;
    let boundary = tag_boundary_edges(&vertices, &triangles, |a, b| {
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        if (m[0] * m[0] + m[1] * m[1]).sqrt() < 0.5 * (r_c + w) {
            BoundaryTag::Wall
        } else if (a[0] - w).abs() < tol && (b[0] - w).abs() < tol {
            BoundaryTag::Outflow
        } else {
            BoundaryTag::Inflow
        }
    });
    Ok(MeshData {
        vertices,
        triangles,
        boundary,
    })
}

/// Upstream half of an annulus around `center`: angles from pi/2 to 3pi/2.
///
/// Tags: inner arc wall, outer arc inflow, the two straight cuts outflow.
pub fn half_annulus_mesh(
    center: [f64; 2],
    r_in: f64,
    r_out: f64,
    n_theta: usize,
    n_r: usize,
) -> Result<MeshData, MeshError> {
    if n_theta < 2 || n_r == 0 || !(r_in > 0.0) || !(r_out > r_in) {
        return Err(MeshError::Generator("invalid half-annulus parameters".into()));
    }
    let (vertices, triangles) = mapped_grid(n_theta, n_r, Pattern::Alternating, false, |i, j| {
        let phi = 0.5 * PI + PI * i as f64 / n_theta as f64;
        let r = r_in + (r_out - r_in) * j as f64 / n_r as f64;
        let (s, c) = phi.sin_cos();
        // Snap the straight cuts onto x = center.x exactly.
        let x = if i == 0 || i == n_theta { center[0] } else { center[0] + r * c };
        [x, center[1] + r * s]
    });
    let tol = 1e-9 * r_out;
    let boundary = tag_boundary_edges(&vertices, &triangles, |a, b| {
        let m = [0.5 * (a[0] + b[0]) - center[0], 0.5 * (a[1] + b[1]) - center[1]];
        if (a[0] - center[0]).abs() < tol && (b[0] - center[0]).abs() < tol {
            BoundaryTag::Outflow
        } else if (m[0] * m[0] + m[1] * m[1]).sqrt() < 0.5 * (r_in + r_out) {
            BoundaryTag::Wall
        } else {
            BoundaryTag::Inflow
        }
    });
    Ok(MeshData {
        vertices,
        triangles,
        boundary,
    })
}

/// Tank `[-1, 0] x [-1, 1]` joined to a plate `[0, 2] x [-1, 1]` through a gate
/// `|y| < gate_half_width` in a thin wall at `x = 0`.
///
/// The wall is represented by duplicating the vertices of `x = 0` outside the
/// gate, so the two sides share no edge there. Tags: wall around the tank and
/// on both faces of the dividing wall, outflow around the plate.
pub fn dambreak_mesh(cells_per_meter: usize, gate_half_width: f64) -> Result<MeshData, MeshError> {
    let n = cells_per_meter;
    if n == 0 || !(gate_half_width > 0.0 && gate_half_width < 1.0) {
        return Err(MeshError::Generator("invalid dam-break mesh parameters".into()));
    }
    let (nx, ny) = (3 * n, 2 * n);
    let base = generate_structured([-1.0, 2.0, -1.0, 1.0], nx, ny, Pattern::Alternating, Sides::all(crate::mesh::Side::Wall))?;
    let mut vertices = base.vertices;
    let cols = nx + 1;
    let i_wall = n;
    let y = |j: usize| -1.0 + j as f64 / n as f64;
    // A wall vertex is duplicated unless it lies inside the open gate.
    let gap = 1e-9 / n as f64;
    let mut dup = vec![usize::MAX; ny + 1];
    for (j, d) in dup.iter_mut().enumerate() {
        if y(j).abs() > gate_half_width + gap {
            *d = vertices.len();
            vertices.push(vertices[j * cols + i_wall]);
        }
    }
    if dup.iter().all(|&d| d != usize::MAX) {
        return Err(MeshError::Generator("gate narrower than one cell".into()));
    }
    let mut triangles = base.triangles;
    for t in triangles.iter_mut() {
        let on_plate = t.iter().any(|&v| v % cols > i_wall);
        if on_plate {
            for v in t.iter_mut() {
                if *v % cols == i_wall && dup[*v / cols] != usize::MAX {
                    *v = dup[*v / cols];
                }
            }
        }
    }
    let tol = 1e-9;
    let boundary = tag_boundary_edges(&vertices, &triangles, |a, b| {
        let mx = 0.5 * (a[0] + b[0]);
        if mx < tol || (a[0].abs() < tol && b[0].abs() < tol) {
            BoundaryTag::Wall
        } else {
            BoundaryTag::Outflow
        }
    });
    Ok(MeshData {
        vertices,
        triangles,
        boundary,
    })
}
