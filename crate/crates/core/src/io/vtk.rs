//! Legacy ASCII VTK snapshots.

use std::fmt::Write as _;
use std::path::Path;

use crate::geom::Vec2;
use crate::mesh::Mesh;
use crate::state::State;

/// Momentum at the vertices: inverse-distance average over the dual cells of
/// the incident edges. The distance to an edge midpoint is half the edge
/// length, measured in the element frame so periodic edges work too.
pub fn momentum_at_vertices(mesh: &Mesh, state: &State) -> Vec<Vec2> {
    let primal = &mesh.primal;
    let nv = primal.num_vertices();
    let mut sum = vec![Vec2::ZERO; nv];
    let mut weight = vec![0.0; nv];
    for (i, e) in primal.edges.iter().enumerate() {
        let c = primal.corners[e.left];
        let k = e.local[0];
        let half = 0.5 * (c[(k + 1) % 3] - c[(k + 2) % 3]).norm();
        let w = 1.0 / half;
        for &v in &e.vertices {
            sum[v] += state.q[i] * w;
            weight[v] += w;
        }
    }
    sum.iter().zip(&weight).map(|(&s, &w)| s * (1.0 / w)).collect()
}

fn num(s: &mut String, v: f64) {
    let _ = write!(s, "{v:.8e}");
}

/// VTK unstructured grid with point data `eta`, `b`, `h` and `q`.
pub fn write_vtk_string(mesh: &Mesh, state: &State, title: &str) -> String {
    let primal = &mesh.primal;
    let nv = primal.num_vertices();
    let nt = primal.triangles.len();
    let mut s = String::new();
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    let _ = write!(s, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS {nv} double\n");
    for p in &primal.vertices {
        num(&mut s, p.x);
        s.push(' ');
        num(&mut s, p.y);
        s.push_str(" 0\n");
    }
    let _ = writeln!(s, "CELLS {nt} {}", 4 * nt);
    for t in &primal.triangles {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "POINT_DATA {nv}");
    let h: Vec<f64> = (0..nv).map(|v| state.h_vertex(v)).collect();
    for (name, field) in [("eta", &state.eta), ("b", &state.b_vertex), ("h", &h)] {
        let _ = write!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default\n");
        for &v in field.iter() {
            num(&mut s, v);
            s.push('\n');
        }
    }
    s.push_str("VECTORS q double\n");
    for q in momentum_at_vertices(mesh, state) {
        num(&mut s, q.x);
        s.push(' ');
        num(&mut s, q.y);
        s.push_str(" 0\n");
    }
    s
}

pub fn write_vtk(mesh: &Mesh, state: &State, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, write_vtk_string(mesh, state, &format!("t = {:?}", state.t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{BoundarySegment, BoundaryTag, MeshData};

    fn two_triangles() -> Mesh {
        let tag = BoundaryTag::Wall;
        Mesh::new(MeshData {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2], [0, 2, 3]],
            boundary: [(0, 1), (1, 2), (2, 3), (3, 0)]
                .into_iter()
                .map(|(a, b)| BoundarySegment { a, b, tag })
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn counts_and_header() {
        let m = two_triangles();
        let s = State::from_fields(&m, |_| 0.0, |_| 1.0, |_| Vec2::ZERO);
        let text = write_vtk_string(&m, &s, "x");
        assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(text.contains("POINTS 4 double\n"));
        assert!(text.contains("CELLS 2 8\n"));
        assert!(text.contains("POINT_DATA 4\n"));
    }

    #[test]
    fn uniform_momentum_is_reproduced() {
        let m = two_triangles();
        let q = Vec2::new(0.25, -1.5);
        let s = State::from_fields(&m, |_| 0.0, |_| 1.0, |_| q);
        for v in momentum_at_vertices(&m, &s) {
            assert!((v - q).norm() < 1e-15);
        }
    }
}
