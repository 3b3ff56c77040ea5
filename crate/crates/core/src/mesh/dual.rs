use crate::geom::{incircle_diameter, signed_area2, Vec2};

use super::{BoundaryTag, MeshError, PrimalMesh};

/// One part of a dual cell: the subtriangle of element `element` built on
/// the edge opposite corner `local`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubTriangle {
    pub element: usize,
    pub local: usize,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualCell {
    pub area: f64,
    /// Node position (midpoint of the owning primal edge).
    pub node: Vec2,
    pub subs: Vec<SubTriangle>,
    /// Smallest subtriangle incircle diameter, used by the time step rule.
    pub incircle: f64,
}

/// Interface between two dual cells inside primal element `element`.
///
/// The interface is the segment from the element barycenter to one corner.
/// `normal` points from `i` to `j` and carries the segment length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualFace {
    pub i: usize,
    pub j: usize,
    pub element: usize,
    pub normal: Vec2,
    pub midpoint: Vec2,
    /// `midpoint - N_i` and `midpoint - N_j` in the element's frame.
    pub to_face_i: Vec2,
    pub to_face_j: Vec2,
    /// Distance between the two dual nodes.
    pub node_distance: f64,
    /// Element on the far side of cell `i` (resp. `j`), if any.
    pub other_i: Option<usize>,
    pub other_j: Option<usize>,
}

/// Part of a dual cell boundary lying on the domain boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFace {
    pub cell: usize,
    /// Outward normal scaled by the edge length.
    pub normal: Vec2,
    pub tag: BoundaryTag,
}

/// Edge-based staggered mesh. Dual cell `i` belongs to primal edge `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMesh {
    pub cells: Vec<DualCell>,
    pub faces: Vec<DualFace>,
    pub boundary_faces: Vec<BoundaryFace>,
    /// Subtriangle area of each element per local edge.
    pub element_sub_areas: Vec<[f64; 3]>,
}

pub fn build_dual(primal: &PrimalMesh) -> Result<DualMesh, MeshError> {
    let ne = primal.num_edges();
    let mut cells: Vec<DualCell> = (0..ne)
        .map(|i| {
            let (a, b) = primal.edge_endpoints_in(i, primal.edges[i].left);
            DualCell {
                area: 0.0,
                node: a.midpoint(b),
                subs: Vec::with_capacity(2),
                incircle: f64::INFINITY,
            }
        })
        .collect();
    let mut element_sub_areas = vec![[0.0; 3]; primal.num_triangles()];
    let mut faces = Vec::with_capacity(3 * primal.num_triangles());

    for (k, c) in primal.corners.iter().enumerate() {
        let g = primal.barycenters[k];
        let te = primal.triangle_edges[k];
        for m in 0..3 {
            let (p, q) = (c[(m + 1) % 3], c[(m + 2) % 3]);
            let area = 0.5 * signed_area2(p, q, g);
            let cell = te[m];
            if !(area > 0.0) {
                return Err(MeshError::DegenerateDual(cell));
            }
            element_sub_areas[k][m] = area;
            let cd = &mut cells[cell];
            cd.subs.push(SubTriangle {
                element: k,
                local: m,
                area,
            });
            cd.incircle = cd.incircle.min(incircle_diameter(p, q, g));
        }
        for corner in 0..3 {
            let la = (corner + 1) % 3;
            let lb = (corner + 2) % 3;
            let (i, j) = (te[la], te[lb]);
            let v = c[corner];
            let normal = (g - v).perp_cw();
            let midpoint = g.midpoint(v);
            let n_i = c[(la + 1) % 3].midpoint(c[(la + 2) % 3]);
            let n_j = c[(lb + 1) % 3].midpoint(c[(lb + 2) % 3]);
            let other = |cell: usize| {
                let e = &primal.edges[cell];
                if e.left == k {
                    e.right
                } else {
                    Some(e.left)
                }
            };
            faces.push(DualFace {
                i,
                j,
                element: k,
                normal,
                midpoint,
                to_face_i: midpoint - n_i,
                to_face_j: midpoint - n_j,
                node_distance: (n_j - n_i).norm(),
                other_i: other(i),
                other_j: other(j),
            });
        }
    }
    for cell in &mut cells {
        cell.area = cell.subs.iter().map(|s| s.area).sum();
    }
    let boundary_faces = primal
        .boundary_edges
        .iter()
        .map(|&i| BoundaryFace {
            cell: i,
            normal: primal.boundary_normal(i),
            tag: primal.edges[i].tag.expect("boundary edge carries a tag"),
        })
        .collect();
    Ok(DualMesh {
        cells,
        faces,
        boundary_faces,
        element_sub_areas,
    })
}

impl DualMesh {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    pub fn areas(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.area).collect()
    }

    /// Sum of outward weighted normals and of their lengths, per cell.
    pub fn normal_closure(&self) -> Vec<(Vec2, f64)> {
        let mut acc = vec![(Vec2::ZERO, 0.0); self.num_cells()];
        for f in &self.faces {
            let len = f.normal.norm();
            acc[f.i].0 += f.normal;
            acc[f.i].1 += len;
            acc[f.j].0 -= f.normal;
            acc[f.j].1 += len;
        }
        for b in &self.boundary_faces {
            acc[b.cell].0 += b.normal;
            acc[b.cell].1 += b.normal.norm();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_primal, BoundarySegment, MeshData};

    fn shoelace(p: &[Vec2]) -> f64 {
        let mut s = 0.0;
        for a in 0..p.len() {
            let b = (a + 1) % p.len();
            s += p[a].x * p[b].y - p[b].x * p[a].y;
        }
        0.5 * s
    }

    fn square() -> PrimalMesh {
        let wall = |a, b| BoundarySegment { a, b, tag: BoundaryTag::Wall };
        build_primal(MeshData {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2], [0, 2, 3]],
            boundary: vec![wall(0, 1), wall(1, 2), wall(2, 3), wall(3, 0)],
        })
        .unwrap()
    }

    #[test]
    fn square_interior_cell_is_one_third() {
        let p = square();
        let d = build_dual(&p).unwrap();
        let interior = p.edges.iter().position(|e| !e.is_boundary()).unwrap();
        // Oracle: quadrilateral (0,0), G_lower, (1,1), G_upper.
        let g1 = Vec2::new(2.0 / 3.0, 1.0 / 3.0);
        let g2 = Vec2::new(1.0 / 3.0, 2.0 / 3.0);
        let quad = shoelace(&[Vec2::new(0.0, 0.0), g1, Vec2::new(1.0, 1.0), g2]);
        assert!((d.cells[interior].area - quad).abs() < 1e-15);
        assert!((quad - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.total_area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_cell_of_right_triangle() {
        let wall = |a, b| BoundarySegment { a, b, tag: BoundaryTag::Wall };
        let p = build_primal(MeshData {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary: vec![wall(0, 1), wall(1, 2), wall(2, 0)],
        })
        .unwrap();
        let d = build_dual(&p).unwrap();
        let i = p
            .edges
            .iter()
            .position(|e| {
                let mut v = e.vertices;
                v.sort();
                v == [0, 1]
            })
            .unwrap();
        let g = Vec2::new(1.0 / 3.0, 1.0 / 3.0);
        let oracle = shoelace(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), g]);
        assert!((d.cells[i].area - oracle).abs() < 1e-15);
        assert!((oracle - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(d.cells[i].node, Vec2::new(0.5, 0.0));
    }

    #[test]
    fn closure_and_partition() {
        let p = square();
        let d = build_dual(&p).unwrap();
        for (s, len) in d.normal_closure() {
            assert!(s.norm() <= 1e-12 * len);
        }
        for (k, subs) in d.element_sub_areas.iter().enumerate() {
            let sum: f64 = subs.iter().sum();
            assert!((sum - p.areas[k]).abs() <= 1e-12 * p.areas[k]);
        }
        assert_eq!(d.faces.len(), 6);
        assert_eq!(d.boundary_faces.len(), 4);
    }
}
