//! Primal triangulation, edge-based dual mesh, generators and file format.

mod dual;
mod format;
mod generate;
mod primal;

pub use crate::error::MeshError;
pub use dual::{build_dual, BoundaryFace, DualCell, DualFace, DualMesh, SubTriangle};
pub use format::{parse_mesh, read_mesh, write_mesh, write_mesh_string};
pub use generate::{generate_structured, mapped_grid, tag_boundary_edges, Pattern, Side, Sides};
pub use primal::{build_primal, BoundarySegment, BoundaryTag, Edge, MeshData, PrimalMesh};

/// Primal and dual mesh built together; immutable after construction.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub primal: PrimalMesh,
    pub dual: DualMesh,
}

impl Mesh {
    pub fn new(data: MeshData) -> Result<Self, MeshError> {
        let primal = build_primal(data)?;
        let dual = build_dual(&primal)?;
        Ok(Mesh { primal, dual })
    }

    /// Smallest CFL length over all dual cells.
    pub fn min_incircle(&self) -> f64 {
        self.dual
            .cells
            .iter()
            .map(|c| c.incircle)
            .fold(f64::INFINITY, f64::min)
    }

    /// Primal vertex nearest to `p` (ties broken by lowest index).
    pub fn nearest_vertex(&self, p: [f64; 2]) -> usize {
        let p = crate::geom::Vec2::from(p);
        let mut best = (f64::INFINITY, 0);
        for (v, x) in self.primal.vertices.iter().enumerate() {
            let d = (*x - p).norm_sq();
            if d < best.0 {
                best = (d, v);
            }
        }
        best.1
    }
}
