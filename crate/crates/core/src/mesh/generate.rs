use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{BoundarySegment, BoundaryTag, MeshData, MeshError};

/// How each quad of a structured grid is split into two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pattern {
    /// Every quad split along the same (south-west to north-east) diagonal.
    #[default]
    Uniform,
    /// Diagonal direction alternates in a checkerboard.
    Alternating,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::Uniform => "uniform",
            Pattern::Alternating => "alternating",
        })
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Pattern::Uniform),
            "alternating" => Ok(Pattern::Alternating),
            _ => Err(format!("unknown split pattern `{s}`")),
        }
    }
}

/// Boundary condition kind for one side of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Wall,
    Inflow,
    Outflow,
    Exact,
    /// Glued to the opposite side.
    Periodic,
}

impl Side {
    fn tag(self) -> BoundaryTag {
        match self {
            Side::Wall => BoundaryTag::Wall,
            Side::Inflow => BoundaryTag::Inflow,
            Side::Outflow => BoundaryTag::Outflow,
            Side::Exact => BoundaryTag::Exact,
            Side::Periodic => unreachable!("periodic sides get paired ids"),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Wall => "wall",
            Side::Inflow => "inflow",
            Side::Outflow => "outflow",
            Side::Exact => "exact",
            Side::Periodic => "periodic",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(Side::Wall),
            "inflow" => Ok(Side::Inflow),
            "outflow" => Ok(Side::Outflow),
            "exact" => Ok(Side::Exact),
            "periodic" => Ok(Side::Periodic),
            _ => Err(format!("unknown side condition `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sides {
    pub left: Side,
    pub right: Side,
    pub bottom: Side,
    pub top: Side,
}

impl Sides {
    pub fn all(side: Side) -> Self {
        Sides {
            left: side,
            right: side,
            bottom: side,
            top: side,
        }
    }

    /// `x_side` on left/right, `y_side` on bottom/top.
    pub fn xy(x_side: Side, y_side: Side) -> Self {
        Sides {
            left: x_side,
            right: x_side,
            bottom: y_side,
            top: y_side,
        }
    }
}

/// Logical `nx` by `ny` grid of quads mapped through `map(i, j)`.
///
/// With `wrap_x` the column `i = nx` is identified with `i = 0` (used for
/// O-grids); the mapping is then only evaluated for `i < nx`.
pub fn mapped_grid(
    nx: usize,
    ny: usize,
    pattern: Pattern,
    wrap_x: bool,
    map: impl Fn(usize, usize) -> [f64; 2],
) -> (Vec<[f64; 2]>, Vec<[usize; 3]>) {
    let cols = if wrap_x { nx } else { nx + 1 };
    let id = |i: usize, j: usize| j * cols + if wrap_x { i % nx } else { i };
    let mut vertices = Vec::with_capacity(cols * (ny + 1));
    for j in 0..=ny {
        for i in 0..cols {
            vertices.push(map(i, j));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            let flip = pattern == Pattern::Alternating && (i + j) % 2 == 1;
            if flip {
                triangles.push([v00, v10, v01]);
                triangles.push([v10, v11, v01]);
            } else {
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }
    }
    (vertices, triangles)
}

/// Split-quad triangulation of `[xmin, xmax] x [ymin, ymax]`.
///
/// Periodic sides are paired edge by edge; each pair gets its own id.
pub fn generate_structured(
    bounds: [f64; 4],
    nx: usize,
    ny: usize,
    pattern: Pattern,
    sides: Sides,
) -> Result<MeshData, MeshError> {
    let [xmin, xmax, ymin, ymax] = bounds;
    if nx == 0 || ny == 0 {
        return Err(MeshError::Generator("nx and ny must be at least 1".into()));
    }
    if !(xmax > xmin && ymax > ymin) || bounds.iter().any(|v| !v.is_finite()) {
        return Err(MeshError::Generator(format!("invalid bounds {bounds:?}")));
    }
    if (sides.left == Side::Periodic) != (sides.right == Side::Periodic)
        || (sides.bottom == Side::Periodic) != (sides.top == Side::Periodic)
    {
        return Err(MeshError::Generator(
            "periodic sides must come in opposite pairs".into(),
        ));
    }
    let dx = (xmax - xmin) / nx as f64;
    let dy = (ymax - ymin) / ny as f64;
    // Boundary rows use the exact bound values so periodic pairs match.
    let coord = |i: usize, n: usize, lo: f64, hi: f64, d: f64| {
        if i == n {
            hi
        } else {
            lo + i as f64 * d
        }
    };
    let (vertices, triangles) = mapped_grid(nx, ny, pattern, false, |i, j| {
        [coord(i, nx, xmin, xmax, dx), coord(j, ny, ymin, ymax, dy)]
    });
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut boundary = Vec::with_capacity(2 * (nx + ny));
    let mut push = |a, b, side: Side, pair: u32| {
        let tag = match side {
            Side::Periodic => BoundaryTag::Periodic(pair),
            s => s.tag(),
        };
        boundary.push(BoundarySegment { a, b, tag });
    };
    for i in 0..nx {
        let pair = i as u32;
        push(id(i, 0), id(i + 1, 0), sides.bottom, pair);
        push(id(i + 1, ny), id(i, ny), sides.top, pair);
    }
    for j in 0..ny {
        let pair = (nx + j) as u32;
        push(id(nx, j), id(nx, j + 1), sides.right, pair);
        push(id(0, j + 1), id(0, j), sides.left, pair);
    }
    Ok(MeshData {
        vertices,
        triangles,
        boundary,
    })
}

/// Tags every edge used by exactly one triangle with `tag(a, b)`.
///
/// Segments are returned in first-seen order, with endpoints as they appear
/// in the owning triangle.
pub fn tag_boundary_edges(
    vertices: &[[f64; 2]],
    triangles: &[[usize; 3]],
    tag: impl Fn([f64; 2], [f64; 2]) -> BoundaryTag,
) -> Vec<BoundarySegment> {
    let mut count: HashMap<(usize, usize), (usize, usize, usize)> = HashMap::new();
    let mut order = Vec::new();
    for t in triangles {
        for m in 0..3 {
            let (a, b) = (t[m], t[(m + 1) % 3]);
            let key = (a.min(b), a.max(b));
            let e = count.entry(key).or_insert_with(|| {
                order.push(key);
                (a, b, 0)
            });
            e.2 += 1;
        }
    }
    order
        .into_iter()
        .filter_map(|key| {
            let (a, b, n) = count[&key];
            (n == 1).then(|| BoundarySegment {
                a,
                b,
                tag: tag(vertices[a], vertices[b]),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;

    #[test]
    fn single_quad() {
        let d = generate_structured([0.0, 1.0, 0.0, 1.0], 1, 1, Pattern::Uniform, Sides::all(Side::Wall))
            .unwrap();
        assert_eq!(d.vertices.len(), 4);
        assert_eq!(d.triangles.len(), 2);
        assert_eq!(d.boundary.len(), 4);
    }

    #[test]
    fn counts_and_area_32() {
        let d = generate_structured(
            [-5.0, 5.0, -5.0, 5.0],
            32,
            32,
            Pattern::Uniform,
            Sides::all(Side::Wall),
        )
        .unwrap();
        let n = 32usize;
        assert_eq!(d.vertices.len(), (n + 1) * (n + 1));
        assert_eq!(d.triangles.len(), 2 * n * n);
        let m = Mesh::new(d).unwrap();
        assert!((m.primal.total_area() - 100.0).abs() <= 1e-12 * 100.0);
    }

    #[test]
    fn spacing() {
        let d = generate_structured([0.0, 2.0, 0.0, 0.2], 400, 40, Pattern::Uniform, Sides::all(Side::Wall))
            .unwrap();
        assert!((d.vertices[1][0] - d.vertices[0][0] - 0.005).abs() < 1e-15);
    }

    #[test]
    fn periodic_torus() {
        for pattern in [Pattern::Uniform, Pattern::Alternating] {
            let d = generate_structured([0.0, 1.0, 0.0, 1.0], 4, 4, pattern, Sides::all(Side::Periodic))
                .unwrap();
            let m = Mesh::new(d).unwrap();
            assert_eq!(m.primal.num_vertices(), 16);
            assert!(m.primal.boundary_edges.is_empty());
            assert_eq!(m.primal.num_edges(), 3 * 16);
            m.primal.check_invariants().unwrap();
        }
    }

    #[test]
    fn too_coarse_periodic_is_rejected() {
        let d = generate_structured([0.0, 1.0, 0.0, 1.0], 2, 4, Pattern::Uniform, Sides::all(Side::Periodic))
            .unwrap();
        assert!(Mesh::new(d).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_structured([0.0, 1.0, 0.0, 1.0], 0, 1, Pattern::Uniform, Sides::all(Side::Wall)).is_err());
        assert!(generate_structured([1.0, 0.0, 0.0, 1.0], 1, 1, Pattern::Uniform, Sides::all(Side::Wall)).is_err());
        let lopsided = Sides { left: Side::Periodic, ..Sides::all(Side::Wall) };
        assert!(generate_structured([0.0, 1.0, 0.0, 1.0], 3, 3, Pattern::Uniform, lopsided).is_err());
    }
}
