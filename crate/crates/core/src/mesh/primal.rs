use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::geom::{p1_gradients, signed_area2, Vec2};

use super::MeshError;

/// Boundary condition label carried by every boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Wall,
    Inflow,
    Outflow,
    /// Prescribed exact state (free surface and momentum).
    Exact,
    /// Edges sharing an id are glued together.
    Periodic(u32),
}

impl BoundaryTag {
    pub fn is_periodic(self) -> bool {
        matches!(self, BoundaryTag::Periodic(_))
    }

    /// Boundaries where the momentum is prescribed from case data.
    pub fn is_prescribed(self) -> bool {
        matches!(self, BoundaryTag::Inflow | BoundaryTag::Exact)
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryTag::Wall => f.write_str("wall"),
            BoundaryTag::Inflow => f.write_str("inflow"),
            BoundaryTag::Outflow => f.write_str("outflow"),
            BoundaryTag::Exact => f.write_str("exact"),
            BoundaryTag::Periodic(id) => write!(f, "periodic:{id}"),
        }
    }
}

impl FromStr for BoundaryTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wall" => Ok(BoundaryTag::Wall),
            "inflow" => Ok(BoundaryTag::Inflow),
            "outflow" => Ok(BoundaryTag::Outflow),
            "exact" => Ok(BoundaryTag::Exact),
            other => match other.strip_prefix("periodic:") {
                Some(id) => id
                    .parse()
                    .map(BoundaryTag::Periodic)
                    .map_err(|_| format!("bad periodic id in tag `{other}`")),
                None => Err(format!("unknown boundary tag `{other}`")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySegment {
    pub a: usize,
    pub b: usize,
    pub tag: BoundaryTag,
}

/// Raw triangulation as read from a mesh file or produced by a generator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeshData {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<BoundarySegment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoints, counterclockwise as seen from `left`.
    pub vertices: [usize; 2],
    pub left: usize,
    pub right: Option<usize>,
    /// Local index (opposite corner) of this edge in `left` and `right`.
    pub local: [usize; 2],
    /// `None` for interior (including glued periodic) edges.
    pub tag: Option<BoundaryTag>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

/// Validated primal triangulation.
///
/// Periodic boundary pairs are glued on construction: their vertices are
/// merged and the paired edges become interior edges. Geometry is always
/// evaluated from `corners`, the unwrapped coordinates each triangle sees,
/// so elements straddling a periodic seam stay well shaped.
#[derive(Debug, Clone)]
pub struct PrimalMesh {
    pub vertices: Vec<Vec2>,
    pub triangles: Vec<[usize; 3]>,
    pub corners: Vec<[Vec2; 3]>,
    pub edges: Vec<Edge>,
    /// Edge opposite each corner.
    pub triangle_edges: Vec<[usize; 3]>,
    pub areas: Vec<f64>,
    pub barycenters: Vec<Vec2>,
    /// Constant gradients of the P1 basis on each triangle.
    pub grads: Vec<[Vec2; 3]>,
    pub boundary_edges: Vec<usize>,
    /// Input triangulation with orientation normalized.
    pub source: MeshData,
    pub source_to_vertex: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Validate a raw triangulation and build connectivity and geometry.
pub fn build_primal(mut data: MeshData) -> Result<PrimalMesh, MeshError> {
    let nv = data.vertices.len();
    if nv < 3 || data.triangles.is_empty() {
        return Err(MeshError::TooSmall);
    }
    if let Some(i) = data
        .vertices
        .iter()
        .position(|p| !p[0].is_finite() || !p[1].is_finite())
    {
        return Err(MeshError::NonFiniteVertex(i));
    }
    let pts: Vec<Vec2> = data.vertices.iter().map(|&p| p.into()).collect();

    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let scale = (hi - lo).norm_sq();

    let mut seen: HashMap<[usize; 3], usize> = HashMap::new();
    for (k, t) in data.triangles.iter_mut().enumerate() {
        for &v in t.iter() {
            if v >= nv {
                return Err(MeshError::IndexOutOfRange {
                    triangle: k,
                    index: v,
                });
            }
        }
        let a2 = signed_area2(pts[t[0]], pts[t[1]], pts[t[2]]);
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || a2.abs() <= 1e-14 * scale {
            return Err(MeshError::ZeroArea(k));
        }
        if a2 < 0.0 {
            t.swap(1, 2);
        }
        let mut sorted = *t;
        sorted.sort_unstable();
        if let Some(&first) = seen.get(&sorted) {
            return Err(MeshError::DuplicateTriangle(k, first));
        }
        seen.insert(sorted, k);
    }

    // (triangle, local edge) incidences per undirected source edge.
    let mut source_edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (k, t) in data.triangles.iter().enumerate() {
        for m in 0..3 {
            let (a, b) = (t[(m + 1) % 3], t[(m + 2) % 3]);
            let inc = source_edges.entry(key(a, b)).or_default();
            inc.push((k, m));
            if inc.len() > 2 {
                return Err(MeshError::NonManifoldEdge(a, b));
            }
        }
    }

    let mut tags: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
    for seg in &data.boundary {
        let k = key(seg.a, seg.b);
        match source_edges.get(&k) {
            Some(inc) if inc.len() == 1 => {}
            Some(_) => {
                return Err(MeshError::InvalidBoundary(format!(
                    "segment ({}, {}) is an interior edge",
                    seg.a, seg.b
                )))
            }
            None => {
                return Err(MeshError::InvalidBoundary(format!(
                    "segment ({}, {}) is not a mesh edge",
                    seg.a, seg.b
                )))
            }
        }
        if tags.insert(k, seg.tag).is_some() {
            return Err(MeshError::InvalidBoundary(format!(
                "segment ({}, {}) tagged twice",
                seg.a, seg.b
            )));
        }
    }
    for (&(a, b), inc) in &source_edges {
        if inc.len() == 1 && !tags.contains_key(&(a, b)) {
            return Err(MeshError::UntaggedBoundary(a, b));
        }
    }

    // Periodic pairing by id.
    let mut periodic: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for seg in &data.boundary {
        if let BoundaryTag::Periodic(id) = seg.tag {
            periodic.entry(id).or_default().push((seg.a, seg.b));
        }
    }
    let mut uf = UnionFind((0..nv).collect());
    for (&id, segs) in &periodic {
        if segs.len() != 2 {
            return Err(MeshError::Periodic(
                id,
                format!("expected 2 segments, found {}", segs.len()),
            ));
        }
        let (a1, b1) = segs[0];
        let (a2, b2) = segs[1];
        let len1 = (pts[b1] - pts[a1]).norm();
        let len2 = (pts[b2] - pts[a2]).norm();
        if (len1 - len2).abs() > 1e-12 * len1.max(len2) {
            return Err(MeshError::Periodic(id, "segment lengths differ".into()));
        }
        let tol = 1e-9 * len1;
        let shift = pts[a2] - pts[a1];
        if ((pts[b2] - pts[b1]) - shift).norm() <= tol {
            uf.union(a1, a2);
            uf.union(b1, b2);
        } else {
            let shift = pts[b2] - pts[a1];
            if ((pts[a2] - pts[b1]) - shift).norm() <= tol {
                uf.union(a1, b2);
                uf.union(b1, a2);
            } else {
                return Err(MeshError::Periodic(
                    id,
                    "segments are not translates of each other".into(),
                ));
            }
        }
    }

    let mut source_to_vertex = vec![usize::MAX; nv];
    let mut vertices = Vec::new();
    for v in 0..nv {
        let root = uf.find(v);
        if source_to_vertex[root] == usize::MAX {
            source_to_vertex[root] = vertices.len();
            vertices.push(pts[root]);
        }
        source_to_vertex[v] = source_to_vertex[root];
    }

    let triangles: Vec<[usize; 3]> = data
        .triangles
        .iter()
        .map(|t| t.map(|v| source_to_vertex[v]))
        .collect();
    for (k, t) in triangles.iter().enumerate() {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(MeshError::Periodic(
                0,
                format!("triangle {k} collapses after gluing; mesh too coarse across a periodic direction"),
            ));
        }
    }
    let corners: Vec<[Vec2; 3]> = data
        .triangles
        .iter()
        .map(|t| t.map(|v| pts[v]))
        .collect();

    let mut edges = Vec::new();
    let mut pending: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    let mut glued: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (&k, inc) in &source_edges {
        let (left, ll) = inc[0];
        if inc.len() == 2 {
            let (right, rl) = inc[1];
            glued.push((left, ll, right, rl));
            continue;
        }
        match tags[&k] {
            BoundaryTag::Periodic(id) => {
                if let Some((other, ol)) = pending.remove(&id) {
                    glued.push((other, ol, left, ll));
                } else {
                    pending.insert(id, (left, ll));
                }
            }
            tag => {
                let t = triangles[left];
                edges.push(Edge {
                    vertices: [t[(ll + 1) % 3], t[(ll + 2) % 3]],
                    left,
                    right: None,
                    local: [ll, usize::MAX],
                    tag: Some(tag),
                });
            }
        }
    }
    for (left, ll, right, rl) in glued {
        let t = triangles[left];
        edges.push(Edge {
            vertices: [t[(ll + 1) % 3], t[(ll + 2) % 3]],
            left,
            right: Some(right),
            local: [ll, rl],
            tag: None,
        });
    }
    // Canonical order: by merged endpoint pair.
    edges.sort_by_key(|e| (key(e.vertices[0], e.vertices[1]), e.left));
    let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
    let mut merged_keys = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        if merged_keys.insert(key(e.vertices[0], e.vertices[1]), i).is_some() {
            return Err(MeshError::NonManifoldEdge(e.vertices[0], e.vertices[1]));
        }
        triangle_edges[e.left][e.local[0]] = i;
        if let Some(r) = e.right {
            triangle_edges[r][e.local[1]] = i;
        }
    }
    let boundary_edges: Vec<usize> = (0..edges.len())
        .filter(|&i| edges[i].is_boundary())
        .collect();

    let areas: Vec<f64> = corners
        .iter()
        .map(|c| 0.5 * signed_area2(c[0], c[1], c[2]))
        .collect();
    let barycenters = corners
        .iter()
        .map(|c| (c[0] + c[1] + c[2]) * (1.0 / 3.0))
        .collect();
    let grads = corners.iter().map(p1_gradients).collect();

    Ok(PrimalMesh {
        vertices,
        triangles,
        corners,
        edges,
        triangle_edges,
        areas,
        barycenters,
        grads,
        boundary_edges,
        source: data,
        source_to_vertex,
    })
}

impl PrimalMesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Endpoints of edge `i` in the coordinate frame of triangle `k`.
    pub fn edge_endpoints_in(&self, i: usize, k: usize) -> (Vec2, Vec2) {
        let m = self.local_edge_index(i, k);
        let c = &self.corners[k];
        (c[(m + 1) % 3], c[(m + 2) % 3])
    }

    /// Local index of edge `i` inside triangle `k`.
    pub fn local_edge_index(&self, i: usize, k: usize) -> usize {
        let e = &self.edges[i];
        if e.left == k {
            e.local[0]
        } else {
            debug_assert_eq!(e.right, Some(k));
            e.local[1]
        }
    }

    /// Length-weighted outward normal of a boundary edge.
    pub fn boundary_normal(&self, i: usize) -> Vec2 {
        let (a, b) = self.edge_endpoints_in(i, self.edges[i].left);
        (b - a).perp_cw()
    }

    /// Lumped (row-sum) mass of every vertex.
    pub fn lumped_mass(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.num_vertices()];
        for (t, &a) in self.triangles.iter().zip(&self.areas) {
            for &v in t {
                m[v] += a / 3.0;
            }
        }
        m
    }

    /// Check the structural invariants; returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (k, &a) in self.areas.iter().enumerate() {
            if a <= 0.0 {
                return Err(format!("triangle {k} has non-positive area {a}"));
            }
        }
        let mut count = vec![0usize; self.edges.len()];
        for te in &self.triangle_edges {
            for &i in te {
                count[i] += 1;
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let expected = if e.is_boundary() { 1 } else { 2 };
            if count[i] != expected {
                return Err(format!("edge {i} touches {} triangles", count[i]));
            }
            if e.is_boundary() != e.tag.is_some() {
                return Err(format!("edge {i} tag/boundary mismatch"));
            }
        }
        Ok(())
    }
}
