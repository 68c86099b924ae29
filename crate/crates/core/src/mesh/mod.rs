//! Conforming triangulations of convex polygons.
//!
//! Meshes start from a fan around the polygon centre and are refined by red
//! (4-to-1 midpoint) subdivision, so every child is similar to its parent and
//! shape-regularity constants are identical on every level. Children of
//! element `e` are numbered `4e..4e+4`, which makes ancestor lookups across
//! nested levels a shift: `ancestor = e >> (2 * levels_up)`.

mod io;
mod locate;
mod polygon;

use std::collections::HashMap;
use std::sync::OnceLock;

pub use io::{read_mesh, write_mesh};
pub use polygon::ConvexPolygon;

use crate::error::{RitzError, Result};
use locate::Locator;

pub type Point = [f64; 2];

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Affine data of one triangle.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub area: f64,
    /// Gradients of the three barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
    pub diameter: f64,
    pub inradius: f64,
}

impl ElementGeometry {
    fn new(p: [Point; 3]) -> Self {
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
            - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        let area = 0.5 * det;
        let mut grad_lambda = [[0.0; 2]; 3];
        for i in 0..3 {
            let a = p[(i + 1) % 3];
            let b = p[(i + 2) % 3];
            // rotate the opposite edge by -90 degrees
            grad_lambda[i] = [(a[1] - b[1]) / det, (b[0] - a[0]) / det];
        }
        let edges = [dist(p[1], p[2]), dist(p[2], p[0]), dist(p[0], p[1])];
        let diameter = edges.iter().cloned().fold(0.0, f64::max);
        let inradius = 2.0 * area / edges.iter().sum::<f64>();
        Self {
            area,
            grad_lambda,
            diameter,
            inradius,
        }
    }
}

/// An immutable conforming triangulation of a convex polygon.
#[derive(Debug)]
pub struct Triangulation {
    domain: ConvexPolygon,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    level: usize,
    h: f64,
    geometry: Vec<ElementGeometry>,
    locator: OnceLock<Locator>,
}

impl Triangulation {
    /// Assembles a mesh from raw parts, validating orientation and areas.
    pub fn from_parts(
        domain: ConvexPolygon,
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<bool>,
        level: usize,
    ) -> Result<Self> {
        if boundary.len() != vertices.len() {
            return Err(RitzError::InvalidMesh(format!(
                "{} boundary flags for {} vertices",
                boundary.len(),
                vertices.len()
            )));
        }
        let mut geometry = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= vertices.len()) {
                return Err(RitzError::InvalidMesh(format!(
                    "triangle {t} references a missing vertex"
                )));
            }
            let g = ElementGeometry::new([vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]]);
            if !(g.area > 0.0) {
                return Err(RitzError::InvalidMesh(format!(
                    "triangle {t} is not positively oriented (area {:.3e})",
                    g.area
                )));
            }
            geometry.push(g);
        }
        let h = geometry.iter().map(|g| g.diameter).fold(0.0, f64::max);
        Ok(Self {
            domain,
            vertices,
            triangles,
            boundary,
            level,
            h,
            geometry,
            locator: OnceLock::new(),
        })
    }

    pub fn domain(&self) -> &ConvexPolygon {
        &self.domain
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Maximum element diameter.
    pub fn mesh_size(&self) -> f64 {
        self.h
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn geometry(&self, t: usize) -> &ElementGeometry {
        &self.geometry[t]
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn centroid(&self, t: usize) -> Point {
        self.point_at(t, [1.0 / 3.0; 3])
    }

    /// Physical point with barycentric coordinates `bary` in element `t`.
    pub fn point_at(&self, t: usize, bary: [f64; 3]) -> Point {
        let p = self.corners(t);
        [
            bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
            bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
        ]
    }

    /// Barycentric coordinates of `x` with respect to element `t` (not clamped).
    pub fn barycentric(&self, t: usize, x: Point) -> [f64; 3] {
        let g = &self.geometry[t];
        let p0 = self.vertices[self.triangles[t][0]];
        let d = [x[0] - p0[0], x[1] - p0[1]];
        let l1 = g.grad_lambda[1][0] * d[0] + g.grad_lambda[1][1] * d[1];
        let l2 = g.grad_lambda[2][0] * d[0] + g.grad_lambda[2][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// `max_T diam(T) / inradius(T)`.
    pub fn shape_regularity(&self) -> f64 {
        self.geometry
            .iter()
            .map(|g| g.diameter / g.inradius)
            .fold(0.0, f64::max)
    }

    /// `max_T diam(T) / min_T diam(T)`.
    pub fn quasiuniformity(&self) -> f64 {
        let min = self
            .geometry
            .iter()
            .map(|g| g.diameter)
            .fold(f64::INFINITY, f64::min);
        self.h / min
    }

    /// Element containing `x` and its barycentric coordinates, or `None`
    /// outside the domain. Points on shared edges go to the lowest index.
    pub fn locate_point(&self, x: Point) -> Option<(usize, [f64; 3])> {
        self.locator
            .get_or_init(|| Locator::new(self))
            .locate(self, x)
    }

    /// Each undirected edge (sorted vertex pair) with the elements sharing it.
    pub fn edge_map(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                map.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        map
    }

    /// Checks conformity: every edge is shared by at most two elements, edges
    /// owned by a single element lie on the polygon boundary, the Euler
    /// characteristic is that of a disk, and the areas tile the polygon.
    pub fn check_conformity(&self) -> Result<()> {
        let edges = self.edge_map();
        for (&(a, b), owners) in &edges {
            if owners.len() > 2 {
                return Err(RitzError::InvalidMesh(format!(
                    "edge ({a}, {b}) shared by {} elements",
                    owners.len()
                )));
            }
            if owners.len() == 1 {
                let (pa, pb) = (self.vertices[a], self.vertices[b]);
                let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                let tol = 1e-12 * self.domain.diameter();
                let ea = self.domain.boundary_edge_of(pa, tol);
                let on_same = ea.is_some()
                    && self.domain.boundary_edge_of(mid, tol).is_some()
                    && self.domain.boundary_edge_of(pb, tol).is_some();
                if !on_same {
                    return Err(RitzError::InvalidMesh(format!(
                        "edge ({a}, {b}) has one neighbour but is interior (hanging node)"
                    )));
                }
            }
        }
        let euler = self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64;
        if euler != 1 {
            return Err(RitzError::InvalidMesh(format!(
                "Euler characteristic {euler}, expected 1"
            )));
        }
        let area = self.domain.area();
        if (self.total_area() - area).abs() > 1e-12 * area {
            return Err(RitzError::InvalidMesh(format!(
                "element areas sum to {} but the polygon has area {area}",
                self.total_area()
            )));
        }
        Ok(())
    }
}

/// Fan triangulation around the polygon centre (level 0).
pub fn triangulate_polygon(poly: &ConvexPolygon) -> Result<Triangulation> {
    let n = poly.vertices().len();
    let mut vertices = poly.vertices().to_vec();
    vertices.push(poly.center());
    let mut boundary = vec![true; n];
    boundary.push(false);
    let triangles = (0..n).map(|i| [i, (i + 1) % n, n]).collect();
    Triangulation::from_parts(poly.clone(), vertices, triangles, boundary, 0)
}

/// Red refinement: every triangle split into four similar children.
pub fn refine_uniform(mesh: &Triangulation) -> Triangulation {
    let edges = mesh.edge_map();
    let mut vertices = mesh.vertices.clone();
    let mut boundary = mesh.boundary.clone();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());

    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>, boundary: &mut Vec<bool>| {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let (pa, pb) = (vertices[a], vertices[b]);
            vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
            boundary.push(edges[&key].len() == 1);
            vertices.len() - 1
        })
    };

    for &[a, b, c] in &mesh.triangles {
        let ab = mid(a, b, &mut vertices, &mut boundary);
        let bc = mid(b, c, &mut vertices, &mut boundary);
        let ca = mid(c, a, &mut vertices, &mut boundary);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    let mut refined = Triangulation::from_parts(
        mesh.domain.clone(),
        vertices,
        triangles,
        boundary,
        mesh.level + 1,
    )
    .expect("red refinement of a valid mesh is valid");
    // children are similar with ratio 1/2
    refined.h = mesh.h / 2.0;
    refined
}

/// Level-0 fan refined `levels` times.
pub fn mesh_at_level(poly: &ConvexPolygon, levels: usize) -> Result<Triangulation> {
    let mut mesh = triangulate_polygon(poly)?;
    for _ in 0..levels {
        mesh = refine_uniform(&mesh);
    }
    Ok(mesh)
}

/// All meshes from level 0 up to `max_level`.
pub fn mesh_hierarchy(poly: &ConvexPolygon, max_level: usize) -> Result<Vec<std::sync::Arc<Triangulation>>> {
    let mut out = vec![std::sync::Arc::new(triangulate_polygon(poly)?)];
    for _ in 0..max_level {
        let next = refine_uniform(out.last().unwrap());
        out.push(std::sync::Arc::new(next));
    }
    Ok(out)
}
