use crate::error::{RitzError, Result};
use crate::mesh::{cross, dist, Point};

/// A strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(RitzError::InvalidPolygon(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        if vertices.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(RitzError::InvalidPolygon("non-finite coordinate".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(RitzError::InvalidPolygon(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
            }
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = cross(sub(b, a), sub(c, b));
            if turn <= 0.0 {
                return Err(RitzError::InvalidPolygon(format!(
                    "not strictly convex and counter-clockwise at vertex {} (turn {turn:.3e})",
                    (i + 1) % n
                )));
            }
        }
        // A star-shaped loop can turn left everywhere and still wind twice.
        let total_angle: f64 = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                let (u, v) = (sub(b, a), sub(c, b));
                cross(u, v).atan2(u[0] * v[0] + u[1] * v[1])
            })
            .sum();
        if (total_angle - 2.0 * std::f64::consts::PI).abs() > 1e-9 {
            return Err(RitzError::InvalidPolygon(
                "boundary winds more than once".into(),
            ));
        }
        Ok(Self { vertices })
    }

    pub fn unit_square() -> Self {
        Self::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    /// Equilateral triangle with unit side and one edge on the x-axis.
    pub fn equilateral_triangle() -> Self {
        Self::new(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.75f64.sqrt()]]).unwrap()
    }

    /// Regular `n`-gon centred at the origin with the given circumradius.
    pub fn regular(n: usize, circumradius: f64) -> Result<Self> {
        let vertices = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        Self::new(vertices)
    }

    /// Looks up one of the named domains accepted by the experiment config.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "square" | "unit_square" => Ok(Self::unit_square()),
            "triangle" | "equilateral" => Ok(Self::equilateral_triangle()),
            "hexagon" => Self::regular(6, 1.0),
            other => Err(RitzError::InvalidPolygon(format!(
                "unknown polygon `{other}` (valid: square, triangle, hexagon)"
            ))),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| dist(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(dist(*a, *b));
            }
        }
        d
    }

    /// Vertex average; interior for any convex polygon.
    pub fn center(&self) -> Point {
        let n = self.vertices.len() as f64;
        let s = self
            .vertices
            .iter()
            .fold([0.0, 0.0], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
        [s[0] / n, s[1] / n]
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        (lo, hi)
    }

    /// Signed distance-like margin: positive inside, zero on the boundary.
    /// Returns the minimum over edges of the distance to the edge's supporting line.
    pub fn margin(&self, x: Point) -> f64 {
        let n = self.vertices.len();
        let mut m = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = sub(b, a);
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            m = m.min(cross(e, sub(x, a)) / len);
        }
        m
    }

    /// Closed-set membership with an absolute tolerance.
    pub fn contains(&self, x: Point, tol: f64) -> bool {
        self.margin(x) >= -tol
    }

    /// Distance from `x` (inside or on the boundary) along the direction `d`
    /// to the boundary, in units of `|d|`.
    pub fn ray_exit(&self, x: Point, d: Point) -> f64 {
        let n = self.vertices.len();
        let mut t = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let e = sub(self.vertices[(i + 1) % n], a);
            let rate = cross(e, d);
            if rate < 0.0 {
                t = t.min((cross(e, sub(x, a)) / -rate).max(0.0));
            }
        }
        t
    }

    /// Index of the polygon edge whose supporting segment contains `x`, if any.
    pub fn boundary_edge_of(&self, x: Point, tol: f64) -> Option<usize> {
        let n = self.vertices.len();
        (0..n).find(|&i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = sub(b, a);
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            let off = cross(e, sub(x, a)) / len;
            let t = (e[0] * (x[0] - a[0]) + e[1] * (x[1] - a[1])) / (len * len);
            off.abs() <= tol && t >= -tol && t <= 1.0 + tol
        })
    }

    /// Point on the boundary at arc-length fraction `s ∈ [0, 1)`.
    pub fn boundary_point(&self, s: f64) -> Point {
        let n = self.vertices.len();
        let total = self.perimeter();
        let mut target = s.rem_euclid(1.0) * total;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let len = dist(a, b);
            if target <= len || i == n - 1 {
                let t = (target / len).min(1.0);
                return [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            }
            target -= len;
        }
        unreachable!()
    }
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[cfg(test)]
mod tests {
    #[test]
    fn ray_exit_in_square() {
        let sq = super::ConvexPolygon::unit_square();
        assert!((sq.ray_exit([0.25, 0.5], [1.0, 0.0]) - 0.75).abs() < 1e-15);
        assert!((sq.ray_exit([0.25, 0.5], [-2.0, 0.0]) - 0.125).abs() < 1e-15);
        let d = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sq.ray_exit([0.5, 0.5], [d, d]) - 0.5f64.hypot(0.5)).abs() < 1e-14);
    }

    use super::*;

    #[test]
    fn rejects_clockwise_and_degenerate() {
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn rejects_non_convex() {
        let dart = vec![[0.0, 0.0], [2.0, 1.0], [0.0, 2.0], [0.5, 1.0]];
        assert!(ConvexPolygon::new(dart).is_err());
    }

    #[test]
    fn rejects_pentagram() {
        let star: Vec<Point> = (0..5)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (2 * i) as f64 / 5.0;
                [t.cos(), t.sin()]
            })
            .collect();
        assert!(ConvexPolygon::new(star).is_err());
    }

    #[test]
    fn hexagon_area() {
        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        assert!((hex.area() - 1.5 * 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn boundary_points_are_on_boundary() {
        let sq = ConvexPolygon::unit_square();
        for i in 0..100 {
            let p = sq.boundary_point(i as f64 / 100.0);
            assert!(sq.margin(p).abs() < 1e-14);
            assert!(sq.boundary_edge_of(p, 1e-12).is_some());
        }
        assert!(sq.boundary_edge_of([0.5, 0.5], 1e-12).is_none());
    }
}
