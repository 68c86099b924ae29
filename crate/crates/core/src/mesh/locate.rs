use crate::mesh::{Point, Triangulation};

const TOL: f64 = 1e-12;

/// Uniform bucket grid over the bounding box; each cell lists, in ascending
/// order, the elements whose bounding boxes overlap it.
#[derive(Debug)]
pub(crate) struct Locator {
    lo: Point,
    cell: [f64; 2],
    n: [usize; 2],
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    pub(crate) fn new(mesh: &Triangulation) -> Self {
        let (lo, hi) = mesh.domain().bounding_box();
        let side = (mesh.n_triangles() as f64).sqrt().ceil().max(1.0) as usize;
        let n = [side, side];
        let cell = [
            (hi[0] - lo[0]) / n[0] as f64,
            (hi[1] - lo[1]) / n[1] as f64,
        ];
        let mut buckets = vec![Vec::new(); n[0] * n[1]];
        for t in 0..mesh.n_triangles() {
            let p = mesh.corners(t);
            let mut blo = [f64::INFINITY; 2];
            let mut bhi = [f64::NEG_INFINITY; 2];
            for q in &p {
                for d in 0..2 {
                    blo[d] = blo[d].min(q[d]);
                    bhi[d] = bhi[d].max(q[d]);
                }
            }
            let pad = TOL * (1.0 + cell[0].max(cell[1]));
            let i0 = index(blo[0] - pad, lo[0], cell[0], n[0]);
            let i1 = index(bhi[0] + pad, lo[0], cell[0], n[0]);
            let j0 = index(blo[1] - pad, lo[1], cell[1], n[1]);
            let j1 = index(bhi[1] + pad, lo[1], cell[1], n[1]);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * n[0] + i].push(t as u32);
                }
            }
        }
        Self { lo, cell, n, buckets }
    }

    pub(crate) fn locate(&self, mesh: &Triangulation, x: Point) -> Option<(usize, [f64; 3])> {
        let scale = mesh.domain().diameter();
        if !mesh.domain().contains(x, TOL * scale) {
            return None;
        }
        let i = index(x[0], self.lo[0], self.cell[0], self.n[0]);
        let j = index(x[1], self.lo[1], self.cell[1], self.n[1]);
        for &t in &self.buckets[j * self.n[0] + i] {
            let t = t as usize;
            let b = mesh.barycentric(t, x);
            if b.iter().all(|&l| l >= -TOL) {
                let mut b = b.map(|l| l.clamp(0.0, 1.0));
                let s = b[0] + b[1] + b[2];
                b.iter_mut().for_each(|l| *l /= s);
                return Some((t, b));
            }
        }
        None
    }
}

fn index(x: f64, lo: f64, cell: f64, n: usize) -> usize {
    let i = ((x - lo) / cell).floor();
    if i < 0.0 {
        0
    } else {
        (i as usize).min(n - 1)
    }
}

#[cfg(test)]
mod tests {
    use crate::mesh::{mesh_at_level, ConvexPolygon};
    use rand::{Rng, SeedableRng};

    #[test]
    fn vertex_and_centroid() {
        let m = mesh_at_level(&ConvexPolygon::unit_square(), 2).unwrap();
        let c = m.centroid(7);
        let (t, b) = m.locate_point(c).unwrap();
        assert_eq!(t, 7);
        for l in b {
            assert!((l - 1.0 / 3.0).abs() < 1e-12);
        }
        let v = m.corners(0)[0];
        let (t, b) = m.locate_point(v).unwrap();
        let local = m.triangles()[t].iter().position(|&i| m.vertices()[i] == v).unwrap();
        assert!((b[local] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outside_points() {
        let m = mesh_at_level(&ConvexPolygon::unit_square(), 1).unwrap();
        assert!(m.locate_point([2.0, 0.5]).is_none());
        assert!(m.locate_point([-1e-3, 0.5]).is_none());
        let hex = mesh_at_level(&ConvexPolygon::regular(6, 1.0).unwrap(), 1).unwrap();
        // inside the bounding box, outside the hexagon
        assert!(hex.locate_point([0.98, 0.8]).is_none());
    }

    #[test]
    fn edge_ties_go_to_lowest_index() {
        let m = mesh_at_level(&ConvexPolygon::unit_square(), 2).unwrap();
        for (&(a, b), owners) in m.edge_map().iter() {
            if owners.len() == 2 {
                let (pa, pb) = (m.vertices()[a], m.vertices()[b]);
                let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                let (t, _) = m.locate_point(mid).unwrap();
                assert_eq!(t, *owners.iter().min().unwrap());
            }
        }
    }

    #[test]
    fn barycentric_reconstruction() {
        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        let m = mesh_at_level(&hex, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut hits = 0;
        while hits < 1000 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if hex.margin(x) <= 0.0 {
                assert!(m.locate_point(x).is_none() || hex.margin(x) > -1e-12);
                continue;
            }
            let (t, b) = m.locate_point(x).unwrap();
            assert!(b.iter().all(|&l| (0.0..=1.0).contains(&l)));
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let y = m.point_at(t, b);
            assert!((y[0] - x[0]).abs() < 1e-12 && (y[1] - x[1]).abs() < 1e-12);
            hits += 1;
        }
    }
}
