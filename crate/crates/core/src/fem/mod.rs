//! Lagrange finite element spaces of degree 1 and 2.

mod analytic;
mod basis;
mod function;
mod space;

pub use analytic::AnalyticFunction;
pub use basis::{eval_basis, local_dof_count, local_nodes, LocalBasis};
pub use function::{interpolate_nodal, FeFunction};
pub use space::FeSpace;

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon};

    fn random_function(space: &Arc<FeSpace>, seed: u64) -> FeFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..space.n_interior()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        FeFunction::from_interior(space.clone(), &values).unwrap()
    }

    fn square(level: usize) -> Arc<crate::mesh::Triangulation> {
        Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), level).unwrap())
    }

    #[test]
    fn continuity_across_edges() {
        let mesh = square(3);
        for k in [1, 2] {
            let space = Arc::new(FeSpace::new(mesh.clone(), k).unwrap());
            let f = random_function(&space, 3 + k as u64);
            for (&(a, b), owners) in mesh.edge_map().iter() {
                if owners.len() != 2 {
                    continue;
                }
                let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
                let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                let v0 = f.eval_local(owners[0], mesh.barycentric(owners[0], mid)).0;
                let v1 = f.eval_local(owners[1], mesh.barycentric(owners[1], mid)).0;
                assert!((v0 - v1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interpolation_reproduces_vh() {
        let mesh = square(2);
        for k in [1, 2] {
            let space = Arc::new(FeSpace::new(mesh.clone(), k).unwrap());
            let f = random_function(&space, 17);
            let g = interpolate_nodal(&space, &f.as_analytic("vh"));
            for (a, b) in f.coefficients().iter().zip(g.coefficients()) {
                assert!((a - b).abs() < 1e-12);
            }
            // projection: interpolating the interpolant is the identity
            let h = interpolate_nodal(&space, &g.as_analytic("ih"));
            for (a, b) in g.coefficients().iter().zip(h.coefficients()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn interpolation_of_zero() {
        let space = Arc::new(FeSpace::new(square(2), 2).unwrap());
        let f = interpolate_nodal(&space, &AnalyticFunction::zero());
        assert!(f.coefficients().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn affine_gradient_on_interior_element() {
        let mesh = square(2);
        let space = Arc::new(FeSpace::new(mesh.clone(), 1).unwrap());
        let fx = AnalyticFunction::new("x", |x| x[0], |_| [1.0, 0.0], false);
        let f = interpolate_nodal(&space, &fx);
        let t = (0..mesh.n_triangles())
            .find(|&t| mesh.triangles()[t].iter().all(|&v| !mesh.boundary_flags()[v]))
            .unwrap();
        let (v, g) = f.eval_local(t, [0.2, 0.3, 0.5]);
        assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12);
        assert!((v - mesh.point_at(t, [0.2, 0.3, 0.5])[0]).abs() < 1e-12);
    }

    #[test]
    fn evaluation_at_dof_and_outside() {
        let space = Arc::new(FeSpace::new(square(2), 2).unwrap());
        let f = random_function(&space, 5);
        for (dof, x) in space.dof_coordinates().iter().enumerate() {
            assert!((f.eval(*x).0 - f.coefficients()[dof]).abs() < 1e-12);
        }
        assert_eq!(f.eval([1.5, 0.5]), (0.0, [0.0, 0.0]));
    }

    #[test]
    fn interpolation_error_rate_p2() {
        let bubble = AnalyticFunction::new(
            "bubble",
            |x| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]),
            |x| {
                [
                    (1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]),
                    x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1]),
                ]
            },
            true,
        );
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for level in 2..=5 {
            let mesh = square(level);
            let space = Arc::new(FeSpace::new(mesh.clone(), 2).unwrap());
            let ih = interpolate_nodal(&space, &bubble);
            let rule = crate::quadrature::QuadratureRule::with_degree(10);
            let mut err: f64 = 0.0;
            for t in 0..mesh.n_triangles() {
                for p in &rule.points {
                    let x = mesh.point_at(t, *p);
                    err = err.max((ih.eval_local(t, *p).0 - bubble.value(x)).abs());
                }
            }
            hs.push(mesh.mesh_size().ln());
            errs.push(err.ln());
        }
        let slope = crate::stats::least_squares_slope(&hs, &errs);
        assert!((2.7..=3.3).contains(&slope), "slope {slope}");
    }

    #[test]
    fn fefun_round_trip() {
        let space = Arc::new(FeSpace::new(square(1), 2).unwrap());
        let f = random_function(&space, 9);
        let mut buf = Vec::new();
        f.write(&mut buf).unwrap();
        let g = FeFunction::read(&buf[..], space.clone()).unwrap();
        assert_eq!(f.coefficients(), g.coefficients());
        let other = Arc::new(FeSpace::new(square(1), 1).unwrap());
        assert!(FeFunction::read(&buf[..], other).is_err());
    }
}
