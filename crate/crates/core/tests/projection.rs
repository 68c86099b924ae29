use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ritzlab_core::experiments::corpus_registry;
use ritzlab_core::fem::{FeFunction, FeSpace};
use ritzlab_core::field::PiecewiseField;
use ritzlab_core::maximal::{maximal_value, RadiusGrid};
use ritzlab_core::mesh::{mesh_at_level, ConvexPolygon};
use ritzlab_core::ritz::{assemble_rhs_gradform, grad_error, grad_norm_analytic, grad_norm_fe, RitzProjector};

fn projector(level: usize, degree: usize) -> RitzProjector {
    let mesh = Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), level).unwrap());
    RitzProjector::new(Arc::new(FeSpace::new(mesh, degree).unwrap()), 1e-13)
}

fn random_member(space: &Arc<FeSpace>, rng: &mut ChaCha8Rng) -> FeFunction {
    let values: Vec<f64> = (0..space.n_interior()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    FeFunction::from_interior(space.clone(), &values).unwrap()
}

#[test]
fn members_of_the_space_are_fixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for degree in [1, 2] {
        let r = projector(3, degree);
        for _ in 0..5 {
            let v = random_member(r.space(), &mut rng);
            let rv = r.project(&v.as_analytic("v")).unwrap();
            for (a, b) in rv.coefficients().iter().zip(v.coefficients()) {
                assert!((a - b).abs() < 1e-10, "degree {degree}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn pythagoras_and_energy_bound() {
    for degree in [1, 2] {
        let r = projector(3, degree);
        for u in corpus_registry() {
            // the identity needs the right-hand side integrated as accurately as the norms
            let ru = r.project_with_degree(&u, 12).unwrap();
            let mesh = r.space().mesh();
            let total = grad_norm_analytic(mesh, &u, 12);
            let proj = grad_norm_fe(&ru);
            let err = grad_error(&ru, &u, 12);
            assert!(proj <= total * (1.0 + 1e-8), "{}: {proj} > {total}", u.name());
            let sum = proj * proj + err * err;
            assert!((total * total - sum).abs() <= 1e-6 * sum, "{} degree {degree}: {} vs {sum}", u.name(), total * total);
        }
    }
}

#[test]
fn galerkin_residual_is_small() {
    let r = projector(4, 2);
    for u in corpus_registry() {
        let b = assemble_rhs_gradform(r.space(), &u, 6).unwrap();
        let x = r.project(&u).unwrap().interior_values();
        let ax = r.matrix().mul_vec(&x);
        let res: f64 = ax.iter().zip(&b).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res <= 1e-8 * norm, "{}: {res} vs {norm}", u.name());
    }
}

#[test]
fn pointwise_ratio_of_a_member_is_at_most_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = projector(2, 1);
    let v = random_member(r.space(), &mut rng);
    let field = PiecewiseField::fe_gradient(&v);
    let grid = RadiusGrid::for_mesh(r.space().mesh());
    let mesh = r.space().mesh();
    for t in (0..mesh.n_triangles()).step_by(7) {
        let z = mesh.centroid(t);
        let (_, g) = v.eval(z);
        let m = maximal_value(&field, z, &grid);
        assert!(g[0].hypot(g[1]) <= m * (1.0 + 1e-6), "element {t}");
    }
}
