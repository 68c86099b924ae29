use super::*;
use crate::fem::FeSpace;
use crate::mesh::{mesh_hierarchy, ConvexPolygon};
use crate::ritz::DEFAULT_REL_TOL;

fn hierarchy(max: usize) -> Vec<Arc<Triangulation>> {
    mesh_hierarchy(&ConvexPolygon::unit_square(), max).unwrap()
}

fn projector(mesh: &Arc<Triangulation>, k: usize) -> RitzProjector {
    RitzProjector::new(Arc::new(FeSpace::new(mesh.clone(), k).unwrap()), DEFAULT_REL_TOL)
}

#[test]
fn delta_moments() {
    let meshes = hierarchy(3);
    for k in [1, 2] {
        for mesh in &meshes[1..] {
            for z in green_sample_points(mesh, 20) {
                let d = build_delta(mesh.clone(), k, z).unwrap();
                assert!(d.moment_residual() <= 1e-10);
                assert!((d.moment(|_| 1.0) - 1.0).abs() <= 1e-12);
                assert!((d.moment(|x| x[0]) - z[0]).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn delta_rejects_edges_and_vanishes_on_boundary() {
    let mesh = hierarchy(2).pop().unwrap();
    let c = mesh.corners(5);
    let on_edge = [(c[0][0] + c[1][0]) / 2.0, (c[0][1] + c[1][1]) / 2.0];
    assert!(matches!(
        build_delta(mesh.clone(), 1, on_edge),
        Err(RitzError::PointOnElementBoundary(..))
    ));
    let d = build_delta(mesh.clone(), 2, mesh.point_at(5, SAMPLE_BARY)).unwrap();
    assert_eq!(d.eval_bary([0.0, 0.4, 0.6]), 0.0);
    assert!(d.eval_bary([1e-4, 0.5, 0.5 - 1e-4]).abs() < 1e-3 * d.sup_norm());
}

#[test]
fn delta_scales_like_inverse_area() {
    let meshes = hierarchy(3);
    let bary = SAMPLE_BARY;
    // the first child of element 3 has the same shape at half the size
    let coarse = build_delta(meshes[2].clone(), 1, meshes[2].point_at(3, bary)).unwrap();
    let fine = build_delta(meshes[3].clone(), 1, meshes[3].point_at(12, bary)).unwrap();
    let ratio = fine.sup_norm() / coarse.sup_norm();
    assert!((ratio - 4.0).abs() <= 0.2, "{ratio}");
}

#[test]
fn green_rhs_is_local_and_linear() {
    let meshes = hierarchy(4);
    let fine = projector(&meshes[4], 1);
    let z = meshes[2].point_at(17, SAMPLE_BARY);
    let d = build_delta(meshes[2].clone(), 1, z).unwrap();
    let rhs = green_rhs(fine.space(), &d, 0).unwrap();
    let space = fine.space();
    let first = 17 << 4;
    let inside: std::collections::HashSet<usize> = (first..first + 16)
        .flat_map(|t| space.element_dofs(t).to_vec())
        .collect();
    for dof in space.interior_dofs() {
        if !inside.contains(&dof) {
            assert_eq!(rhs[space.interior_index(dof).unwrap()], 0.0);
        }
    }
    let g = solve_regularized_green(&fine, &d, 0).unwrap();
    let gm = solve_regularized_green(&fine, &d.negated(), 0).unwrap();
    for (a, b) in g.coefficients().iter().zip(gm.coefficients()) {
        assert_eq!(*a, -*b);
    }
}

#[test]
fn phi_weight_properties() {
    let sq = ConvexPolygon::unit_square();
    let z = [0.31, 0.62];
    let w = PhiWeight::new(&sq, 0.05, z, 4.0, 0.25, 0.5).unwrap();
    assert!((w.mass(&sq) - 1.0).abs() <= 1e-8);
    // independent check of the mass on a fine midpoint grid
    let n = 2000;
    let cell = 1.0 / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += w.eval([(i as f64 + 0.5) * cell, (j as f64 + 0.5) * cell]) * cell * cell;
        }
    }
    assert!((s - 1.0).abs() < 1e-5, "{s}");
    assert!(w.eval(z) > w.eval([0.32, 0.62]));
    assert!(w.eval([0.4, 0.62]) > w.eval([0.5, 0.62]));
    assert!(PhiWeight::new(&sq, 0.05, z, 2.0, 0.25, 0.5).is_err());
    assert!(PhiWeight::new(&sq, 0.05, z, 4.0, 0.6, 0.5).is_err());
}

#[test]
fn phi_nearly_constant_on_annuli() {
    let sq = ConvexPolygon::unit_square();
    let h = 1.0 / 64.0;
    let z = [0.47, 0.52];
    let w = PhiWeight::new(&sq, h, z, 4.0, 0.25, 0.5).unwrap();
    let decomp = AnnulusDecomposition::new(z, h, 4.0, sq.diameter());
    for j in 1..decomp.len() {
        let (a, b) = decomp.bounds(j, 0);
        let vals: Vec<f64> = (0..400)
            .map(|i| {
                let r = a + (b - a) * (i % 20) as f64 / 19.0 * 0.999;
                let t = (i / 20) as f64 * 0.3;
                [z[0] + r * t.cos(), z[1] + r * t.sin()]
            })
            .filter(|x| sq.contains(*x, 0.0))
            .map(|x| w.eval(x))
            .collect();
        if vals.is_empty() {
            continue;
        }
        let max = vals.iter().copied().fold(0.0, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(max / min <= 2f64.powf(2.25) * 1.05, "j={j}: {}", max / min);
    }
}

#[test]
fn annuli_structure() {
    let z = [0.4, 0.55];
    let d = AnnulusDecomposition::new(z, 1.0 / 32.0, 4.0, 2f64.sqrt());
    for w in d.radii.windows(2) {
        assert_eq!(w[1], 2.0 * w[0]);
    }
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    for _ in 0..1000 {
        let x = [rand::Rng::gen::<f64>(&mut rng), rand::Rng::gen::<f64>(&mut rng)];
        let j = d.index_of(x).unwrap();
        let r = dist(x, z);
        assert!(r < d.radii[j] && (j == 0 || r >= d.radii[j - 1]));
        assert!(d.contains(j, 0, x) && d.contains(j, 1, x) && d.contains(j, 2, x));
    }
    // the annuli partition the square
    let mesh = hierarchy(3).pop().unwrap();
    let rule = QuadratureRule::with_degree(4);
    let mut total = 0.0;
    for j in 0..d.len() {
        for t in 0..mesh.n_triangles() {
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                if d.contains(j, 0, mesh.point_at(t, *p)) {
                    total += w * mesh.geometry(t).area;
                }
            }
        }
    }
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn holder_examples() {
    let mesh = hierarchy(2).pop().unwrap();
    let c = PiecewiseField::constant(mesh.clone(), 2.0);
    let s = HolderSampling::new(1000, 1);
    assert_eq!(holder_estimate(&c, |_| true, 0.5, &s).unwrap(), 0.0);
    let x1 = PiecewiseField::from_fn(mesh.clone(), 1, |x| [x[0], 0.0]);
    let e = holder_estimate(&x1, |_| true, 1.0, &HolderSampling::new(10_000, 2)).unwrap();
    assert!((0.9..=1.0 + 1e-12).contains(&e), "{e}");
    let root = PiecewiseField::from_fn(mesh.clone(), 1, |x| [x[0].hypot(x[1]).sqrt(), 0.0]);
    let mut anchored = HolderSampling::new(2000, 3);
    anchored.anchors.push([0.0, 0.0]);
    let e = holder_estimate(&root, |x| x[0].hypot(x[1]) < 0.3, 0.5, &anchored).unwrap();
    assert!(e >= 0.9, "{e}");
    assert!(holder_estimate(&c, |x| x[0] > 5.0, 0.5, &s).is_err());
}

#[test]
fn convolution_of_constant() {
    let mesh = hierarchy(4).pop().unwrap();
    let one = PiecewiseField::constant(mesh.clone(), 1.0);
    let h = mesh.mesh_size();
    let w = PhiWeight::new(mesh.domain(), h, [0.43, 0.51], 4.0, 0.25, 0.5).unwrap();
    let r = convolution_check(&one, &w).unwrap();
    assert!((r - 1.0).abs() < 0.1, "{r}");
    let zero = PiecewiseField::constant(mesh, 0.0);
    assert_eq!(convolution_check(&zero, &w).unwrap(), 0.0);
}

#[test]
fn gh_vanishes_when_spaces_coincide() {
    let meshes = hierarchy(2);
    let p = projector(&meshes[2], 1);
    let zs = green_sample_points(&meshes[2], 10);
    let r = compute_gh(&p, &p, GreenParams::default(), &zs, 0).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(r.grad_g_scaled > 0.0);
}

#[test]
fn gh_is_positive_for_nested_spaces() {
    let meshes = hierarchy(4);
    let working = projector(&meshes[2], 1);
    let fine = projector(&meshes[4], 1);
    let zs = green_sample_points(&meshes[2], 8);
    let r = compute_gh(&working, &fine, GreenParams::default(), &zs, 1).unwrap();
    assert!(r.value > 0.0 && r.value.is_finite());
    assert_eq!(r.per_z.len(), 8);
}

#[test]
fn local_error_of_discrete_function() {
    let meshes = hierarchy(3);
    let p = projector(&meshes[2], 2);
    let u = AnalyticFunction::new(
        "poly",
        |x| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]),
        |x| [(1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]), x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1])],
        true,
    );
    let vh = interpolate_nodal(p.space(), &u);
    let check = LocalErrorCheck::new(&p, LocalTarget::Fe(vh)).unwrap();
    let z = meshes[2].point_at(9, SAMPLE_BARY);
    let r = check.at(z, 0.3);
    assert!(r.lhs < 1e-8 && r.grad_interp < 1e-12 && r.value_interp < 1e-12, "{r:?}");

    let analytic = LocalErrorCheck::new(&p, LocalTarget::Analytic(u)).unwrap();
    let small = analytic.at(z, 0.1);
    let large = analytic.at(z, 0.2);
    assert!(large.grad_interp >= small.grad_interp);
    assert!(large.value_interp * 0.2 >= small.value_interp * 0.1);
    assert!(small.ratio > 0.0 && small.ratio.is_finite());
}
