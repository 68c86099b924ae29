use super::*;
use crate::mesh::{mesh_at_level, ConvexPolygon};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        degree: Degrees::One(1),
        levels: vec![1, 2],
        corpus: vec!["bubble".into(), "sing06".into()],
        spaces: vec![
            SpaceSpec::Lp { p: Exponent(2.0) },
            SpaceSpec::Orlicz {
                phi: "exp".into(),
                p: None,
            },
        ],
        sample_points: SampleConfig { count: 12, seed: 0 },
        green: GreenConfig {
            max_z: 6,
            convolution_points: 3,
            local_points: 3,
            ..GreenConfig::default()
        },
        ..ExperimentConfig::default()
    }
}

#[test]
fn sample_points_avoid_edges_at_every_level() {
    let sq = ConvexPolygon::unit_square();
    let finest = mesh_at_level(&sq, 4).unwrap();
    let zs = sample_points(&finest, 100, 0);
    assert_eq!(zs.len(), 100);
    for level in 0..=4 {
        let mesh = mesh_at_level(&sq, level).unwrap();
        for z in &zs {
            let (_, b) = mesh.locate_point(*z).unwrap();
            assert!(b.iter().all(|&l| l > 1e-6), "level {level}: {z:?} {b:?}");
        }
    }
}

#[test]
fn reports_have_expected_shape() {
    let c = small_config();
    let p = run_pointwise(&c).unwrap();
    assert_eq!(p.rows.len(), 4);
    assert!(p.errors.is_empty());
    let s = run_stability(&c).unwrap();
    assert_eq!(s.rows.len(), 8);
    for row in s.select(&[("space", "L^2")]) {
        assert!(s.float(row, "ratio").unwrap() <= 1.0 + 1e-6);
    }
    let g = run_green(&c).unwrap();
    assert_eq!(g.rows.len(), 2);
    assert!(g.column("gh_K8").is_some());
    assert!(g.to_csv().starts_with("# experiment: green\n# config_sha256: "));
}

#[test]
fn green_test_mode_gives_zero() {
    let mut c = small_config();
    c.green.fine_offset = 0;
    let g = run_green(&c).unwrap();
    for row in &g.rows {
        assert_eq!(g.float(row, "gh"), Some(0.0));
    }
    assert!(g.probes.iter().any(|p| p.name.contains("vanishes") && p.passed));
}

#[test]
fn reruns_are_identical() {
    let c = small_config();
    assert_eq!(run_pointwise(&c).unwrap().to_csv(), run_pointwise(&c).unwrap().to_csv());
}
