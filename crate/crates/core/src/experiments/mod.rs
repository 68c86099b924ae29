//! Batch experiments: pointwise ratios, norm stability and Green's
//! function diagnostics, reported as CSV tables with probe verdicts.

mod config;
mod corpus;
mod report;

use std::collections::HashMap;
use std::sync::Arc;

use log::info;

pub use config::{
    default_spaces, Degrees, DomainSpec, ExperimentConfig, GreenConfig, SampleConfig, SolverConfig,
};
pub use corpus::{corpus_function, corpus_registry, CORPUS_NAMES};
pub use report::{format_float, ExperimentReport, Probe, Value};

use crate::error::Result;
use crate::fem::{AnalyticFunction, FeSpace};
use crate::field::{norm2, PiecewiseField};
use crate::green::{
    compute_gh_sweep, convolution_check, green_sample_points, GreenParams, LocalErrorCheck, LocalTarget,
    PhiWeight,
};
use crate::maximal::{maximal_value, RadiusGrid};
use crate::mesh::{mesh_hierarchy, Point, Triangulation};
use crate::norms::{Exponent, SpaceSpec};
use crate::ritz::RitzProjector;
use crate::stats::{halton_points, quantile_sorted};

/// Smallest barycentric coordinate kept by [`sample_points`].
const NUDGE: f64 = 1e-3;
/// Maximal values below this are excluded from ratios.
const M_FLOOR: f64 = 1e-14;
/// Allowed relative change of a bounded quantity between successive levels.
const LEVEL_VARIATION: f64 = 0.2;

/// Halton points of the domain moved off the edges of `finest` (and hence of
/// every coarser nested mesh): barycentric coordinates below 10⁻³ are raised
/// to 10⁻³ in the finest element containing the point.
pub fn sample_points(finest: &Triangulation, count: usize, seed: u64) -> Vec<Point> {
    halton_points(finest.domain(), count, seed, 0.0)
        .into_iter()
        .map(|x| {
            let (t, b) = finest.locate_point(x).expect("Halton point inside the domain");
            if b.iter().all(|&l| l >= NUDGE) {
                return x;
            }
            let c = b.map(|l| l.max(NUDGE));
            let s: f64 = c.iter().sum();
            finest.point_at(t, c.map(|l| l / s))
        })
        .collect()
}

fn metadata(config: &ExperimentConfig, name: &str) -> Vec<(String, String)> {
    let mut m = vec![
        ("experiment".to_string(), name.to_string()),
        ("config_sha256".to_string(), config.hash()),
        ("levels".to_string(), format!("{:?}", config.levels)),
        ("degrees".to_string(), format!("{:?}", config.degree.list())),
    ];
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        m.push(("source_date_epoch".to_string(), epoch));
    }
    m
}

fn hierarchy(config: &ExperimentConfig, extra: usize) -> Result<Vec<Arc<Triangulation>>> {
    let domain = config.domain.polygon()?;
    mesh_hierarchy(&domain, config.levels.last().copied().unwrap_or(0) + extra)
}

fn corpus(config: &ExperimentConfig) -> Result<Vec<AnalyticFunction>> {
    config.corpus.iter().map(|n| corpus_function(n)).collect()
}

fn error_row(report: &mut ExperimentReport, prefix: Vec<Value>, message: String) {
    let mut row = prefix;
    while row.len() + 1 < report.columns.len() {
        row.push(Value::Float(f64::NAN));
    }
    row.push(Value::Text(format!("error: {message}")));
    report.record_error(message);
    report.push_row(row);
}

/// Probes that `values` (one per level) change by less than 20% from level
/// to level and never exceed `cap_factor` times the first value.
fn probe_flat(report: &mut ExperimentReport, name: &str, levels: &[usize], values: &[f64], cap_factor: Option<f64>) {
    if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
        if values.iter().any(|v| !v.is_finite()) {
            report.probe(format!("{name}: finite"), false, format!("{values:?}"));
        }
        return;
    }
    for (w, l) in values.windows(2).zip(levels.windows(2)) {
        let change = if w[0] == 0.0 {
            if w[1] == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (w[1] - w[0]).abs() / w[0].abs()
        };
        report.probe(
            format!("{name}: level {} -> {} variation < 20%", l[0], l[1]),
            change < LEVEL_VARIATION,
            format!("{} -> {} ({:.1}%)", format_float(w[0]), format_float(w[1]), 100.0 * change),
        );
    }
    if let Some(cap) = cap_factor {
        let worst = values.iter().copied().fold(0.0, f64::max);
        report.probe(
            format!("{name}: at most {cap}x level-{} value", levels[0]),
            worst <= cap * values[0],
            format!("max {} vs first {}", format_float(worst), format_float(values[0])),
        );
    }
}

/// `max_z |∇R_h u(z)| / M[∇u](z)` and its distribution, per degree, level
/// and corpus function.
pub fn run_pointwise(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let meshes = hierarchy(config, 0)?;
    let finest = meshes.last().unwrap().clone();
    let zs = sample_points(&finest, config.sample_points.count, config.sample_points.seed);
    let grid = RadiusGrid::for_mesh(&finest);
    let mut report = ExperimentReport::new(
        "pointwise",
        &[
            "level", "h", "k", "corpus", "n_samples", "n_skipped", "max_ratio", "mean_ratio", "q50_ratio",
            "q90_ratio", "status",
        ],
    );
    report.metadata = metadata(config, "pointwise");

    let corpus = corpus(config)?;
    let mut maximal: HashMap<String, Vec<f64>> = HashMap::new();
    for u in &corpus {
        info!("maximal function of grad {} at {} points", u.name(), zs.len());
        let field = PiecewiseField::analytic_gradient(u, finest.clone());
        maximal.insert(
            u.name().to_string(),
            zs.iter().map(|z| maximal_value(&field, *z, &grid)).collect(),
        );
    }

    for k in config.degree.list() {
        let mut series: HashMap<String, Vec<f64>> = HashMap::new();
        for &level in &config.levels {
            let mesh = &meshes[level];
            let h = mesh.mesh_size();
            let projector = RitzProjector::new(Arc::new(FeSpace::new(mesh.clone(), k)?), config.solver.rel_tol);
            for u in &corpus {
                let prefix = vec![level.into(), h.into(), k.into(), u.name().into()];
                let rh = match projector.project(u) {
                    Ok(f) => f,
                    Err(e) => {
                        error_row(&mut report, prefix, e.to_string());
                        series.entry(u.name().into()).or_default().push(f64::NAN);
                        continue;
                    }
                };
                let m = &maximal[u.name()];
                let mut ratios = Vec::with_capacity(zs.len());
                let mut skipped = 0usize;
                for (z, mz) in zs.iter().zip(m) {
                    if *mz < M_FLOOR {
                        skipped += 1;
                        continue;
                    }
                    ratios.push(norm2(rh.eval(*z).1) / mz);
                }
                ratios.sort_by(f64::total_cmp);
                let max = ratios.last().copied().unwrap_or(f64::NAN);
                let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
                let mut row = prefix;
                row.extend([
                    ratios.len().into(),
                    skipped.into(),
                    max.into(),
                    mean.into(),
                    quantile_sorted(&ratios, 0.5).into(),
                    quantile_sorted(&ratios, 0.9).into(),
                    "ok".into(),
                ]);
                report.push_row(row);
                series.entry(u.name().into()).or_default().push(max);
            }
            info!("pointwise k={k} level {level} done");
        }
        for u in &corpus {
            let name = format!("k={k} {} max ratio", u.name());
            probe_flat(&mut report, &name, &config.levels, &series[u.name()], Some(3.0));
        }
    }
    Ok(report)
}

/// Norms of `∇R_h u` and `∇u` for every configured space.
pub fn run_stability(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let meshes = hierarchy(config, 0)?;
    let spaces = if config.spaces.is_empty() {
        default_spaces()
    } else {
        config.spaces.clone()
    };
    let mut report = ExperimentReport::new(
        "stability",
        &["level", "h", "k", "corpus", "space", "norm_discrete", "norm_exact", "ratio", "status"],
    );
    report.metadata = metadata(config, "stability");
    let corpus = corpus(config)?;
    for k in config.degree.list() {
        let mut series: HashMap<(String, String), Vec<f64>> = HashMap::new();
        for &level in &config.levels {
            let mesh = &meshes[level];
            let h = mesh.mesh_size();
            let projector = RitzProjector::new(Arc::new(FeSpace::new(mesh.clone(), k)?), config.solver.rel_tol);
            for u in &corpus {
                let exact = PiecewiseField::analytic_gradient(u, mesh.clone());
                let discrete = match projector.project(u) {
                    Ok(f) => PiecewiseField::fe_gradient(&f),
                    Err(e) => {
                        for space in &spaces {
                            let prefix = vec![level.into(), h.into(), k.into(), u.name().into(), space.label().into()];
                            error_row(&mut report, prefix, e.to_string());
                            series.entry((u.name().into(), space.label())).or_default().push(f64::NAN);
                        }
                        continue;
                    }
                };
                for space in &spaces {
                    let a = space.norm(&discrete)?;
                    let b = space.norm(&exact)?;
                    let ratio = a / b;
                    report.push_row(vec![
                        level.into(),
                        h.into(),
                        k.into(),
                        u.name().into(),
                        space.label().into(),
                        a.into(),
                        b.into(),
                        ratio.into(),
                        "ok".into(),
                    ]);
                    series.entry((u.name().into(), space.label())).or_default().push(ratio);
                    if *space == (SpaceSpec::Lp { p: Exponent(2.0) }) {
                        report.probe(
                            format!("k={k} level {level} {}: L2 ratio <= 1 + 1e-6", u.name()),
                            ratio <= 1.0 + 1e-6,
                            format_float(ratio),
                        );
                    }
                }
            }
            info!("stability k={k} level {level} done");
        }
        for u in &corpus {
            for space in &spaces {
                let name = format!("k={k} {} {} ratio", u.name(), space.label());
                probe_flat(&mut report, &name, &config.levels, &series[&(u.name().into(), space.label())], None);
            }
        }
    }
    Ok(report)
}

/// 𝒢_h, Green's function scaling, convolution and local error probes per
/// working level (first configured degree).
pub fn run_green(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let g = &config.green;
    let meshes = hierarchy(config, g.fine_offset)?;
    let k = config.degree.list()[0];
    let mut sweep = vec![g.k];
    sweep.extend(g.k_sweep.iter().copied());
    let params: Vec<GreenParams> = sweep
        .iter()
        .map(|&kk| GreenParams {
            k: kk,
            gamma: g.gamma,
            alpha: g.alpha,
        })
        .collect();

    let mut columns: Vec<String> = ["level", "h", "fine_level", "n_z", "gh"].iter().map(|s| s.to_string()).collect();
    for kk in &g.k_sweep {
        columns.push(format!("gh_K{}", format_float(*kk)));
    }
    columns.extend(
        ["gh_fixed_c1", "grad_g_h2", "moment_residual", "convolution_worst", "local_error_worst", "status"]
            .iter()
            .map(|s| s.to_string()),
    );
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = ExperimentReport::new("green", &column_refs);
    report.metadata = metadata(config, "green");
    report.metadata.push((
        "green".to_string(),
        format!(
            "K={} gamma={} alpha={} k0={} fine_offset={} component={}",
            g.k, g.gamma, g.alpha, g.k0, g.fine_offset, g.component
        ),
    ));

    let corpus = corpus(config)?;
    let finest_working = &meshes[*config.levels.last().unwrap()];
    let probe_points = sample_points(
        finest_working,
        g.convolution_points.max(g.local_points),
        config.sample_points.seed,
    );

    let mut gh_series: Vec<Vec<f64>> = vec![Vec::new(); params.len()];
    let (mut grad_series, mut conv_series, mut local_series) = (Vec::new(), Vec::new(), Vec::new());
    for &level in &config.levels {
        let wmesh = &meshes[level];
        let fmesh = &meshes[level + g.fine_offset];
        let h = wmesh.mesh_size();
        let working = RitzProjector::new(Arc::new(FeSpace::new(wmesh.clone(), k)?), config.solver.rel_tol);
        let fine = if g.fine_offset == 0 {
            working.clone()
        } else {
            RitzProjector::new(Arc::new(FeSpace::new(fmesh.clone(), k)?), config.solver.rel_tol)
        };
        let zs = green_sample_points(wmesh, g.max_z);
        let prefix = vec![level.into(), h.into(), (level + g.fine_offset).into(), zs.len().into()];
        let gh = match compute_gh_sweep(&working, &fine, &params, &zs, g.component) {
            Ok(r) => r,
            Err(e) => {
                error_row(&mut report, prefix, e.to_string());
                continue;
            }
        };
        info!("green level {level}: G_h = {}", gh[0].value);

        let mut conv_worst: f64 = 0.0;
        for u in &corpus {
            let field = PiecewiseField::analytic_gradient(u, wmesh.clone());
            for z in &probe_points[..g.convolution_points] {
                let w = PhiWeight::new(wmesh.domain(), h, *z, g.k, g.gamma, g.alpha)?;
                conv_worst = conv_worst.max(convolution_check(&field, &w)?);
            }
        }

        let mut local_worst: f64 = 0.0;
        for u in &corpus {
            let check = match LocalErrorCheck::new(&working, LocalTarget::Analytic(u.clone())) {
                Ok(c) => c,
                Err(e) => {
                    report.record_error(format!("level {level} {}: {e}", u.name()));
                    continue;
                }
            };
            for z in &probe_points[..g.local_points] {
                for d in [g.k0 * h, 2.0 * g.k0 * h] {
                    local_worst = local_worst.max(check.at(*z, d).ratio);
                }
            }
        }

        let mut row = prefix;
        for (series, r) in gh_series.iter_mut().zip(&gh) {
            row.push(r.value.into());
            series.push(r.value);
        }
        row.extend([
            gh[0].value_reference_c1.into(),
            gh[0].grad_g_scaled.into(),
            gh[0].moment_residual.into(),
            conv_worst.into(),
            local_worst.into(),
            "ok".into(),
        ]);
        report.push_row(row);
        report.probe(
            format!("level {level}: delta moment residual <= 1e-10"),
            gh[0].moment_residual <= 1e-10,
            format_float(gh[0].moment_residual),
        );
        grad_series.push(gh[0].grad_g_scaled);
        conv_series.push(conv_worst);
        local_series.push(local_worst);
    }

    let levels = &config.levels;
    if g.fine_offset == 0 {
        let max = gh_series[0].iter().copied().fold(0.0, f64::max);
        report.probe("G_h vanishes when working = fine", max == 0.0, format_float(max));
    } else if let Some(&first) = gh_series[0].first() {
        for (l, v) in levels.iter().zip(&gh_series[0]) {
            report.probe(
                format!("G_h level {l} within factor 2 of level {}", levels[0]),
                *v <= 2.0 * first && 2.0 * v >= first,
                format!("{} vs {}", format_float(*v), format_float(first)),
            );
        }
    }
    for (i, kk) in g.k_sweep.iter().enumerate() {
        if *kk > g.k {
            for (l, (a, b)) in levels.iter().zip(gh_series[0].iter().zip(&gh_series[i + 1])) {
                report.probe(
                    format!("level {l}: G_h(K={kk}) <= 1.2 G_h(K={})", g.k),
                    *b <= 1.2 * a,
                    format!("{} vs {}", format_float(*b), format_float(*a)),
                );
            }
        }
    }
    if grad_series.len() >= 2 {
        let max = grad_series.iter().copied().fold(0.0, f64::max);
        let min = grad_series.iter().copied().fold(f64::INFINITY, f64::min);
        report.probe(
            "max |grad g_z| h^2 within factor 3 across levels",
            max <= 3.0 * min,
            format!("{} .. {}", format_float(min), format_float(max)),
        );
    }
    if let Some(&first) = conv_series.first() {
        for (l, v) in levels.iter().zip(&conv_series).skip(1) {
            report.probe(
                format!("convolution ratio level {l} within 10% of level {}", levels[0]),
                (v - first).abs() <= 0.1 * first,
                format!("{} vs {}", format_float(*v), format_float(first)),
            );
        }
    }
    if let Some(&first) = local_series.first() {
        for (l, v) in levels.iter().zip(&local_series).skip(1) {
            report.probe(
                format!("local error ratio level {l} <= 1.2x level {}", levels[0]),
                *v <= 1.2 * first,
                format!("{} vs {}", format_float(*v), format_float(first)),
            );
        }
    }
    Ok(report)
}

/// All three experiments in order.
pub fn run_all(config: &ExperimentConfig) -> Result<Vec<ExperimentReport>> {
    Ok(vec![run_pointwise(config)?, run_stability(config)?, run_green(config)?])
}

#[cfg(test)]
mod tests;
