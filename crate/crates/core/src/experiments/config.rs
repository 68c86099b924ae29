use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, RitzError};
use crate::experiments::corpus::corpus_function;
use crate::mesh::{ConvexPolygon, Point};
use crate::norms::{Exponent, SpaceSpec};
use crate::ritz::DEFAULT_REL_TOL;

/// A polygon given by name (`square`, `triangle`, `hexagon`) or by its
/// counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Named(String),
    Vertices(Vec<Point>),
}

impl DomainSpec {
    pub fn polygon(&self) -> Result<ConvexPolygon> {
        match self {
            DomainSpec::Named(name) => ConvexPolygon::by_name(name),
            DomainSpec::Vertices(v) => ConvexPolygon::new(v.clone()),
        }
    }
}

/// One degree or a list of degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Degrees {
    One(usize),
    Many(Vec<usize>),
}

impl Degrees {
    pub fn list(&self) -> Vec<usize> {
        match self {
            Degrees::One(k) => vec![*k],
            Degrees::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenConfig {
    #[serde(rename = "K", default = "GreenConfig::default_k")]
    pub k: f64,
    #[serde(default = "GreenConfig::default_gamma")]
    pub gamma: f64,
    #[serde(default = "GreenConfig::default_alpha")]
    pub alpha: f64,
    #[serde(default = "GreenConfig::default_k0")]
    pub k0: f64,
    #[serde(default = "GreenConfig::default_fine_offset")]
    pub fine_offset: usize,
    /// Additional values of K at which 𝒢_h is re-evaluated.
    #[serde(default = "GreenConfig::default_k_sweep")]
    pub k_sweep: Vec<f64>,
    /// Derivative component l (0 or 1) of the regularized Green's function.
    #[serde(default)]
    pub component: usize,
    #[serde(default = "GreenConfig::default_max_z")]
    pub max_z: usize,
    /// Points per level for the convolution probe.
    #[serde(default = "GreenConfig::default_convolution_points")]
    pub convolution_points: usize,
    /// Centres per level for the local error probe (two radii each).
    #[serde(default = "GreenConfig::default_local_points")]
    pub local_points: usize,
}

impl GreenConfig {
    fn default_k() -> f64 {
        4.0
    }
    fn default_gamma() -> f64 {
        0.25
    }
    fn default_alpha() -> f64 {
        0.5
    }
    fn default_k0() -> f64 {
        4.0
    }
    fn default_fine_offset() -> usize {
        2
    }
    fn default_k_sweep() -> Vec<f64> {
        vec![8.0]
    }
    fn default_max_z() -> usize {
        200
    }
    fn default_convolution_points() -> usize {
        50
    }
    fn default_local_points() -> usize {
        10
    }
}

impl Default for GreenConfig {
    fn default() -> Self {
        Self {
            k: Self::default_k(),
            gamma: Self::default_gamma(),
            alpha: Self::default_alpha(),
            k0: Self::default_k0(),
            fine_offset: Self::default_fine_offset(),
            k_sweep: Self::default_k_sweep(),
            component: 0,
            max_z: Self::default_max_z(),
            convolution_points: Self::default_convolution_points(),
            local_points: Self::default_local_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "SolverConfig::default_rel_tol")]
    pub rel_tol: f64,
}

impl SolverConfig {
    fn default_rel_tol() -> f64 {
        DEFAULT_REL_TOL
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub degree: Degrees,
    pub levels: Vec<usize>,
    pub corpus: Vec<String>,
    #[serde(default)]
    pub spaces: Vec<SpaceSpec>,
    pub sample_points: SampleConfig,
    #[serde(default)]
    pub green: GreenConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn lp(p: f64) -> SpaceSpec {
    SpaceSpec::Lp { p: Exponent(p) }
}

/// The norms probed by the stability experiment unless a config says otherwise.
pub fn default_spaces() -> Vec<SpaceSpec> {
    let power = |p: f64| SpaceSpec::Orlicz {
        phi: "power".into(),
        p: Some(p),
    };
    vec![
        lp(4.0 / 3.0),
        lp(2.0),
        lp(4.0),
        lp(8.0),
        SpaceSpec::Lorentz {
            p: 2.0,
            q: Exponent(4.0),
            weight: None,
            beta: None,
            center: [0.5, 0.5],
        },
        SpaceSpec::Lorentz {
            p: 4.0,
            q: Exponent(1.5),
            weight: None,
            beta: None,
            center: [0.5, 0.5],
        },
        power(3.0),
        SpaceSpec::Orlicz {
            phi: "exp".into(),
            p: None,
        },
        SpaceSpec::Bmo {
            centers: 64,
            radii: 12,
        },
        SpaceSpec::Wlp {
            p: 2.0,
            weight: Some("power".into()),
            beta: Some(1.0),
            center: [0.5, 0.5],
        },
        SpaceSpec::Lorentz {
            p: 2.0,
            q: Exponent(4.0),
            weight: Some("power".into()),
            beta: Some(1.0),
            center: [0.5, 0.5],
        },
        SpaceSpec::Varexp {
            p0: 2.0,
            px: 1.0,
            py: 0.0,
            weight: None,
            beta: None,
            center: [0.5, 0.5],
        },
    ]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            domain: DomainSpec::Named("square".into()),
            degree: Degrees::Many(vec![1, 2]),
            levels: vec![2, 3, 4, 5],
            corpus: ["bubble", "sine", "sing06", "sing02", "osc"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            spaces: default_spaces(),
            sample_points: SampleConfig { count: 200, seed: 0 },
            green: GreenConfig::default(),
            solver: SolverConfig::default(),
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(RitzError::Config(m));
        self.domain.polygon()?;
        if self.levels.is_empty() {
            return bad("levels must not be empty".into());
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return bad(format!("levels must be strictly ascending, got {:?}", self.levels));
        }
        let degrees = self.degree.list();
        if degrees.is_empty() {
            return bad("at least one degree is required".into());
        }
        if let Some(k) = degrees.iter().find(|&&k| k != 1 && k != 2) {
            return Err(RitzError::UnsupportedDegree(*k));
        }
        if self.corpus.is_empty() {
            return bad("corpus must not be empty".into());
        }
        for name in &self.corpus {
            corpus_function(name)?;
        }
        for space in &self.spaces {
            space.validate()?;
        }
        if self.sample_points.count == 0 {
            return bad("sample_points.count must be positive".into());
        }
        let g = &self.green;
        if !(g.k > 2.0) || g.k_sweep.iter().any(|&k| !(k > 2.0)) {
            return bad(format!("K must exceed 2 (K = {}, sweep {:?})", g.k, g.k_sweep));
        }
        if !(g.gamma > 0.0 && g.gamma < g.alpha && g.alpha <= 1.0) {
            return bad(format!("need 0 < gamma < alpha <= 1, got gamma {} alpha {}", g.gamma, g.alpha));
        }
        if !(g.k0 > 0.0) {
            return bad(format!("k0 must be positive, got {}", g.k0));
        }
        if g.component > 1 {
            return bad(format!("green.component must be 0 or 1, got {}", g.component));
        }
        if g.max_z == 0 {
            return bad("green.max_z must be positive".into());
        }
        if !(self.solver.rel_tol > 0.0 && self.solver.rel_tol < 1.0) {
            return bad(format!("solver.rel_tol must lie in (0, 1), got {}", self.solver.rel_tol));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
