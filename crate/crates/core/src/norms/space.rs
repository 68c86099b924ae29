//! Serializable descriptors of the norms used in stability experiments.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, RitzError};
use crate::field::PiecewiseField;
use crate::mesh::{ConvexPolygon, Point};
use crate::norms::{
    bmo_seminorm, lorentz_norm_samples, lp_norm_samples, orlicz_norm_samples, varexp_norm_samples,
    FieldSamples, OrliczFunction, VariableExponent, Weight,
};

/// An exponent that may be infinite; written as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Exponent(x)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(Exponent(f64::INFINITY))
            }
            Raw::Text(t) => Err(de::Error::custom(format!("invalid exponent {t:?}"))),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn default_center() -> Point {
    [0.5, 0.5]
}

fn default_centers() -> usize {
    64
}

fn default_radii() -> usize {
    12
}

/// A target norm, tagged by `"space"` in JSON, e.g.
/// `{"space":"lorentz","p":2,"q":4}` or
/// `{"space":"wlp","p":2,"weight":"power","beta":1,"center":[0.5,0.5]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Lp {
        p: Exponent,
    },
    Wlp {
        p: f64,
        #[serde(default)]
        weight: Option<String>,
        #[serde(default)]
        beta: Option<f64>,
        #[serde(default = "default_center")]
        center: Point,
    },
    Lorentz {
        p: f64,
        q: Exponent,
        #[serde(default)]
        weight: Option<String>,
        #[serde(default)]
        beta: Option<f64>,
        #[serde(default = "default_center")]
        center: Point,
    },
    Orlicz {
        phi: String,
        #[serde(default)]
        p: Option<f64>,
    },
    Bmo {
        #[serde(default = "default_centers")]
        centers: usize,
        #[serde(default = "default_radii")]
        radii: usize,
    },
    Varexp {
        p0: f64,
        #[serde(default)]
        px: f64,
        #[serde(default)]
        py: f64,
        #[serde(default)]
        weight: Option<String>,
        #[serde(default)]
        beta: Option<f64>,
        #[serde(default = "default_center")]
        center: Point,
    },
}

fn build_weight(name: &Option<String>, beta: Option<f64>, center: Point) -> Result<Option<Weight>> {
    match name.as_deref() {
        None | Some("one") => Ok(None),
        Some("power") => {
            let beta = beta.ok_or_else(|| RitzError::Config("power weight needs \"beta\"".into()))?;
            Ok(Some(Weight::power(beta, center)))
        }
        Some(other) => Err(RitzError::Config(format!(
            "unknown weight {other:?} (valid: one, power)"
        ))),
    }
}

fn weight_label(name: &Option<String>, beta: Option<f64>, center: Point) -> String {
    match name.as_deref() {
        Some("power") => format!(";w=|x-({},{})|^{}", center[0], center[1], beta.unwrap_or(f64::NAN)),
        _ => String::new(),
    }
}

impl SpaceSpec {
    /// Short identifier used in report rows.
    pub fn label(&self) -> String {
        match self {
            SpaceSpec::Lp { p } => format!("L^{p}"),
            SpaceSpec::Wlp { p, weight, beta, center } => {
                format!("L^{p}(w{})", weight_label(weight, *beta, *center))
            }
            SpaceSpec::Lorentz { p, q, weight, beta, center } => {
                format!("L^({p},{q}){}", weight_label(weight, *beta, *center))
            }
            SpaceSpec::Orlicz { phi, p } => match p {
                Some(p) => format!("Orlicz({phi};p={p})"),
                None => format!("Orlicz({phi})"),
            },
            SpaceSpec::Bmo { centers, radii } => format!("BMO({centers}x{radii})"),
            SpaceSpec::Varexp { p0, px, py, weight, beta, center } => {
                format!("L^({p0}+{px}x+{py}y){}", weight_label(weight, *beta, *center))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(RitzError::Config(m));
        match self {
            SpaceSpec::Lp { p } if !(p.0 >= 1.0) => bad(format!("L^p needs p >= 1, got {p}")),
            SpaceSpec::Wlp { p, weight, beta, center } => {
                if !(*p > 1.0 && p.is_finite()) {
                    return bad(format!("weighted L^p needs 1 < p < inf, got {p}"));
                }
                build_weight(weight, *beta, *center).map(|_| ())
            }
            SpaceSpec::Lorentz { p, q, weight, beta, center } => {
                let ok = (*p > 1.0 && p.is_finite() && q.0 > 1.0) || (*p == 1.0 && q.0.is_infinite());
                if !ok {
                    return bad(format!("invalid Lorentz exponents ({p}, {q})"));
                }
                build_weight(weight, *beta, *center).map(|_| ())
            }
            SpaceSpec::Orlicz { phi, p } => match (phi.as_str(), p) {
                ("power", Some(p)) if *p > 1.0 => Ok(()),
                ("power", _) => bad("Orlicz power needs \"p\" > 1".into()),
                ("exp" | "t2log", _) => Ok(()),
                (other, _) => bad(format!("unknown Orlicz function {other:?} (valid: power, exp, t2log)")),
            },
            SpaceSpec::Bmo { centers, radii } if *centers == 0 || *radii == 0 => {
                bad("BMO sampling counts must be positive".into())
            }
            SpaceSpec::Varexp { p0, weight, beta, center, .. } => {
                if !(*p0 >= 1.0) {
                    return bad(format!("variable exponent needs p0 >= 1, got {p0}"));
                }
                build_weight(weight, *beta, *center).map(|_| ())
            }
            _ => Ok(()),
        }
    }

    fn orlicz_function(phi: &str, p: Option<f64>) -> Result<OrliczFunction> {
        match phi {
            "power" => Ok(OrliczFunction::power(p.unwrap_or(2.0))),
            "exp" => Ok(OrliczFunction::exp_minus_one()),
            "t2log" => Ok(OrliczFunction::t2_log()),
            other => Err(RitzError::Config(format!("unknown Orlicz function {other:?}"))),
        }
    }

    /// Norm of `f`; quadrature samples are computed once per call.
    pub fn norm(&self, f: &PiecewiseField) -> Result<f64> {
        self.validate()?;
        let domain: &ConvexPolygon = f.mesh().domain();
        let samples = || FieldSamples::new(f);
        let weighted = |w: Option<Weight>| match w {
            Some(w) => samples().weighted(&w),
            None => samples(),
        };
        Ok(match self {
            SpaceSpec::Lp { p } => lp_norm_samples(&samples(), p.0),
            SpaceSpec::Wlp { p, weight, beta, center } => {
                lp_norm_samples(&weighted(build_weight(weight, *beta, *center)?), *p)
            }
            SpaceSpec::Lorentz { p, q, weight, beta, center } => {
                lorentz_norm_samples(&weighted(build_weight(weight, *beta, *center)?), *p, q.0)
            }
            SpaceSpec::Orlicz { phi, p } => orlicz_norm_samples(&samples(), &Self::orlicz_function(phi, *p)?),
            SpaceSpec::Bmo { centers, radii } => bmo_seminorm(f, *centers, *radii),
            SpaceSpec::Varexp { p0, px, py, weight, beta, center } => {
                let exponent = VariableExponent::affine(*p0, *px, *py, domain);
                if exponent.p_minus < 1.0 {
                    return Err(RitzError::Config(format!(
                        "variable exponent drops to {} on the domain",
                        exponent.p_minus
                    )));
                }
                let w = build_weight(weight, *beta, *center)?.unwrap_or_else(Weight::one);
                varexp_norm_samples(&samples(), &exponent, &w)
            }
        })
    }
}
