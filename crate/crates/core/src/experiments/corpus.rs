use std::f64::consts::PI;

use crate::error::{Result, RitzError};
use crate::fem::AnalyticFunction;
use crate::mesh::Point;

pub const CORPUS_NAMES: [&str; 5] = ["bubble", "sine", "sing06", "sing02", "osc"];

fn bubble(x: Point) -> (f64, [f64; 2]) {
    let (a, b) = (x[0] * (1.0 - x[0]), x[1] * (1.0 - x[1]));
    (a * b, [(1.0 - 2.0 * x[0]) * b, a * (1.0 - 2.0 * x[1])])
}

/// `|x − c|^s · bubble`, with the gradient set to zero at `c` itself.
fn singular(name: &str, s: f64, c: Point) -> AnalyticFunction {
    AnalyticFunction::new(
        name,
        move |x| {
            let r = (x[0] - c[0]).hypot(x[1] - c[1]);
            r.powf(s) * bubble(x).0
        },
        move |x| {
            let (dx, dy) = (x[0] - c[0], x[1] - c[1]);
            let r = dx.hypot(dy);
            if r == 0.0 {
                return [0.0, 0.0];
            }
            let (b, gb) = bubble(x);
            let rs = r.powf(s);
            let f = s * rs / (r * r) * b;
            [f * dx + rs * gb[0], f * dy + rs * gb[1]]
        },
        true,
    )
}

/// The named test function on the unit square; all vanish on its boundary.
pub fn corpus_function(name: &str) -> Result<AnalyticFunction> {
    Ok(match name {
        "bubble" => AnalyticFunction::new("bubble", |x| bubble(x).0, |x| bubble(x).1, true),
        "sine" => AnalyticFunction::new(
            "sine",
            |x| (PI * x[0]).sin() * (PI * x[1]).sin(),
            |x| {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                [PI * cx * sy, PI * sx * cy]
            },
            true,
        ),
        "sing06" => singular("sing06", 0.6, [0.5, 0.5]),
        "sing02" => singular("sing02", 0.2, [0.3, 0.7]),
        "osc" => {
            let w = 8.0 * PI;
            AnalyticFunction::new(
                "osc",
                move |x| (w * x[0]).sin() * (w * x[1]).sin() * bubble(x).0,
                move |x| {
                    let (sx, cx) = (w * x[0]).sin_cos();
                    let (sy, cy) = (w * x[1]).sin_cos();
                    let (b, gb) = bubble(x);
                    [w * cx * sy * b + sx * sy * gb[0], w * sx * cy * b + sx * sy * gb[1]]
                },
                true,
            )
        }
        other => {
            return Err(RitzError::UnknownCorpus {
                name: other.to_string(),
                valid: CORPUS_NAMES.join(", "),
            })
        }
    })
}

/// Every registered function, in a fixed order.
pub fn corpus_registry() -> Vec<AnalyticFunction> {
    CORPUS_NAMES
        .iter()
        .map(|n| corpus_function(n).expect("registered name"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ConvexPolygon;

    #[test]
    fn registry_is_valid() {
        let sq = ConvexPolygon::unit_square();
        for u in corpus_registry() {
            assert!(u.max_boundary_value(&sq, 1000) < 1e-15, "{}", u.name());
            let fd = u.gradient_fd_mismatch(&sq, 200, 11);
            assert!(fd < 1e-5, "{}: {fd}", u.name());
        }
    }

    #[test]
    fn sine_gradient_matches_differences() {
        let u = corpus_function("sine").unwrap();
        assert!(u.gradient_fd_mismatch(&ConvexPolygon::unit_square(), 500, 3) < 1e-6);
    }

    #[test]
    fn sing06_gradient_blows_up() {
        let u = corpus_function("sing06").unwrap();
        // 0.6·r^{−0.4}·bubble(c) with bubble(c) = 1/16, plus an O(r^{0.6}) term
        let r: f64 = 1e-3;
        let g = u.gradient([0.5 + r, 0.5]);
        let leading = 0.6 * r.powf(-0.4) / 16.0;
        assert!((g[0].hypot(g[1]) - leading).abs() < 0.01 * leading);
        let g6 = u.gradient([0.5, 0.5 + 1e-6]);
        assert!(g6[0].hypot(g6[1]) > 15.0 * leading);
    }

    #[test]
    fn unknown_name_lists_choices() {
        let e = corpus_function("wave").unwrap_err().to_string();
        assert!(e.contains("bubble") && e.contains("osc"));
    }
}
