//! Line-oriented ASCII mesh format:
//!
//! ```text
//! MESH2D <n_vertices> <n_triangles>
//! v <x> <y> <boundary_flag>
//! t <i0> <i1> <i2>
//! ```
//!
//! Coordinates use 17 significant digits so they round-trip exactly.

use std::io::{BufRead, Write};

use crate::error::{RitzError, Result};
use crate::mesh::{ConvexPolygon, Triangulation};

pub fn write_mesh<W: Write>(mesh: &Triangulation, mut out: W) -> Result<()> {
    writeln!(out, "MESH2D {} {}", mesh.n_vertices(), mesh.n_triangles())?;
    for (v, b) in mesh.vertices().iter().zip(mesh.boundary_flags()) {
        writeln!(out, "v {:.16e} {:.16e} {}", v[0], v[1], u8::from(*b))?;
    }
    for t in mesh.triangles() {
        writeln!(out, "t {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}

/// Reads a mesh of the given polygon. The level is not stored in the format
/// and is supplied by the caller.
pub fn read_mesh<R: BufRead>(input: R, domain: ConvexPolygon, level: usize) -> Result<Triangulation> {
    let mut lines = input.lines().enumerate();
    let perr = |line: usize, message: &str| RitzError::Parse {
        line: line + 1,
        message: message.to_string(),
    };
    let (ln, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let header = header?;
    let mut it = header.split_whitespace();
    if it.next() != Some("MESH2D") {
        return Err(perr(ln, "expected MESH2D header"));
    }
    let nv: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(ln, "bad vertex count"))?;
    let nt: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| perr(ln, "bad triangle count"))?;

    let mut vertices = Vec::with_capacity(nv);
    let mut boundary = Vec::with_capacity(nv);
    let mut triangles = Vec::with_capacity(nt);
    for (ln, line) in lines {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            ["v", x, y, b] => {
                let x: f64 = x.parse().map_err(|_| perr(ln, "bad x coordinate"))?;
                let y: f64 = y.parse().map_err(|_| perr(ln, "bad y coordinate"))?;
                let b = match *b {
                    "0" => false,
                    "1" => true,
                    _ => return Err(perr(ln, "boundary flag must be 0 or 1")),
                };
                vertices.push([x, y]);
                boundary.push(b);
            }
            ["t", a, b, c] => {
                let mut tri = [0usize; 3];
                for (slot, s) in tri.iter_mut().zip([a, b, c]) {
                    *slot = s.parse().map_err(|_| perr(ln, "bad vertex index"))?;
                }
                triangles.push(tri);
            }
            _ => return Err(perr(ln, "unrecognised record")),
        }
    }
    if vertices.len() != nv || triangles.len() != nt {
        return Err(perr(
            0,
            &format!(
                "header announces {nv} vertices and {nt} triangles, found {} and {}",
                vertices.len(),
                triangles.len()
            ),
        ));
    }
    Triangulation::from_parts(domain, vertices, triangles, boundary, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::mesh_at_level;

    #[test]
    fn round_trip_is_exact() {
        let hex = ConvexPolygon::regular(6, 1.0).unwrap();
        let m = mesh_at_level(&hex, 2).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&format!("MESH2D {} {}\n", m.n_vertices(), m.n_triangles())));
        let back = read_mesh(&buf[..], hex, 2).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
        assert_eq!(back.boundary_flags(), m.boundary_flags());
    }

    #[test]
    fn rejects_bad_counts() {
        let text = "MESH2D 3 1\nv 0 0 1\nv 1 0 1\nt 0 1 2\n";
        assert!(read_mesh(text.as_bytes(), ConvexPolygon::unit_square(), 0).is_err());
    }
}
