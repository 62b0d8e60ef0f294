//! Line-oriented body files.
//!
//! ```text
//! file    := (body | blank | comment)*
//! body    := "kappa" WS real NL  vertex+
//! vertex  := "v" WS real WS real NL        # r theta, polar about x₀
//! comment := "#" any* NL                   # also allowed after content
//! blank   := WS* NL                        # ends the current body
//! ```
//!
//! Reals use Rust's `f64` syntax. Vertex indices in diagnostics count from 0
//! within their body; line numbers count from 1. A `kappa` line also starts a
//! new body when no blank line precedes it.

use std::fmt::Write as _;
use std::path::Path;

use crate::convex::{convex_hull, GeodesicPolygon};
use crate::error::{Error, Result};
use crate::surface::{exp_at_base, Curvature};

struct Pending {
    kappa: Curvature,
    line: usize,
    vertices: Vec<(usize, f64, f64)>,
}

fn parse_error(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn real(path: &str, line: usize, what: &str, token: &str) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(parse_error(path, line, format!("{what}: expected a finite real, got '{token}'"))),
    }
}

fn finish(path: &str, pending: Pending, index: usize, out: &mut Vec<(Curvature, GeodesicPolygon)>) -> Result<()> {
    if pending.vertices.is_empty() {
        return Err(parse_error(path, pending.line, format!("body {index}: no vertices")));
    }
    let mut pts = Vec::with_capacity(pending.vertices.len());
    for (i, &(line, r, theta)) in pending.vertices.iter().enumerate() {
        let p = exp_at_base(pending.kappa, r, theta)
            .map_err(|e| parse_error(path, line, format!("body {index}, vertex {i}: {e}")))?;
        pts.push(p);
    }
    let body = convex_hull(&pts).map_err(|e| parse_error(path, pending.line, format!("body {index}: {e}")))?;
    out.push((pending.kappa, body));
    Ok(())
}

/// Parses body-file text; `path` only labels diagnostics.
pub fn parse_body_str(text: &str, path: &str) -> Result<Vec<(Curvature, GeodesicPolygon)>> {
    let mut out = Vec::new();
    let mut current: Option<Pending> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        if raw.trim().is_empty() {
            if let Some(p) = current.take() {
                finish(path, p, out.len(), &mut out)?;
            }
            continue;
        }
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["kappa", value] => {
                if let Some(p) = current.take() {
                    finish(path, p, out.len(), &mut out)?;
                }
                let kappa = Curvature::new(real(path, line, "kappa", value)?)
                    .map_err(|e| parse_error(path, line, e.to_string()))?;
                current = Some(Pending {
                    kappa,
                    line,
                    vertices: Vec::new(),
                });
            }
            ["v", r, theta] => {
                let Some(p) = current.as_mut() else {
                    return Err(parse_error(path, line, "vertex before any 'kappa' header"));
                };
                let i = p.vertices.len();
                let r = real(path, line, &format!("vertex {i} radius"), r)?;
                let theta = real(path, line, &format!("vertex {i} angle"), theta)?;
                if r < 0.0 {
                    return Err(parse_error(path, line, format!("vertex {i}: negative radius {r}")));
                }
                p.vertices.push((line, r, theta));
            }
            ["v", ..] => {
                let i = current.as_ref().map_or(0, |p| p.vertices.len());
                return Err(parse_error(path, line, format!("vertex {i}: expected 'v <r> <theta>'")));
            }
            [word, ..] => {
                return Err(parse_error(path, line, format!("unknown directive '{word}'")));
            }
        }
    }
    if let Some(p) = current.take() {
        finish(path, p, out.len(), &mut out)?;
    }
    Ok(out)
}

pub fn parse_body_file(path: &Path) -> Result<Vec<(Curvature, GeodesicPolygon)>> {
    let text = std::fs::read_to_string(path)?;
    parse_body_str(&text, &path.display().to_string())
}

/// Writes bodies in the format read by [`parse_body_str`]. Reals are printed
/// in shortest round-trip form.
pub fn emit_bodies(bodies: &[(Curvature, GeodesicPolygon)]) -> String {
    let mut s = String::new();
    for (i, (kappa, body)) in bodies.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "kappa {}", kappa.value());
        for v in body.vertices() {
            let (r, theta) = v.polar();
            let _ = writeln!(s, "v {r} {theta}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::random_body;
    use crate::rng::RandomStream;

    #[test]
    fn one_body() {
        let text = "# square\nkappa 0\nv 0.7071067811865476 0.7853981633974483\nv 0.7071067811865476 2.356194490192345\nv 0.7071067811865476 3.9269908169872414  # third\nv 0.7071067811865476 5.497787143782138\n";
        let bodies = parse_body_str(text, "t").unwrap();
        assert_eq!(bodies.len(), 1);
        assert_eq!(bodies[0].1.len(), 4);
        assert!((bodies[0].1.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn several_bodies() {
        let text = "kappa 1\nv 0.5 0\nv 0.5 2\nv 0.5 4\n\n\nkappa -1\nv 1 0\nv 1 3\nkappa 0\nv 0 0\n";
        let bodies = parse_body_str(text, "t").unwrap();
        assert_eq!(bodies.len(), 3);
        assert_eq!(bodies[1].0.value(), -1.0);
        assert!(bodies[1].1.is_segment());
        assert!(bodies[2].1.is_point());
    }

    #[test]
    fn rejects_vertex_beyond_antipode() {
        let text = "kappa 1\nv 0.5 0\nv 3.2 1\nv 0.5 2\n";
        let e = parse_body_str(text, "f.txt").unwrap_err().to_string();
        assert!(e.contains("f.txt:3") && e.contains("vertex 1"), "{e}");
    }

    #[test]
    fn diagnostics_name_line_and_vertex() {
        let cases = [
            ("kappa 0\nv 1 0\nv 1 zz\n", "t:3", "vertex 1 angle"),
            ("kappa 0\nv 1 0\nv 1\n", "t:3", "vertex 1"),
            ("v 1 0\n", "t:1", "before"),
            ("kappa x\n", "t:1", "kappa"),
            ("kappa 0\nv -1 0\n", "t:2", "vertex 0: negative"),
            ("kappa 0\nw 1 2\n", "t:2", "unknown"),
            ("kappa 1\nv 0 0\nv 2.5 0\nv 2.5 2.1\nv 2.5 4.2\n", "t:1", "body 0"),
        ];
        for (text, at, what) in cases {
            let e = parse_body_str(text, "t").unwrap_err().to_string();
            assert!(e.contains(at) && e.contains(what), "{text:?}: {e}");
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = RandomStream::new(11);
        let mut bodies = Vec::new();
        for &kv in &[-2.0, -1.0, 0.0, 0.5, 1.0] {
            let kk = Curvature::new(kv).unwrap();
            for _ in 0..20 {
                bodies.push((kk, random_body(kk, 12, &mut rng)));
            }
        }
        let back = parse_body_str(&emit_bodies(&bodies), "t").unwrap();
        assert_eq!(back.len(), bodies.len());
        for ((k0, b0), (k1, b1)) in bodies.iter().zip(&back) {
            assert_eq!(k0, k1);
            assert_eq!(b0.len(), b1.len());
            for (u, v) in b0.vertices().iter().zip(b1.vertices()) {
                assert!((u.coords() - v.coords()).amax() < 1e-12);
            }
        }
    }
}
