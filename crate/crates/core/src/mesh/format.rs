//! Plain-text mesh files.
//!
//! ```text
//! NV NT NB
//! x y            (NV lines)
//! v1 v2 v3       (NT lines, 1-based)
//! va vb tag      (NB lines, 1-based)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{BoundarySegment, BoundaryTag, MeshData, MeshError};

pub fn write_mesh_string(data: &MeshData) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} {}",
        data.vertices.len(),
        data.triangles.len(),
        data.boundary.len()
    );
    for v in &data.vertices {
        let _ = writeln!(s, "{:.16e} {:.16e}", v[0], v[1]);
    }
    for t in &data.triangles {
        let _ = writeln!(s, "{} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    for b in &data.boundary {
        let _ = writeln!(s, "{} {} {}", b.a + 1, b.b + 1, b.tag);
    }
    s
}

pub fn write_mesh(data: &MeshData, path: &Path) -> Result<(), MeshError> {
    std::fs::write(path, write_mesh_string(data))?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<MeshData, MeshError> {
    parse_mesh(&std::fs::read_to_string(path)?)
}

pub fn parse_mesh(text: &str) -> Result<MeshData, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line: usize, msg: String| MeshError::Parse { line, msg };
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("header")?;
    let counts: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(ln, format!("bad count `{t}`"))))
        .collect::<Result<_, _>>()?;
    let [nv, nt, nb] = counts[..] else {
        return Err(err(ln, "header must be `NV NT NB`".into()));
    };

    let mut data = MeshData::default();
    for _ in 0..nv {
        let (ln, l) = next("vertex")?;
        let xy: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(ln, format!("bad coordinate `{t}`"))))
            .collect::<Result<_, _>>()?;
        let [x, y] = xy[..] else {
            return Err(err(ln, "vertex line needs 2 coordinates".into()));
        };
        data.vertices.push([x, y]);
    }
    let index = |ln: usize, t: &str| -> Result<usize, MeshError> {
        match t.parse::<usize>() {
            Ok(v) if (1..=nv).contains(&v) => Ok(v - 1),
            _ => Err(err(ln, format!("bad vertex index `{t}`"))),
        }
    };
    for _ in 0..nt {
        let (ln, l) = next("triangle")?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(|t| index(ln, t))
            .collect::<Result<_, _>>()?;
        let [a, b, c] = ids[..] else {
            return Err(err(ln, "triangle line needs 3 indices".into()));
        };
        data.triangles.push([a, b, c]);
    }
    for _ in 0..nb {
        let (ln, l) = next("boundary segment")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [a, b, tag] = toks[..] else {
            return Err(err(ln, "boundary line needs `va vb tag`".into()));
        };
        let tag: BoundaryTag = tag.parse().map_err(|e| err(ln, e))?;
        data.boundary.push(BoundarySegment {
            a: index(ln, a)?,
            b: index(ln, b)?,
            tag,
        });
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "trailing content after boundary section".into()));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, Pattern, Side, Sides};

    #[test]
    fn round_trip_is_bit_exact() {
        let mut d = generate_structured([-5.0, 5.0, -1.0, 0.3], 7, 5, Pattern::Alternating, Sides::xy(Side::Exact, Side::Periodic))
            .unwrap();
        d.vertices[3] = [std::f64::consts::PI, -1.0 / 3.0];
        let back = parse_mesh(&write_mesh_string(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_mesh("3 1 0\n0 0\n1 0\n0 1\n1 2 4\n").unwrap_err();
        assert!(matches!(e, MeshError::Parse { line: 5, .. }));
        assert!(matches!(parse_mesh("1 2\n"), Err(MeshError::Parse { line: 1, .. })));
        let e = parse_mesh("3 1 1\n0 0\n1 0\n0 1\n1 2 3\n1 2 slip\n").unwrap_err();
        assert!(matches!(e, MeshError::Parse { line: 6, .. }));
    }
}
