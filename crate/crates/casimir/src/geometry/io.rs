//! Plain-text mesh format:
//!
//! ```text
//! panels N sheets M
//! sheet <id> genus <n> closed <0|1>      (M lines, optional when reading)
//! x y z nx ny nz area k1 k2 sheet        (N lines, 17 significant digits)
//! ```
//!
//! `k1` is the principal curvature along the first tangent direction (azimuthal
//! on surfaces of revolution), positive where the surface bends away from the normal.

use super::{Panel, Sheet, SurfaceMesh, V3};
use crate::error::{CasimirError, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn canonical_bytes(mesh: &SurfaceMesh) -> Vec<u8> {
    let mut s = String::with_capacity(200 * mesh.len() + 64);
    let _ = writeln!(s, "panels {} sheets {}", mesh.len(), mesh.sheets.len());
    for (i, sh) in mesh.sheets.iter().enumerate() {
        let _ = writeln!(s, "sheet {i} genus {} closed {}", sh.genus, sh.closed as u8);
    }
    for p in &mesh.panels {
        let _ = writeln!(
            s,
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {}",
            p.centroid.x,
            p.centroid.y,
            p.centroid.z,
            p.normal.x,
            p.normal.y,
            p.normal.z,
            p.area,
            p.kappa1,
            p.kappa2,
            p.sheet
        );
    }
    s.into_bytes()
}

pub fn write_mesh(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    std::fs::write(path, canonical_bytes(mesh))?;
    Ok(())
}

fn parse_err(line: usize, what: &str) -> CasimirError {
    CasimirError::Mesh(format!("line {line}: {what}"))
}

pub fn parse_mesh(text: &str) -> Result<SurfaceMesh> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (ln, head) = lines.next().ok_or_else(|| CasimirError::Mesh("empty mesh file".into()))?;
    let h: Vec<&str> = head.split_whitespace().collect();
    if h.len() != 4 || h[0] != "panels" || h[2] != "sheets" {
        return Err(parse_err(ln + 1, "expected `panels N sheets M`"));
    }
    let n: usize = h[1].parse().map_err(|_| parse_err(ln + 1, "bad panel count"))?;
    let m: usize = h[3].parse().map_err(|_| parse_err(ln + 1, "bad sheet count"))?;
    let mut sheets = vec![Sheet { genus: 0, closed: false }; m];
    let mut panels = Vec::with_capacity(n);
    for (ln, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.first() == Some(&"sheet") {
            if f.len() != 6 || f[2] != "genus" || f[4] != "closed" {
                return Err(parse_err(ln + 1, "expected `sheet i genus n closed 0|1`"));
            }
            let i: usize = f[1].parse().map_err(|_| parse_err(ln + 1, "bad sheet id"))?;
            let g: u32 = f[3].parse().map_err(|_| parse_err(ln + 1, "bad genus"))?;
            if i >= m {
                return Err(parse_err(ln + 1, "sheet id out of range"));
            }
            sheets[i] = Sheet { genus: g, closed: f[5] == "1" };
            continue;
        }
        if f.len() != 10 {
            return Err(parse_err(ln + 1, "expected 10 fields per panel"));
        }
        let mut v = [0.0f64; 9];
        for k in 0..9 {
            v[k] = f[k].parse().map_err(|_| parse_err(ln + 1, "bad number"))?;
        }
        let sheet: usize = f[9].parse().map_err(|_| parse_err(ln + 1, "bad sheet index"))?;
        panels.push(Panel {
            centroid: V3::new(v[0], v[1], v[2]),
            normal: V3::new(v[3], v[4], v[5]),
            area: v[6],
            kappa1: v[7],
            kappa2: v[8],
            sheet,
        });
    }
    if panels.len() != n {
        return Err(CasimirError::Mesh(format!("header says {n} panels, found {}", panels.len())));
    }
    SurfaceMesh::new(panels, sheets)
}

pub fn read_mesh(path: &Path) -> Result<SurfaceMesh> {
    parse_mesh(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_sphere;

    #[test]
    fn round_trip_is_bit_exact() {
        let m = make_sphere(0.37, 200).unwrap();
        let back = parse_mesh(std::str::from_utf8(&canonical_bytes(&m)).unwrap()).unwrap();
        assert_eq!(back.panels, m.panels);
        assert_eq!(back.sheets, m.sheets);
        assert_eq!(canonical_bytes(&back), canonical_bytes(&m));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_mesh("").is_err());
        assert!(parse_mesh("panels 1 sheets 1\n0 0 0 0 0 1 1 0 0").is_err());
        assert!(parse_mesh("panels 1 sheets 1\n0 0 0 0 0 1 1 0 0 3").is_err());
        assert!(parse_mesh("panels 1 sheets 1\n0 0 0 0 0 2 1 0 0 0").is_err());
        assert!(parse_mesh("panels 2 sheets 1\n0 0 0 0 0 1 1 0 0 0").is_err());
    }
}
