use crate::error::Result;
use crate::geometry::{canonical_bytes, SurfaceMesh};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// FNV-1a over the canonical mesh file followed by the method tag.
pub fn geometry_hash(mesh: &SurfaceMesh, tag: &str) -> u64 {
    let mut bytes = canonical_bytes(mesh);
    bytes.extend_from_slice(tag.as_bytes());
    fnv1a(&bytes)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CacheRead {
    Hit(Vec<(f64, f64)>),
    Miss,
    Corrupt(String),
}

/// Directory of `<hash>.psi` files.
#[derive(Debug, Clone)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ProfileCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, hash: u64) -> PathBuf {
        self.dir.join(format!("{hash:016x}.psi"))
    }

    pub fn load(&self, hash: u64) -> CacheRead {
        let text = match fs::read_to_string(self.path_for(hash)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return CacheRead::Miss,
            Err(e) => return CacheRead::Corrupt(e.to_string()),
        };
        match parse(&text, hash) {
            Ok(s) => CacheRead::Hit(s),
            Err(msg) => CacheRead::Corrupt(msg),
        }
    }

    /// Write atomically: temp file in the same directory, then rename.
    pub fn store(&self, hash: u64, samples: &[(f64, f64)], interaction_only: bool) -> Result<()> {
        let mut out = format!("psi {hash:016x} {} {}\n", samples.len(), interaction_only as u8);
        for (y, p) in samples {
            out.push_str(&format!("{y:.16e} {p:.16e}\n"));
        }
        let tmp = self.dir.join(format!(".{hash:016x}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(out.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path_for(hash))?;
        Ok(())
    }

    /// Look up a single y sample, bit-exact in y.
    pub fn lookup(&self, hash: u64, y: f64) -> Option<f64> {
        match self.load(hash) {
            CacheRead::Hit(s) => s.iter().find(|s| s.0.to_bits() == y.to_bits()).map(|s| s.1),
            _ => None,
        }
    }
}

fn parse(text: &str, hash: u64) -> std::result::Result<Vec<(f64, f64)>, String> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().ok_or("empty cache file")?.split_whitespace().collect();
    if head.len() != 4 || head[0] != "psi" {
        return Err("bad header".into());
    }
    if u64::from_str_radix(head[1], 16).map_err(|e| e.to_string())? != hash {
        return Err("hash mismatch".into());
    }
    let count: usize = head[2].parse().map_err(|_| "bad count")?;
    if head[3] != "0" && head[3] != "1" {
        return Err("bad interaction flag".into());
    }
    let mut out = Vec::with_capacity(count);
    for l in lines.filter(|l| !l.trim().is_empty()) {
        let mut it = l.split_whitespace();
        let y: f64 = it.next().and_then(|t| t.parse().ok()).ok_or("bad row")?;
        let p: f64 = it.next().and_then(|t| t.parse().ok()).ok_or("bad row")?;
        if it.next().is_some() || !y.is_finite() || !p.is_finite() {
            return Err("bad row".into());
        }
        out.push((y, p));
    }
    if out.len() != count {
        return Err(format!("expected {count} rows, found {}", out.len()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn store_load_bit_exact() {
        let d = tempfile::tempdir().unwrap();
        let c = ProfileCache::new(d.path()).unwrap();
        let s = vec![(0.1f64, -1.0 / 3.0), (std::f64::consts::PI, 1e-300), (7.0, -0.25)];
        c.store(42, &s, true).unwrap();
        match c.load(42) {
            CacheRead::Hit(r) => {
                for (a, b) in r.iter().zip(&s) {
                    assert_eq!(a.0.to_bits(), b.0.to_bits());
                    assert_eq!(a.1.to_bits(), b.1.to_bits());
                }
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(c.lookup(42, std::f64::consts::PI), Some(1e-300));
        assert_eq!(c.load(43), CacheRead::Miss);
        fs::write(c.path_for(44), "psi 000000000000002c 3 0\n1 2\n").unwrap();
        assert!(matches!(c.load(44), CacheRead::Corrupt(_)));
    }
}
