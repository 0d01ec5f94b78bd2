//! `key = value` run files. Keys are the long flag names; `-` and `_` are
//! interchangeable. Flags given on the command line win over the file.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn norm(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let key = norm(k);
            if key.is_empty() {
                bail!("line {}: empty key", i + 1);
            }
            let v = v.trim().trim_matches('"');
            if entries.insert(key.clone(), v.to_string()).is_some() {
                bail!("line {}: `{key}` given twice", i + 1);
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(&norm(key)) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| anyhow!("config `{key} = {v}`: {e}")),
        }
    }

    /// Fill `slot` from the file unless the flag already set it.
    pub fn fill<T: FromStr>(&self, slot: &mut Option<T>, key: &str) -> Result<()>
    where
        T::Err: std::fmt::Display,
    {
        if slot.is_none() {
            *slot = self.get(key)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let c = ConfigFile::parse("# run\ngap = 1e-6\ncache-dir = \"/tmp/x\"  # trailing\n\ntemp=300\n").unwrap();
        assert_eq!(c.get::<f64>("gap").unwrap(), Some(1e-6));
        assert_eq!(c.get::<String>("cache_dir").unwrap().as_deref(), Some("/tmp/x"));
        let mut t = Some(4.0);
        c.fill(&mut t, "temp").unwrap();
        assert_eq!(t, Some(4.0));
        let mut t = None;
        c.fill(&mut t, "temp").unwrap();
        assert_eq!(t, Some(300.0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(ConfigFile::parse("gap 1e-6").is_err());
        assert!(ConfigFile::parse("gap = 1\ngap = 2").is_err());
        assert!(ConfigFile::parse("gap = abc").unwrap().get::<f64>("gap").is_err());
    }
}
