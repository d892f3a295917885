//! Fundamental-solution cache, in memory and on disk.
//!
//! File format: a `pellcache v1` header line followed by `D,t,u` lines in
//! increasing `D`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::RwLock;

use num_bigint::BigUint;

use super::solve::PellSolution;
use crate::error::{Error, Result};

pub const CACHE_HEADER: &str = "pellcache v1";

/// Thread-safe map `D -> ε_D`; reads take a shared lock.
#[derive(Debug, Default)]
pub struct SolutionCache {
    entries: RwLock<BTreeMap<u64, PellSolution>>,
}

impl SolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_solutions(items: impl IntoIterator<Item = PellSolution>) -> Self {
        let c = Self::new();
        c.extend(items);
        c
    }

    pub fn get(&self, d: u64) -> Option<PellSolution> {
        self.entries.read().unwrap().get(&d).cloned()
    }

    pub fn insert(&self, s: PellSolution) {
        self.entries.write().unwrap().insert(s.d, s);
    }

    pub fn extend(&self, items: impl IntoIterator<Item = PellSolution>) {
        let mut map = self.entries.write().unwrap();
        for s in items {
            map.insert(s.d, s);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries sorted by `D`.
    pub fn solutions(&self) -> Vec<PellSolution> {
        self.entries.read().unwrap().values().cloned().collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::from_solutions(read_cache(path)?))
    }

    /// A missing file yields an empty cache.
    pub fn load_or_empty(path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_cache(path, &self.solutions())
    }
}

/// Write solutions sorted by `D`.
pub fn write_cache(path: &Path, entries: &[PellSolution]) -> Result<()> {
    let mut sorted: Vec<&PellSolution> = entries.iter().collect();
    sorted.sort_by_key(|s| s.d);
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{CACHE_HEADER}")?;
    for s in sorted {
        writeln!(out, "{},{},{}", s.d, s.t, s.u)?;
    }
    out.flush()?;
    Ok(())
}

/// Read and validate a cache file. Line numbers in errors are 1-based and
/// count the header.
pub fn read_cache(path: &Path) -> Result<Vec<PellSolution>> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != CACHE_HEADER {
        return Err(Error::CacheVersion(header));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::CacheLine {
            line: line_no,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 {
            return Err(bad("expected three comma-separated fields"));
        }
        let d: u64 = fields[0].parse().map_err(|_| bad("invalid D"))?;
        let t: BigUint = fields[1].parse().map_err(|_| bad("invalid t"))?;
        let u: BigUint = fields[2].parse().map_err(|_| bad("invalid u"))?;
        if let Some(prev) = out.last().map(|s: &PellSolution| s.d) {
            if d <= prev {
                return Err(bad("entries not sorted by D"));
            }
        }
        let s = PellSolution::new(d, t, u).map_err(|_| bad("t^2 - D u^2 != 1"))?;
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(d: u64, t: u64, u: u64) -> PellSolution {
        PellSolution::new(d, t.into(), u.into()).unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        let items = vec![sol(13, 649, 180), sol(2, 3, 2)];
        write_cache(&p, &items).unwrap();
        let back = read_cache(&p).unwrap();
        assert_eq!(back, vec![sol(2, 3, 2), sol(13, 649, 180)]);
    }

    #[test]
    fn tampered_line_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        std::fs::write(&p, "pellcache v1\n2,3,2\n13,649,181\n").unwrap();
        match read_cache(&p) {
            Err(Error::CacheLine { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_only_and_bad_version() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        std::fs::write(&p, "pellcache v1\n").unwrap();
        assert!(read_cache(&p).unwrap().is_empty());
        std::fs::write(&p, "pellcache v2\n2,3,2\n").unwrap();
        assert!(matches!(read_cache(&p), Err(Error::CacheVersion(_))));
    }

    #[test]
    fn concurrent_reads() {
        let c = SolutionCache::from_solutions([sol(2, 3, 2), sol(3, 2, 1)]);
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for _ in 0..1000 {
                        assert_eq!(c.get(3).unwrap().t, BigUint::from(2u32));
                    }
                });
            }
        });
    }
}
