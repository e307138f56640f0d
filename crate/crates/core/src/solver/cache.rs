//! Append-only on-disk store of search witnesses, one JSON object per line
//! after a versioned header.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::digraph::CycleType;
use crate::error::{Error, Result};

use super::trace::Rule;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "OPSTAR_CACHE_DIR";
pub const CACHE_FILE: &str = "search-cache.jsonl";
const FORMAT: &str = "opstar-search-cache";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize, PartialEq)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    cycle_type: CycleType,
    #[serde(flatten)]
    rule: Rule,
}

#[derive(Debug)]
pub struct DiskCache {
    path: PathBuf,
    entries: HashMap<CycleType, Rule>,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Cache(e.to_string())
}

impl DiskCache {
    /// Opens the cache in `dir`, creating it if needed. A file with another
    /// header is replaced; unreadable lines are skipped.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(CACHE_FILE);
        let header = Header {
            format: FORMAT.into(),
            version: VERSION,
        };
        let mut entries = HashMap::new();
        let mut fresh = true;
        if let Ok(file) = File::open(&path) {
            let mut lines = BufReader::new(file).lines();
            let first = lines.next().and_then(|l| l.ok());
            if first
                .and_then(|l| serde_json::from_str::<Header>(&l).ok())
                .as_ref()
                == Some(&header)
            {
                fresh = false;
                for line in lines.map_while(|l| l.ok()) {
                    if let Ok(e) = serde_json::from_str::<Entry>(&line) {
                        entries.insert(e.cycle_type, e.rule);
                    }
                }
            }
        }
        if fresh {
            let mut file = File::create(&path).map_err(io)?;
            writeln!(file, "{}", serde_json::to_string(&header).map_err(io)?).map_err(io)?;
        }
        Ok(DiskCache { path, entries })
    }

    /// The cache named by [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::open(Path::new(&dir)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, ty: &CycleType) -> Option<&Rule> {
        self.entries.get(ty)
    }

    pub fn put(&mut self, ty: &CycleType, rule: &Rule) -> Result<()> {
        if self.entries.get(ty) == Some(rule) {
            return Ok(());
        }
        let line = serde_json::to_string(&Entry {
            cycle_type: ty.clone(),
            rule: rule.clone(),
        })
        .map_err(io)?;
        let mut file = OpenOptions::new()
            .append(true)
            .open(&self.path)
            .map_err(io)?;
        writeln!(file, "{line}").map_err(io)?;
        self.entries.insert(ty.clone(), rule.clone());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_header() {
        let dir = std::env::temp_dir().join(format!("opstar-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let ty: CycleType = "4,4".parse().unwrap();
        let rule = Rule::Explicit {
            kernel: "anneal".into(),
            factors: vec![vec![vec![0, 1]]],
        };
        {
            let mut c = DiskCache::open(&dir).unwrap();
            assert!(c.is_empty());
            c.put(&ty, &rule).unwrap();
            c.put(&ty, &rule).unwrap();
        }
        let text = fs::read_to_string(dir.join(CACHE_FILE)).unwrap();
        assert_eq!(text.lines().count(), 2);
        let c = DiskCache::open(&dir).unwrap();
        assert_eq!(c.get(&ty), Some(&rule));

        fs::write(
            dir.join(CACHE_FILE),
            "{\"format\":\"opstar-search-cache\",\"version\":0}\nxx\n",
        )
        .unwrap();
        let c = DiskCache::open(&dir).unwrap();
        assert!(c.is_empty());
        fs::remove_dir_all(&dir).unwrap();
    }
}
