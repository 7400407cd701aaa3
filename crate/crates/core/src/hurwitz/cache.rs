//! Write-through result cache backed by a newline-delimited JSON file.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

use super::{compute, HurwitzQuery, HurwitzResult, Method};
use crate::error::{HurwitzError, Result};
use crate::partition::Partition;
use crate::rational::{from_parts, to_parts, Rational};

/// One line of the cache file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheRecord {
    pub mu: Partition,
    pub nu: Partition,
    pub k: i64,
    pub r: u32,
    pub s: usize,
    pub connected: bool,
    pub num: String,
    pub den: String,
}

impl CacheRecord {
    pub fn new(query: &HurwitzQuery, value: &Rational) -> Self {
        let (num, den) = to_parts(value);
        CacheRecord {
            mu: query.mu.clone(),
            nu: query.nu.clone(),
            k: query.k,
            r: query.r,
            s: query.s,
            connected: query.connected,
            num,
            den,
        }
    }

    pub fn query(&self) -> HurwitzQuery {
        HurwitzQuery {
            mu: self.mu.clone(),
            nu: self.nu.clone(),
            k: self.k,
            r: self.r,
            s: self.s,
            connected: self.connected,
        }
    }

    pub fn value(&self) -> Result<Rational> {
        from_parts(&self.num, &self.den)
            .ok_or_else(|| HurwitzError::Cache(format!("bad fraction {}/{}", self.num, self.den)))
    }
}

/// Cache keyed by canonical query. Lookups also try the dual query
/// `(nu, mu, -k)`, which has the same value.
pub struct HurwitzCache {
    entries: RwLock<HashMap<HurwitzQuery, Rational>>,
    file: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl HurwitzCache {
    pub fn in_memory() -> Self {
        HurwitzCache {
            entries: RwLock::new(HashMap::new()),
            file: None,
            path: None,
        }
    }

    /// Loads `path` if it exists and appends every new value to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let io = |e: std::io::Error| HurwitzError::Cache(format!("{}: {e}", path.display()));
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io)?);
            for (number, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: CacheRecord = serde_json::from_str(&line)
                    .map_err(|e| HurwitzError::Cache(format!("{} line {}: {e}", path.display(), number + 1)))?;
                entries.insert(record.query(), record.value()?);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        Ok(HurwitzCache {
            entries: RwLock::new(entries),
            file: Some(Mutex::new(file)),
            path: Some(path.to_path_buf()),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.read().is_empty()
    }

    pub fn get(&self, query: &HurwitzQuery) -> Option<Rational> {
        let entries = self.entries.read();
        entries.get(query).or_else(|| entries.get(&query.dual())).cloned()
    }

    pub fn insert(&self, query: &HurwitzQuery, value: &Rational) -> Result<()> {
        {
            let mut entries = self.entries.write();
            if entries.contains_key(query) {
                return Ok(());
            }
            entries.insert(query.clone(), value.clone());
        }
        if let Some(file) = &self.file {
            let line = serde_json::to_string(&CacheRecord::new(query, value))
                .map_err(|e| HurwitzError::Cache(e.to_string()))?;
            let mut file = file.lock();
            writeln!(file, "{line}").map_err(|e| HurwitzError::Cache(e.to_string()))?;
        }
        Ok(())
    }

    /// Serves from the cache when possible, otherwise computes and stores.
    pub fn compute(&self, query: &HurwitzQuery) -> Result<HurwitzResult> {
        let start = Instant::now();
        if let Some(value) = self.get(query) {
            return Ok(HurwitzResult {
                value,
                query: query.clone(),
                method: Method::Cache,
                millis: start.elapsed().as_millis(),
            });
        }
        let result = compute(query)?;
        self.insert(query, &result.value)?;
        Ok(result)
    }
}
