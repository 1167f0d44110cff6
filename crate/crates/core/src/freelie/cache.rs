//! On-disk cache of bracket expansion tables.
//!
//! Files are keyed by (algebra name, max weight, format version); the payload
//! carries a sha256 checksum and any mismatch or parse failure is reported as
//! corruption so callers can recompute and overwrite.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{FreeLieEngine, LieElement, LyndonWord};
use crate::linalg::Rational;

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    algebra: String,
    max_weight: usize,
    format_version: u32,
    checksum: String,
    entries: Vec<CacheEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    left: String,
    right: String,
    expansion: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheLoad {
    Hit { entries: usize },
    Miss,
    Corrupt { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CacheEntryInfo {
    pub file: String,
    pub algebra: String,
    pub max_weight: usize,
    pub format_version: u32,
    pub entries: usize,
    pub valid: bool,
    pub note: String,
}

pub struct BracketTableCache {
    dir: PathBuf,
}

impl BracketTableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BracketTableCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_path(&self, algebra: &str, max_weight: usize) -> PathBuf {
        self.dir.join(format!(
            "{}_w{}_v{}.json",
            algebra, max_weight, CACHE_FORMAT_VERSION
        ))
    }

    /// Loads the cached table into `engine` if a valid entry exists.
    pub fn load_into(&self, algebra: &str, max_weight: usize, engine: &FreeLieEngine) -> CacheLoad {
        let path = self.file_path(algebra, max_weight);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => return CacheLoad::Miss,
        };
        let file: CacheFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(e) => {
                return CacheLoad::Corrupt {
                    reason: format!("unparseable cache file: {e}"),
                }
            }
        };
        if file.algebra != algebra
            || file.max_weight != max_weight
            || file.format_version != CACHE_FORMAT_VERSION
        {
            return CacheLoad::Corrupt {
                reason: "cache key fields do not match the file name".to_string(),
            };
        }
        if checksum_of(&file.entries) != file.checksum {
            return CacheLoad::Corrupt {
                reason: "checksum mismatch".to_string(),
            };
        }
        let mut imported = Vec::with_capacity(file.entries.len());
        for entry in &file.entries {
            match decode_entry(entry) {
                Ok(decoded) => imported.push(decoded),
                Err(reason) => return CacheLoad::Corrupt { reason },
            }
        }
        let n = imported.len();
        engine.import_memo(imported);
        CacheLoad::Hit { entries: n }
    }

    /// Writes the engine's memoized table for this key, overwriting any
    /// previous file.
    pub fn store(
        &self,
        algebra: &str,
        max_weight: usize,
        engine: &FreeLieEngine,
    ) -> std::io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let entries: Vec<CacheEntry> = engine
            .export_memo()
            .into_iter()
            .map(|((left, right), expansion)| CacheEntry {
                left: left.to_string(),
                right: right.to_string(),
                expansion: expansion
                    .terms()
                    .map(|(w, c)| (w.to_string(), c.to_string()))
                    .collect(),
            })
            .collect();
        let file = CacheFile {
            algebra: algebra.to_string(),
            max_weight,
            format_version: CACHE_FORMAT_VERSION,
            checksum: checksum_of(&entries),
            entries,
        };
        let path = self.file_path(algebra, max_weight);
        fs::write(&path, serde_json::to_string(&file)?)?;
        Ok(path)
    }

    pub fn inspect(&self) -> Vec<CacheEntryInfo> {
        let mut out = Vec::new();
        let Ok(read) = fs::read_dir(&self.dir) else {
            return out;
        };
        let mut paths: Vec<PathBuf> = read.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths {
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let file_name = path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default()
                .to_string();
            let info = match fs::read_to_string(&path)
                .ok()
                .and_then(|t| serde_json::from_str::<CacheFile>(&t).ok())
            {
                Some(f) => {
                    let valid = checksum_of(&f.entries) == f.checksum
                        && f.format_version == CACHE_FORMAT_VERSION;
                    CacheEntryInfo {
                        file: file_name,
                        algebra: f.algebra,
                        max_weight: f.max_weight,
                        format_version: f.format_version,
                        entries: f.entries.len(),
                        valid,
                        note: if valid {
                            "ok".to_string()
                        } else {
                            "checksum or version mismatch".to_string()
                        },
                    }
                }
                None => CacheEntryInfo {
                    file: file_name,
                    algebra: String::new(),
                    max_weight: 0,
                    format_version: 0,
                    entries: 0,
                    valid: false,
                    note: "unparseable".to_string(),
                },
            };
            out.push(info);
        }
        out
    }

    /// Removes every cache file in the directory; returns how many.
    pub fn clear(&self) -> std::io::Result<usize> {
        let mut n = 0;
        let Ok(read) = fs::read_dir(&self.dir) else {
            return Ok(0);
        };
        for entry in read.flatten() {
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) == Some("json") {
                fs::remove_file(&path)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

fn checksum_of(entries: &[CacheEntry]) -> String {
    let payload = serde_json::to_string(entries).expect("cache entries serialize");
    let mut hasher = Sha256::new();
    hasher.update(payload.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_word(s: &str) -> Result<LyndonWord, String> {
    let letters: Vec<u8> = s
        .chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok(c as u8 - b'a')
            } else {
                Err(format!("bad letter {c:?} in cached word"))
            }
        })
        .collect::<Result<_, _>>()?;
    LyndonWord::new(letters).map_err(|e| e.to_string())
}

fn decode_entry(entry: &CacheEntry) -> Result<((LyndonWord, LyndonWord), LieElement), String> {
    let left = parse_word(&entry.left)?;
    let right = parse_word(&entry.right)?;
    let mut expansion = LieElement::zero();
    for (w, c) in &entry.expansion {
        let word = parse_word(w)?;
        let coeff = Rational::from_str(c).map_err(|e| format!("bad coefficient {c:?}: {e}"))?;
        expansion.add_term(word, coeff);
    }
    Ok(((left, right), expansion))
}
