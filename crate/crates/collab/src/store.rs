//! File-backed piece store: one canonical scorefile per piece under
//! `pieces/<id>.fmol`, plus `index.json` rewritten atomically on every
//! commit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use chrono::{DateTime, SubsecRound, Utc};
use fmol_core::score::{parse, serialize, ParseError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MAX_BODY_BYTES: usize = 256 * 1024;
pub const MAX_FIELD_BYTES: usize = 256;
pub const MAX_PAGE: usize = 500;
pub const DEFAULT_PAGE: usize = 50;

const INDEX_FILE: &str = "index.json";
const PIECES_DIR: &str = "pieces";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSummary {
    pub id: u64,
    pub title: String,
    pub author: String,
    pub submitted_at: DateTime<Utc>,
    pub parent_id: Option<u64>,
    pub body_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    #[serde(flatten)]
    pub summary: PieceSummary,
    /// Canonical scorefile text.
    pub body: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Submission {
    pub title: String,
    pub author: String,
    #[serde(default)]
    pub parent_id: Option<u64>,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub items: Vec<PieceSummary>,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("invalid scorefile: {0}")]
    Parse(#[from] ParseError),
    #[error("parent piece {0} does not exist")]
    UnknownParent(u64),
    #[error("{what} is {size} bytes, the limit is {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("limit {0} exceeds the maximum page size {MAX_PAGE}")]
    PageTooLarge(usize),
    #[error("piece {0} not found")]
    NotFound(u64),
    #[error("storage failure: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt store: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct Index {
    next_id: u64,
    pieces: Vec<PieceSummary>,
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    index: RwLock<Index>,
    /// Serializes writers; held across file writes and the index swap.
    commit: Mutex<()>,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    fs::rename(&tmp, path)
}

impl Store {
    /// Opens or creates a store rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(dir.join(PIECES_DIR))?;
        let index = match fs::read(dir.join(INDEX_FILE)) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| StoreError::Corrupt(format!("{INDEX_FILE}: {e}")))?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Index {
                next_id: 1,
                pieces: Vec::new(),
            },
            Err(e) => return Err(e.into()),
        };
        Ok(Self {
            dir,
            index: RwLock::new(index),
            commit: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn piece_path(&self, id: u64) -> PathBuf {
        self.dir.join(PIECES_DIR).join(format!("{id}.fmol"))
    }

    pub fn len(&self) -> usize {
        self.index.read().expect("index lock").pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Validates, canonicalizes and stores a piece.
    pub fn submit(&self, submission: Submission) -> Result<PieceRecord, StoreError> {
        for (what, text, limit) in [
            ("body", &submission.body, MAX_BODY_BYTES),
            ("title", &submission.title, MAX_FIELD_BYTES),
            ("author", &submission.author, MAX_FIELD_BYTES),
        ] {
            if text.len() > limit {
                return Err(StoreError::TooLarge {
                    what,
                    size: text.len(),
                    limit,
                });
            }
        }
        let score = parse(&submission.body, fmol_core::catalog())?;
        let body = serialize(&score);
        let body_hash = hex::encode(Sha256::digest(body.as_bytes()));

        let _guard = self.commit.lock().expect("commit lock");
        let mut next = self.index.read().expect("index lock").clone();
        if let Some(parent) = submission.parent_id {
            if next.pieces.binary_search_by_key(&parent, |p| p.id).is_err() {
                return Err(StoreError::UnknownParent(parent));
            }
        }
        let summary = PieceSummary {
            id: next.next_id,
            title: submission.title,
            author: submission.author,
            submitted_at: Utc::now().trunc_subsecs(6),
            parent_id: submission.parent_id,
            body_hash,
        };
        write_atomic(&self.piece_path(summary.id), body.as_bytes())?;
        next.next_id += 1;
        next.pieces.push(summary.clone());
        let json = serde_json::to_vec(&next).map_err(|e| StoreError::Corrupt(e.to_string()))?;
        write_atomic(&self.dir.join(INDEX_FILE), &json)?;
        *self.index.write().expect("index lock") = next;
        tracing::debug!(id = summary.id, "piece stored");
        Ok(PieceRecord { summary, body })
    }

    /// Summaries ordered by id, optionally restricted to one author.
    pub fn list(&self, offset: usize, limit: usize, author: Option<&str>) -> Result<Page, StoreError> {
        if limit > MAX_PAGE {
            return Err(StoreError::PageTooLarge(limit));
        }
        let index = self.index.read().expect("index lock");
        let matching = index
            .pieces
            .iter()
            .filter(|p| author.is_none_or(|a| p.author == a));
        let total = matching.clone().count();
        let items = matching.skip(offset).take(limit).cloned().collect();
        Ok(Page {
            total,
            offset,
            limit,
            items,
        })
    }

    pub fn get(&self, id: u64) -> Result<PieceRecord, StoreError> {
        let summary = {
            let index = self.index.read().expect("index lock");
            let pos = index
                .pieces
                .binary_search_by_key(&id, |p| p.id)
                .map_err(|_| StoreError::NotFound(id))?;
            index.pieces[pos].clone()
        };
        let body = fs::read_to_string(self.piece_path(id))?;
        Ok(PieceRecord { summary, body })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert!(!p.with_extension("tmp").exists());
    }

    #[test]
    fn corrupt_index_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(INDEX_FILE), b"{not json").unwrap();
        assert!(matches!(Store::open(dir.path()), Err(StoreError::Corrupt(_))));
    }
}
