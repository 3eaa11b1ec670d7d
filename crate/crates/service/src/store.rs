//! In-memory session store with JSON snapshots.
//!
//! Each session sits behind its own mutex, so updates to one session are serialized while
//! other sessions proceed. The maps themselves are only locked long enough to look up or
//! insert an entry.

use std::collections::HashMap;
use std::io;
use std::path::Path;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::session::{DissectionSession, MontySession};

const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot I/O: {0}")]
    Io(#[from] io::Error),
    #[error("snapshot format: {0}")]
    Format(#[from] serde_json::Error),
    #[error("unsupported snapshot version {0}")]
    Version(u32),
}

/// A response recorded under a client-supplied idempotency key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedResponse {
    /// Method, path and body of the request that produced it.
    pub fingerprint: String,
    pub status: u16,
    pub body: String,
}

pub type IdempotencySlot = Arc<tokio::sync::Mutex<Option<CachedResponse>>>;

#[derive(Debug, Default)]
pub struct SessionStore {
    dissections: RwLock<HashMap<String, Arc<Mutex<DissectionSession>>>>,
    monty: RwLock<HashMap<String, Arc<Mutex<MontySession>>>>,
    idempotency: Mutex<HashMap<String, IdempotencySlot>>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    version: u32,
    dissections: Vec<DissectionSession>,
    monty: Vec<MontySession>,
    idempotency: Vec<(String, CachedResponse)>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_dissection(&self, session: DissectionSession) {
        let id = session.id.clone();
        self.dissections.write().insert(id, Arc::new(Mutex::new(session)));
    }

    pub fn dissection(&self, id: &str) -> Option<Arc<Mutex<DissectionSession>>> {
        self.dissections.read().get(id).cloned()
    }

    pub fn insert_monty(&self, session: MontySession) {
        let id = session.id.clone();
        self.monty.write().insert(id, Arc::new(Mutex::new(session)));
    }

    pub fn monty(&self, id: &str) -> Option<Arc<Mutex<MontySession>>> {
        self.monty.read().get(id).cloned()
    }

    /// Copies of every Monty session, for aggregate statistics.
    pub fn monty_sessions(&self) -> Vec<MontySession> {
        self.monty.read().values().map(|s| s.lock().clone()).collect()
    }

    pub fn dissection_count(&self) -> usize {
        self.dissections.read().len()
    }

    /// The slot for `key`, created empty on first use. Holding its lock serializes retries.
    pub fn idempotency_slot(&self, key: &str) -> IdempotencySlot {
        self.idempotency.lock().entry(key.to_owned()).or_default().clone()
    }

    fn snapshot(&self) -> Snapshot {
        let mut dissections: Vec<DissectionSession> =
            self.dissections.read().values().map(|s| s.lock().clone()).collect();
        dissections.sort_by(|a, b| a.id.cmp(&b.id));
        let mut monty = self.monty_sessions();
        monty.sort_by(|a, b| a.id.cmp(&b.id));
        // Requests still in flight hold their slot's lock and are left out.
        let mut idempotency: Vec<(String, CachedResponse)> = self
            .idempotency
            .lock()
            .iter()
            .filter_map(|(k, slot)| slot.try_lock().ok().and_then(|g| g.clone()).map(|c| (k.clone(), c)))
            .collect();
        idempotency.sort_by(|a, b| a.0.cmp(&b.0));
        Snapshot { version: SNAPSHOT_VERSION, dissections, monty, idempotency }
    }

    pub fn to_json(&self) -> Result<String, SnapshotError> {
        Ok(serde_json::to_string_pretty(&self.snapshot())?)
    }

    pub fn from_json(text: &str) -> Result<Self, SnapshotError> {
        let snap: Snapshot = serde_json::from_str(text)?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(SnapshotError::Version(snap.version));
        }
        let store = SessionStore::new();
        for s in snap.dissections {
            store.insert_dissection(s);
        }
        for s in snap.monty {
            store.insert_monty(s);
        }
        {
            let mut slots = store.idempotency.lock();
            for (k, c) in snap.idempotency {
                slots.insert(k, Arc::new(tokio::sync::Mutex::new(Some(c))));
            }
        }
        Ok(store)
    }

    /// Writes the snapshot next to `path` and renames it into place.
    pub fn save_snapshot(&self, path: &Path) -> Result<(), SnapshotError> {
        let json = self.to_json()?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, json)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load_snapshot(path: &Path) -> Result<Self, SnapshotError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
