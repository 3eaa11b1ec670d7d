//! HTTP/JSON service for interactive dissection sessions, Monty Hall games and stateless
//! puzzle computations.
//!
//! | Method | Path | |
//! |---|---|---|
//! | POST | `/api/dissection` | create a session from a preset, cells or ASCII art |
//! | GET | `/api/dissection/{id}` | session view |
//! | POST | `/api/dissection/{id}/cut` | apply a cut |
//! | GET | `/api/dissection/{id}/hint` | fewest cuts still needed |
//! | POST | `/api/monty` | new game |
//! | POST | `/api/monty/{id}/pick` | pick a door, host reveals a goat |
//! | POST | `/api/monty/{id}/decide` | stay or switch |
//! | GET | `/api/monty/stats` | win rates per strategy |
//! | GET | `/api/birthday`, `/api/hanoi`, `/api/queens`, `/api/knight`, `/api/domination` | computations |
//! | GET | `/api/catalog` | preset shapes |
//!
//! POST requests carrying an `Idempotency-Key` header are answered once; a retry with the
//! same key and body gets the recorded response without being applied again.

mod error;
mod routes;
pub mod session;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use polycut_core::combinatorics::LabCaps;
use polycut_core::rng::shard_seed;
use polycut_core::{SearchCaps, Solver};

pub use error::ApiError;
pub use routes::router;
pub use store::{SessionStore, SnapshotError};

#[derive(Debug, Clone)]
pub struct Config {
    pub port: u16,
    pub snapshot_path: Option<PathBuf>,
    pub snapshot_interval: Duration,
    /// Base seed for Monty games created without an explicit seed.
    pub seed: u64,
    pub caps: SearchCaps,
    pub lab_caps: LabCaps,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            port: 8080,
            snapshot_path: None,
            snapshot_interval: Duration::from_secs(30),
            seed: 0,
            caps: SearchCaps::default(),
            lab_caps: LabCaps::default(),
        }
    }
}

impl Config {
    /// Reads `PORT`, `SNAPSHOT_PATH`, `SEED` and `CAP_N` (the per-piece search cap).
    pub fn from_env() -> Result<Self, String> {
        let mut cfg = Config::default();
        let var = |name: &str| std::env::var(name).ok().filter(|v| !v.is_empty());
        if let Some(port) = var("PORT") {
            cfg.port = port.parse().map_err(|_| format!("PORT={port:?} is not a port number"))?;
        }
        if let Some(path) = var("SNAPSHOT_PATH") {
            cfg.snapshot_path = Some(PathBuf::from(path));
        }
        if let Some(seed) = var("SEED") {
            cfg.seed = seed.parse().map_err(|_| format!("SEED={seed:?} is not an unsigned integer"))?;
        }
        if let Some(cap) = var("CAP_N") {
            cfg.caps.per_piece = cap.parse().map_err(|_| format!("CAP_N={cap:?} is not an integer"))?;
        }
        Ok(cfg)
    }
}

/// Shared state behind every handler.
#[derive(Debug, Clone)]
pub struct AppState(Arc<Inner>);

#[derive(Debug)]
pub struct Inner {
    pub store: SessionStore,
    pub solver: Solver,
    pub lab_caps: LabCaps,
    seed: u64,
    games_created: AtomicU64,
}

impl AppState {
    pub fn new(config: &Config, store: SessionStore) -> Self {
        AppState(Arc::new(Inner {
            store,
            solver: Solver::new(config.caps),
            lab_caps: config.lab_caps,
            seed: config.seed,
            games_created: AtomicU64::new(0),
        }))
    }

    pub fn store(&self) -> &SessionStore {
        &self.0.store
    }

    pub(crate) fn inner(&self) -> &Inner {
        &self.0
    }

    /// Seed for the next game without a client-chosen seed.
    pub(crate) fn next_game_seed(&self) -> u64 {
        shard_seed(self.0.seed, self.0.games_created.fetch_add(1, Ordering::Relaxed))
    }
}

pub(crate) fn now_millis() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

/// Runs the service until Ctrl-C, restoring from and periodically writing the snapshot file
/// when one is configured.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let store = match &config.snapshot_path {
        Some(path) if path.exists() => SessionStore::load_snapshot(path).map_err(std::io::Error::other)?,
        _ => SessionStore::new(),
    };
    let state = AppState::new(&config, store);
    if let Some(path) = config.snapshot_path.clone() {
        let state = state.clone();
        let every = config.snapshot_interval;
        tokio::spawn(async move {
            let mut ticker = tokio::time::interval(every);
            ticker.tick().await;
            loop {
                ticker.tick().await;
                if let Err(e) = state.store().save_snapshot(&path) {
                    tracing::warn!("snapshot to {} failed: {e}", path.display());
                }
            }
        });
    }
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {addr}");
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(path) = &config.snapshot_path {
        state.store().save_snapshot(path).map_err(std::io::Error::other)?;
    }
    Ok(())
}
