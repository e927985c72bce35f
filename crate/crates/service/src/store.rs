use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock, TryLockError};

use thiserror::Error;
use uuid::Uuid;

use crate::session::{SavedSession, Session, SessionConfig, SessionError};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("no session {0}")]
    NotFound(String),
    #[error("session {0} is busy with another request")]
    Busy(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("cannot persist session: {0}")]
    Io(#[from] io::Error),
    #[error("cannot read saved session {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

/// Sessions by id. Each session sits behind its own lock; a request that
/// finds it held gets [`StoreError::Busy`] instead of waiting.
#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        SessionStore::default()
    }

    /// A store that writes one transcript file per session into `dir` and
    /// resumes the sessions already saved there.
    pub fn persistent(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
                continue;
            };
            let corrupt = |reason: String| StoreError::Corrupt {
                path: path.clone(),
                reason,
            };
            let saved: SavedSession =
                serde_json::from_str(&fs::read_to_string(&path)?).map_err(|e| corrupt(e.to_string()))?;
            let session = Session::restore(&saved).map_err(|e| corrupt(e.to_string()))?;
            sessions.insert(id, Arc::new(Mutex::new(session)));
        }
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            dir: Some(dir),
        })
    }

    pub fn create(&self, source: &str, config: SessionConfig) -> Result<String, StoreError> {
        let id = Uuid::new_v4().simple().to_string();
        let session = Session::create(source, config);
        self.persist(&id, &session)?;
        self.sessions
            .write()
            .expect("store lock")
            .insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, StoreError> {
        self.sessions
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| StoreError::NotFound(id.to_string()))
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("store lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    /// Runs `f` on the session unless another request holds it.
    pub fn with_session<R>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<R, SessionError>,
    ) -> Result<R, StoreError> {
        let cell = self.get(id)?;
        let mut session = match cell.try_lock() {
            Ok(guard) => guard,
            Err(TryLockError::WouldBlock) => return Err(StoreError::Busy(id.to_string())),
            // a panic mid-update leaves the session as it was last synced
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
        };
        let out = f(&mut session)?;
        self.persist(id, &session)?;
        Ok(out)
    }

    fn persist(&self, id: &str, session: &Session) -> Result<(), StoreError> {
        if let Some(dir) = &self.dir {
            write_atomically(&dir.join(format!("{id}.json")), &session.save())?;
        }
        Ok(())
    }
}

fn write_atomically(path: &Path, saved: &SavedSession) -> io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec_pretty(saved)?)?;
    fs::rename(tmp, path)
}
