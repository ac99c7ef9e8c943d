//! In-memory dialogue sessions with idle expiry.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use odsearch_core::dialogue::DialogueSession;

pub const DEFAULT_TTL_MS: u64 = 30 * 60 * 1000;

/// One session. The async mutex queues concurrent events on the same session
/// in arrival order; `last_activity` mirrors the session's timestamp so the
/// collector never waits on a busy session.
pub struct Slot {
    pub session: Arc<tokio::sync::Mutex<DialogueSession>>,
    last_activity: AtomicU64,
}

impl Slot {
    pub fn touch(&self, now_ms: u64) {
        self.last_activity.store(now_ms, Ordering::Relaxed);
    }

    pub fn last_activity(&self) -> u64 {
        self.last_activity.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionError {
    Unknown,
    Expired,
}

pub struct SessionStore {
    slots: Mutex<HashMap<String, Arc<Slot>>>,
    ttl_ms: u64,
}

impl SessionStore {
    pub fn new(ttl_ms: u64) -> Self {
        SessionStore { slots: Mutex::new(HashMap::new()), ttl_ms }
    }

    pub fn ttl_ms(&self) -> u64 {
        self.ttl_ms
    }

    fn expired(&self, slot: &Slot, now_ms: u64) -> bool {
        now_ms.saturating_sub(slot.last_activity()) > self.ttl_ms
    }

    pub fn create(&self, session_id: String, now_ms: u64) -> Arc<Slot> {
        let slot = Arc::new(Slot {
            session: Arc::new(tokio::sync::Mutex::new(DialogueSession::new(session_id.clone(), now_ms))),
            last_activity: AtomicU64::new(now_ms),
        });
        self.slots.lock().expect("session map poisoned").insert(session_id, slot.clone());
        slot
    }

    /// Looks a session up. An idle-expired session is removed and reported
    /// as `Expired`.
    pub fn get(&self, session_id: &str, now_ms: u64) -> Result<Arc<Slot>, SessionError> {
        let mut slots = self.slots.lock().expect("session map poisoned");
        let slot = slots.get(session_id).ok_or(SessionError::Unknown)?;
        if self.expired(slot, now_ms) {
            slots.remove(session_id);
            return Err(SessionError::Expired);
        }
        Ok(slot.clone())
    }

    /// Removes sessions idle for longer than the TTL; returns how many.
    pub fn session_gc(&self, now_ms: u64) -> usize {
        let mut slots = self.slots.lock().expect("session map poisoned");
        let before = slots.len();
        slots.retain(|_, slot| !self.expired(slot, now_ms));
        before - slots.len()
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
