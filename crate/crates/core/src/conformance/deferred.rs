//! Single-assignment results delivered through a completion callback.
//!
//! A [`Deferred`] is the consumer half and a [`Completer`] the producer half.
//! The completer can be moved to another thread and completes at most once,
//! because completing consumes it. Dropping it without completing delivers a
//! failure, so every deferred completes exactly once.

use std::fmt;
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

type Callback<T> = Box<dyn FnOnce(Result<T, String>) + Send>;

enum Slot<T> {
    Pending(Option<Callback<T>>),
    Done(Result<T, String>),
    Taken,
}

struct Shared<T> {
    slot: Mutex<Slot<T>>,
    ready: Condvar,
}

pub struct Deferred<T> {
    shared: Arc<Shared<T>>,
}

pub struct Completer<T> {
    shared: Option<Arc<Shared<T>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeferredError {
    Timeout(Duration),
    Failed(String),
}

impl fmt::Display for DeferredError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeferredError::Timeout(d) => write!(f, "no completion within {} ms", d.as_millis()),
            DeferredError::Failed(msg) => write!(f, "completed with failure: {msg}"),
        }
    }
}

impl std::error::Error for DeferredError {}

impl<T: Send + 'static> Deferred<T> {
    pub fn pending() -> (Deferred<T>, Completer<T>) {
        let shared = Arc::new(Shared { slot: Mutex::new(Slot::Pending(None)), ready: Condvar::new() });
        (Deferred { shared: Arc::clone(&shared) }, Completer { shared: Some(shared) })
    }

    pub fn ready(value: T) -> Deferred<T> {
        let (d, c) = Deferred::pending();
        c.succeed(value);
        d
    }

    pub fn failed(message: impl Into<String>) -> Deferred<T> {
        let (d, c) = Deferred::pending();
        c.fail(message);
        d
    }

    pub fn is_complete(&self) -> bool {
        !matches!(*self.shared.slot.lock().unwrap(), Slot::Pending(_))
    }

    /// Registers the one completion callback. Runs it right away when the
    /// result is already there, otherwise on whichever thread completes.
    pub fn on_complete(self, f: impl FnOnce(Result<T, String>) + Send + 'static) {
        let mut slot = self.shared.slot.lock().unwrap();
        match std::mem::replace(&mut *slot, Slot::Taken) {
            Slot::Done(result) => {
                drop(slot);
                f(result);
            }
            Slot::Pending(_) => *slot = Slot::Pending(Some(Box::new(f))),
            Slot::Taken => unreachable!("deferred result consumed twice"),
        }
    }

    /// Blocks until completion or until `timeout` of wall time passes.
    pub fn wait(self, timeout: Duration) -> Result<T, DeferredError> {
        let deadline = Instant::now() + timeout;
        let mut slot = self.shared.slot.lock().unwrap();
        loop {
            if let Slot::Done(_) = &*slot {
                let Slot::Done(result) = std::mem::replace(&mut *slot, Slot::Taken) else { unreachable!() };
                return result.map_err(DeferredError::Failed);
            }
            let now = Instant::now();
            if now >= deadline {
                return Err(DeferredError::Timeout(timeout));
            }
            slot = self.shared.ready.wait_timeout(slot, deadline - now).unwrap().0;
        }
    }
}

impl<T> Completer<T> {
    pub fn succeed(self, value: T) {
        self.complete(Ok(value));
    }

    pub fn fail(self, message: impl Into<String>) {
        self.complete(Err(message.into()));
    }

    pub fn complete(mut self, result: Result<T, String>) {
        self.deliver(result);
    }

    fn deliver(&mut self, result: Result<T, String>) {
        let Some(shared) = self.shared.take() else { return };
        let mut slot = shared.slot.lock().unwrap();
        match std::mem::replace(&mut *slot, Slot::Taken) {
            Slot::Pending(Some(callback)) => {
                drop(slot);
                callback(result);
            }
            Slot::Pending(None) => {
                *slot = Slot::Done(result);
                shared.ready.notify_all();
            }
            // The consumer already took a result or gave up waiting.
            Slot::Done(_) | Slot::Taken => {}
        }
    }
}

impl<T> Drop for Completer<T> {
    fn drop(&mut self) {
        self.deliver(Err("completer dropped before completing".to_string()));
    }
}
