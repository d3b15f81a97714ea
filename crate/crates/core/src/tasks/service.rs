use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, Condvar, Mutex, MutexGuard};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use rand::Rng;

use super::sampler::SamplingBackend;
use super::store::{now_ms, TaskRecord, TaskStatus, TaskStore};
use super::Counts;
use crate::error::{Error, Result};
use crate::qasm::{self, QasmDocument};

/// Task queue over a [`TaskStore`] with one background executor thread.
///
/// Jobs run FIFO. Dropping the service lets the executor finish everything
/// still queued before the thread exits.
pub struct TaskService {
    shared: Arc<Shared>,
    worker: Option<JoinHandle<()>>,
}

struct Shared {
    state: Mutex<State>,
    changed: Condvar,
    backend: Arc<dyn SamplingBackend>,
}

struct State {
    records: HashMap<String, TaskRecord>,
    queue: VecDeque<String>,
    store: TaskStore,
    seed: u64,
    shutdown: bool,
}

impl State {
    /// Persists then publishes a new version of a record.
    fn put(&mut self, rec: TaskRecord) -> Result<()> {
        self.store.append(&rec)?;
        self.records.insert(rec.id.clone(), rec);
        Ok(())
    }
}

impl TaskService {
    /// Opens the store in `dir`. Queued tasks left by a previous run go back on
    /// the queue; tasks caught mid-run are marked failed.
    pub fn open(
        dir: impl AsRef<Path>,
        backend: Arc<dyn SamplingBackend>,
        seed: u64,
    ) -> Result<Self> {
        let (store, records) = TaskStore::open(dir)?;
        let mut state = State {
            records: HashMap::new(),
            queue: VecDeque::new(),
            store,
            seed,
            shutdown: false,
        };
        for mut rec in records {
            match rec.status {
                TaskStatus::Queued => state.queue.push_back(rec.id.clone()),
                TaskStatus::Running => {
                    rec.status = TaskStatus::Failed;
                    rec.error = Some("interrupted by a service restart".into());
                    rec.updated_ms = now_ms();
                    state.store.append(&rec)?;
                }
                TaskStatus::Completed | TaskStatus::Failed => {}
            }
            state.records.insert(rec.id.clone(), rec);
        }
        let shared = Arc::new(Shared {
            state: Mutex::new(state),
            changed: Condvar::new(),
            backend,
        });
        let worker = {
            let shared = Arc::clone(&shared);
            std::thread::Builder::new()
                .name("task-executor".into())
                .spawn(move || shared.run())
                .map_err(|e| Error::Config(format!("cannot start executor: {e}")))?
        };
        Ok(TaskService {
            shared,
            worker: Some(worker),
        })
    }

    /// Validates and enqueues a circuit; returns the new task id.
    pub fn submit(&self, circuit: &QasmDocument, shots: u64, name: &str) -> Result<String> {
        if shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        circuit.parse()?;
        let mut state = self.shared.lock();
        let id = loop {
            let id = format!("{:032x}", rand::thread_rng().gen::<u128>());
            if !state.records.contains_key(&id) {
                break id;
            }
        };
        let now = now_ms();
        let rec = TaskRecord {
            id: id.clone(),
            name: name.to_string(),
            circuit: circuit.as_str().to_string(),
            shots,
            seed: state.seed,
            status: TaskStatus::Queued,
            counts: None,
            error: None,
            created_ms: now,
            updated_ms: now,
        };
        state.put(rec)?;
        state.queue.push_back(id.clone());
        self.shared.changed.notify_all();
        Ok(id)
    }

    /// Submits and blocks until the task reaches a terminal state.
    pub fn submit_and_wait(
        &self,
        circuit: &QasmDocument,
        shots: u64,
        name: &str,
    ) -> Result<TaskRecord> {
        let id = self.submit(circuit, shots, name)?;
        self.wait(&id)
    }

    pub fn status(&self, id: &str) -> Result<TaskStatus> {
        Ok(self.record(id)?.status)
    }

    pub fn record(&self, id: &str) -> Result<TaskRecord> {
        self.shared
            .lock()
            .records
            .get(id)
            .cloned()
            .ok_or_else(|| Error::NotFound(id.to_string()))
    }

    /// Every known record, oldest first.
    pub fn list(&self) -> Vec<TaskRecord> {
        let mut all: Vec<_> = self.shared.lock().records.values().cloned().collect();
        all.sort_by(|a, b| (a.created_ms, &a.id).cmp(&(b.created_ms, &b.id)));
        all
    }

    pub fn result(&self, id: &str) -> Result<Counts> {
        let rec = self.record(id)?;
        match (rec.status, rec.counts) {
            (TaskStatus::Completed, Some(counts)) => Ok(counts),
            (status, _) => Err(Error::Unavailable {
                status: status.to_string(),
                detail: rec.error,
            }),
        }
    }

    pub fn wait(&self, id: &str) -> Result<TaskRecord> {
        self.wait_until(id, None)
    }

    /// Like [`wait`](Self::wait) but gives up after `timeout`, returning the
    /// record in whatever state it has reached.
    pub fn wait_timeout(&self, id: &str, timeout: Duration) -> Result<TaskRecord> {
        self.wait_until(id, Some(Instant::now() + timeout))
    }

    fn wait_until(&self, id: &str, deadline: Option<Instant>) -> Result<TaskRecord> {
        let mut state = self.shared.lock();
        loop {
            let rec = state
                .records
                .get(id)
                .ok_or_else(|| Error::NotFound(id.to_string()))?;
            if rec.status.is_terminal() {
                return Ok(rec.clone());
            }
            state = match deadline {
                None => self.shared.changed.wait(state).expect("task lock"),
                Some(d) => {
                    let left = d.saturating_duration_since(Instant::now());
                    if left.is_zero() {
                        return Ok(rec.clone());
                    }
                    self.shared
                        .changed
                        .wait_timeout(state, left)
                        .expect("task lock")
                        .0
                }
            };
        }
    }

    /// Blocks until the queue is empty and nothing is running.
    pub fn drain(&self) {
        let mut state = self.shared.lock();
        while !state.queue.is_empty()
            || state
                .records
                .values()
                .any(|r| r.status == TaskStatus::Running)
        {
            state = self.shared.changed.wait(state).expect("task lock");
        }
    }

    pub fn backend_name(&self) -> &str {
        self.shared.backend.name()
    }
}

impl Drop for TaskService {
    fn drop(&mut self) {
        self.shared.lock().shutdown = true;
        self.shared.changed.notify_all();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

impl Shared {
    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().expect("task lock")
    }

    fn run(&self) {
        loop {
            let mut state = self.lock();
            let id = loop {
                if let Some(id) = state.queue.pop_front() {
                    break id;
                }
                if state.shutdown {
                    return;
                }
                state = self.changed.wait(state).expect("task lock");
            };
            let mut rec = state.records[&id].clone();
            rec.status = TaskStatus::Running;
            rec.updated_ms = now_ms();
            if state.put(rec.clone()).is_err() {
                // the log is unwritable; leave the task queued for a later run
                state.queue.push_front(id);
                state.shutdown = true;
                self.changed.notify_all();
                return;
            }
            self.changed.notify_all();
            drop(state);

            let outcome = qasm::parse(&rec.circuit)
                .and_then(|pc| self.backend.sample(&pc, rec.shots, rec.seed));
            match outcome {
                Ok(counts) => {
                    rec.status = TaskStatus::Completed;
                    rec.counts = Some(counts);
                }
                Err(e) => {
                    rec.status = TaskStatus::Failed;
                    rec.error = Some(e.to_string());
                }
            }
            rec.updated_ms = now_ms();
            let mut state = self.lock();
            if let Err(e) = state.store.append(&rec) {
                rec.status = TaskStatus::Failed;
                rec.counts = None;
                rec.error = Some(format!("result not persisted: {e}"));
            }
            state.records.insert(id, rec);
            self.changed.notify_all();
        }
    }
}
