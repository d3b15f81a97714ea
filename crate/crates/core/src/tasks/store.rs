use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::Counts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskStatus {
    Queued,
    Running,
    Completed,
    Failed,
}

impl TaskStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, TaskStatus::Completed | TaskStatus::Failed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskStatus::Queued => "queued",
            TaskStatus::Running => "running",
            TaskStatus::Completed => "completed",
            TaskStatus::Failed => "failed",
        }
    }
}

impl std::fmt::Display for TaskStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: String,
    pub name: String,
    /// OpenQASM text as submitted.
    pub circuit: String,
    pub shots: u64,
    pub seed: u64,
    pub status: TaskStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Milliseconds since the Unix epoch.
    pub created_ms: u64,
    pub updated_ms: u64,
}

pub(crate) fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Append-only JSON-lines log; the last line for an id is its current state.
#[derive(Debug)]
pub struct TaskStore {
    path: PathBuf,
    file: File,
}

impl TaskStore {
    pub const FILE_NAME: &'static str = "tasks.jsonl";

    /// Opens (creating if needed) the log inside `dir` and replays it.
    /// Records come back in order of first appearance. A torn final line, as
    /// left by a crash mid-write, is ignored.
    pub fn open(dir: impl AsRef<Path>) -> Result<(Self, Vec<TaskRecord>)> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(Self::FILE_NAME);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let lines: Vec<&str> = text.lines().collect();
        let mut order = Vec::new();
        let mut latest: HashMap<String, TaskRecord> = HashMap::new();
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: TaskRecord = match serde_json::from_str(line) {
                Ok(r) => r,
                Err(_) if i + 1 == lines.len() && !text.ends_with('\n') => break,
                Err(e) => {
                    return Err(Error::parse(
                        format!("{} line {}", path.display(), i + 1),
                        e.to_string(),
                    ))
                }
            };
            if !latest.contains_key(&rec.id) {
                order.push(rec.id.clone());
            }
            latest.insert(rec.id.clone(), rec);
        }
        if !text.is_empty() && !text.ends_with('\n') {
            // drop the torn line so the next record starts cleanly
            let keep = text.rfind('\n').map_or(0, |k| k + 1) as u64;
            OpenOptions::new()
                .write(true)
                .open(&path)
                .and_then(|f| f.set_len(keep))
                .map_err(|e| Error::io(&path, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        let records = order
            .into_iter()
            .map(|id| latest.remove(&id).expect("recorded id"))
            .collect();
        Ok((TaskStore { path, file }, records))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, rec: &TaskRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec).expect("record serializes");
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|()| self.file.flush())
            .map_err(|e| Error::io(&self.path, e))
    }
}
