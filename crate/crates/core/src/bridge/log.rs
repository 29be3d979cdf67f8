use std::io::{BufWriter, Write};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SessionId;

pub const FLUSH_RECORDS: usize = 100;
pub const FLUSH_INTERVAL: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

/// One log line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub stamp_ms: u64,
    pub dir: Direction,
    pub session: SessionId,
    /// The message verbatim; undecodable text is kept as a JSON string.
    pub msg: Value,
}

impl LogRecord {
    /// Wraps raw wire text, keeping it structured when it parses as JSON.
    pub fn from_text(stamp_ms: u64, dir: Direction, session: SessionId, text: &str) -> Self {
        let msg = serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()));
        Self {
            stamp_ms,
            dir,
            session,
            msg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("log sink failure: {0}")]
pub struct SinkFailure(pub String);

/// Append-only JSON-lines writer. Flushes every [`FLUSH_RECORDS`] records or
/// [`FLUSH_INTERVAL`], whichever comes first.
pub struct LogSink {
    writer: BufWriter<Box<dyn Write + Send>>,
    pending: usize,
    last_flush: Instant,
    written: u64,
    failure: Option<SinkFailure>,
}

impl LogSink {
    pub fn new(writer: Box<dyn Write + Send>) -> Self {
        Self {
            writer: BufWriter::new(writer),
            pending: 0,
            last_flush: Instant::now(),
            written: 0,
            failure: None,
        }
    }

    pub fn create(path: &std::path::Path) -> std::io::Result<Self> {
        let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self::new(Box::new(file)))
    }

    pub fn log_record(&mut self, record: &LogRecord) -> Result<(), SinkFailure> {
        let result = self.append(record);
        if let Err(e) = &result {
            self.failure = Some(e.clone());
        }
        result
    }

    fn append(&mut self, record: &LogRecord) -> Result<(), SinkFailure> {
        let line = serde_json::to_string(record).map_err(|e| SinkFailure(e.to_string()))?;
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .map_err(|e| SinkFailure(e.to_string()))?;
        self.written += 1;
        self.pending += 1;
        if self.pending >= FLUSH_RECORDS || self.last_flush.elapsed() >= FLUSH_INTERVAL {
            self.flush()?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), SinkFailure> {
        self.pending = 0;
        self.last_flush = Instant::now();
        self.writer.flush().map_err(|e| {
            let f = SinkFailure(e.to_string());
            self.failure = Some(f.clone());
            f
        })
    }

    pub fn records_written(&self) -> u64 {
        self.written
    }

    /// The most recent write or flush failure, if any.
    pub fn failure(&self) -> Option<&SinkFailure> {
        self.failure.as_ref()
    }
}

impl Drop for LogSink {
    fn drop(&mut self) {
        let _ = self.writer.flush();
    }
}
