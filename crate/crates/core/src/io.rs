//! JSON Lines event streams.
//!
//! The first line is a header object carrying at least `vocab_size`; every
//! following line is one event `{"ts": hours, "tokens": [ids], "cluster": id}`
//! with `cluster` optional.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hawkes::TIE_SHIFT;
use crate::text::DocumentCounts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedDocument {
    #[serde(rename = "ts")]
    pub time: f64,
    #[serde(rename = "cluster", default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u64>,
    pub tokens: Vec<u32>,
}

impl TimedDocument {
    pub fn counts(&self) -> Result<DocumentCounts> {
        DocumentCounts::from_tokens(&self.tokens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub vocab_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_events: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_clusters: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: DatasetHeader,
    pub events: Vec<TimedDocument>,
}

impl Dataset {
    pub fn labels(&self) -> Option<Vec<u64>> {
        self.events.iter().map(|e| e.label).collect()
    }
}

/// How timestamps in a file map to hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    #[default]
    Hours,
    Seconds,
}

impl TimeUnit {
    pub fn to_hours(self, t: f64) -> f64 {
        match self {
            TimeUnit::Hours => t,
            TimeUnit::Seconds => t / 3600.0,
        }
    }
}

impl std::str::FromStr for TimeUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hours" | "h" => Ok(TimeUnit::Hours),
            "seconds" | "s" => Ok(TimeUnit::Seconds),
            other => Err(Error::input(format!("unknown time unit '{other}'"))),
        }
    }
}

/// Parses a dataset, converting times to hours, checking order and token
/// ids, and separating equal timestamps by successive [`TIE_SHIFT`]s.
pub fn read_dataset(reader: impl BufRead, unit: TimeUnit) -> Result<Dataset> {
    let mut lines = reader.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let Some((hline, header)) = lines.next() else {
        return Err(Error::data(1, "empty file"));
    };
    let header: DatasetHeader =
        serde_json::from_str(&header?).map_err(|e| Error::data(hline, format!("bad header: {e}")))?;
    if header.vocab_size == 0 {
        return Err(Error::data(hline, "vocab_size must be positive"));
    }
    let mut events = Vec::new();
    let mut prev_raw = f64::NEG_INFINITY;
    for (line, text) in lines {
        let mut e: TimedDocument =
            serde_json::from_str(&text?).map_err(|err| Error::data(line, err.to_string()))?;
        let raw = unit.to_hours(e.time);
        if !raw.is_finite() {
            return Err(Error::data(line, "timestamp is not finite"));
        }
        if raw < prev_raw {
            return Err(Error::data(line, format!("timestamp {} goes back in time", e.time)));
        }
        if e.tokens.is_empty() {
            return Err(Error::data(line, "event has no tokens"));
        }
        if let Some(&bad) = e.tokens.iter().find(|&&v| v as usize >= header.vocab_size) {
            return Err(Error::data(
                line,
                format!("token id {bad} outside a vocabulary of {}", header.vocab_size),
            ));
        }
        e.time = match events.last() {
            Some(TimedDocument { time: last, .. }) if raw <= *last => last + TIE_SHIFT,
            _ => raw,
        };
        prev_raw = raw;
        events.push(e);
    }
    Ok(Dataset { header, events })
}

pub fn load_dataset(path: &Path, unit: TimeUnit) -> Result<Dataset> {
    read_dataset(BufReader::new(File::open(path)?), unit)
}

pub fn write_dataset(writer: impl Write, dataset: &Dataset) -> Result<()> {
    let mut w = BufWriter::new(writer);
    serde_json::to_writer(&mut w, &dataset.header)?;
    w.write_all(b"\n")?;
    for e in &dataset.events {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_dataset(path: &Path, dataset: &Dataset) -> Result<()> {
    write_dataset(File::create(path)?, dataset)
}

/// Writes `value` as pretty JSON followed by a newline.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
