//! Hourly series model, circular indexing, sequential chunking and CSV I/O.
//!
//! Indices are 0-based throughout. A series is treated as circular: the
//! successor of the last hour is the first hour, and the predecessor of the
//! first hour is the last one.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::ops::Range;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// An immutable, non-empty sequence of finite hourly observations.
///
/// Cloning is cheap: values and timestamps are reference counted, so a
/// series can be shared freely across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct HourlySeries {
    values: Arc<[f64]>,
    timestamps: Option<Arc<[String]>>,
    label: String,
    non_negative: bool,
}

impl HourlySeries {
    /// Builds a series, rejecting empty input and non-finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(HourlySeries {
            values: values.into(),
            timestamps: None,
            label: String::new(),
            non_negative: false,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Attaches one timestamp per value. Timestamps are carried verbatim.
    pub fn with_timestamps(mut self, timestamps: Vec<String>) -> Result<Self> {
        if timestamps.len() != self.values.len() {
            return Err(Error::TimestampMismatch {
                timestamps: timestamps.len(),
                values: self.values.len(),
            });
        }
        self.timestamps = Some(timestamps.into());
        Ok(self)
    }

    /// Flags the series as a physical quantity that cannot be negative
    /// (generation or load), validating every value.
    pub fn require_non_negative(mut self) -> Result<Self> {
        if let Some((index, &value)) = self.values.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::Negative { index, value });
        }
        self.non_negative = true;
        Ok(self)
    }

    /// A new series on the same time axis and label, with different values.
    pub(crate) fn derive(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: values.len(),
            });
        }
        let mut out = HourlySeries::new(values)?;
        out.timestamps = self.timestamps.clone();
        out.label = self.label.clone();
        out.non_negative = self.non_negative && out.values.iter().all(|v| *v >= 0.0);
        Ok(out)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn timestamps(&self) -> Option<&[String]> {
        self.timestamps.as_deref()
    }

    pub fn start_timestamp(&self) -> Option<&str> {
        self.timestamps().and_then(|t| t.first()).map(String::as_str)
    }

    pub fn is_non_negative(&self) -> bool {
        self.non_negative
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    /// `values[index mod len]` with a non-negative modulus.
    pub fn circular_get(&self, index: i64) -> f64 {
        self.values[wrap_index(index, self.len())]
    }

    /// Copies the hours in `range` into a new series.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(Error::OutOfRange {
                start: range.start,
                end: range.end,
                len: self.len(),
            });
        }
        let mut out = HourlySeries::new(self.values[range.clone()].to_vec())?;
        out.timestamps = self.timestamps.as_ref().map(|t| t[range].into());
        out.label = self.label.clone();
        out.non_negative = self.non_negative;
        Ok(out)
    }

    /// SHA-256 over the little-endian bytes of the values, hex encoded.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        for v in self.values.iter() {
            hasher.update(v.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Writes `timestamp,value` (when timestamps are attached) or `value`.
    ///
    /// Values use the shortest representation that round-trips exactly.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(BufWriter::new(file))
            .map_err(|e| Error::csv(path, e))
    }

    pub fn write_csv_to<W: Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        match self.timestamps() {
            Some(ts) => {
                w.write_record(["timestamp", "value"])?;
                for (t, v) in ts.iter().zip(self.values.iter()) {
                    w.write_record([t.as_str(), &format_value(*v)])?;
                }
            }
            None => {
                w.write_record(["value"])?;
                for v in self.values.iter() {
                    w.write_record([format_value(*v)])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn format_value(v: f64) -> String {
    // `Display` for f64 is the shortest string that parses back to the same bits.
    format!("{v}")
}

pub(crate) fn wrap_index(index: i64, len: usize) -> usize {
    index.rem_euclid(len as i64) as usize
}

/// Reads one series from a CSV file with a header row.
///
/// Data rows are numbered from 1 in error messages.
pub fn load_csv(
    path: impl AsRef<Path>,
    value_column: &str,
    timestamp_column: Option<&str>,
) -> Result<HourlySeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, path, value_column, timestamp_column)
}

/// Loads a file written by [`HourlySeries::write_csv`]: a `value` column and,
/// when present, a `timestamp` column.
pub fn load_series_csv(path: impl AsRef<Path>) -> Result<HourlySeries> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let has_ts = text
        .lines()
        .next()
        .is_some_and(|h| h.split(',').any(|c| c.trim() == "timestamp"));
    read_csv(text.as_bytes(), path, "value", has_ts.then_some("timestamp"))
}

pub(crate) fn read_csv<R: Read>(
    reader: R,
    path: &Path,
    value_column: &str,
    timestamp_column: Option<&str>,
) -> Result<HourlySeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(Error::csv(path, e)),
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyFile { path: path.into() });
    }
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.into(),
                column: name.to_string(),
            })
    };
    let value_idx = column(value_column)?;
    let ts_idx = timestamp_column.map(column).transpose()?;

    let mut values = Vec::new();
    let mut timestamps = ts_idx.map(|_| Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::csv(path, e))?;
        let cell = record.get(value_idx).unwrap_or("");
        let value = cell
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::UnparseableValue {
                path: path.into(),
                row,
                cell: cell.to_string(),
            })?;
        values.push(value);
        if let (Some(idx), Some(ts)) = (ts_idx, timestamps.as_mut()) {
            ts.push(record.get(idx).unwrap_or("").to_string());
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyFile { path: path.into() });
    }
    let series = HourlySeries::new(values)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let series = series.with_label(label);
    match timestamps {
        Some(ts) => series.with_timestamps(ts),
        None => Ok(series),
    }
}

/// How a ragged final chunk is handled when `l` does not divide the length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChunkMode {
    /// Complete the last chunk with values wrapped from the series start.
    #[default]
    Wrap,
    /// Drop the ragged tail; for data where circularity is unwarranted.
    Truncate,
}

/// A series cut into consecutive blocks of exactly `chunk_length` hours.
#[derive(Clone, Debug, PartialEq)]
pub struct ChunkedSeries {
    data: Vec<f64>,
    chunk_length: usize,
    source_len: usize,
    wrapped: bool,
}

impl ChunkedSeries {
    pub fn chunk_length(&self) -> usize {
        self.chunk_length
    }

    pub fn num_chunks(&self) -> usize {
        self.data.len() / self.chunk_length
    }

    /// Whether the final chunk was completed with wrapped-around values.
    pub fn wrapped(&self) -> bool {
        self.wrapped
    }

    pub fn chunks(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.chunk_length)
    }

    pub fn chunk(&self, i: usize) -> &[f64] {
        &self.data[i * self.chunk_length..(i + 1) * self.chunk_length]
    }

    pub fn totals(&self) -> Vec<f64> {
        self.chunks().map(|c| c.iter().sum()).collect()
    }

    /// Concatenated chunks with wrap padding removed.
    pub fn flatten(&self) -> Vec<f64> {
        let n = self.data.len().min(self.source_len);
        self.data[..n].to_vec()
    }
}

/// Chunks sequentially into periods of `l` hours, wrapping at the end.
pub fn chunk(series: &HourlySeries, l: usize) -> Result<ChunkedSeries> {
    chunk_with(series, l, ChunkMode::Wrap)
}

pub fn chunk_with(series: &HourlySeries, l: usize, mode: ChunkMode) -> Result<ChunkedSeries> {
    chunk_values(series.values(), l, mode)
}

pub(crate) fn chunk_values(values: &[f64], l: usize, mode: ChunkMode) -> Result<ChunkedSeries> {
    let n = values.len();
    if l == 0 || l > n {
        return Err(Error::InvalidChunkLength {
            length: l,
            series_len: n,
        });
    }
    let remainder = n % l;
    let (data, wrapped) = match (remainder, mode) {
        (0, _) => (values.to_vec(), false),
        (_, ChunkMode::Wrap) => {
            let mut data = Vec::with_capacity(n + l - remainder);
            data.extend_from_slice(values);
            data.extend((0..l - remainder).map(|j| values[j % n]));
            (data, true)
        }
        (_, ChunkMode::Truncate) => (values[..n - remainder].to_vec(), false),
    };
    Ok(ChunkedSeries {
        data,
        chunk_length: l,
        source_len: n,
        wrapped,
    })
}

/// Checks two series share a length.
pub(crate) fn same_len(a: &HourlySeries, b: &HourlySeries) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}
