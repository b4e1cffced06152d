//! Dataset ingestion, min-max normalization, and fixed-length window sampling.
//!
//! Datasets are univariate series loaded from delimited text files (one
//! record per line, comma or tab separated, either `value` or
//! `timestamp,value` per record, optional header). Values are min-max
//! normalized to `[0, 1]` at load time; the scaling record is kept so raw
//! units can be recovered. Windows are contiguous slices of fixed length
//! sampled uniformly with replacement from the valid start range, driven by a
//! seeded ChaCha generator so sampling is bit-identical across runs and
//! platforms.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::DataError;

/// Default window length (observations per sampled window).
pub const DEFAULT_WINDOW_LEN: usize = 16;
/// Default number of windows sampled per dataset.
pub const DEFAULT_WINDOWS_PER_DATASET: usize = 10;

/// Min-max scaling record applied to a dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub min: f64,
    pub max: f64,
}

impl Normalization {
    fn of(values: &[f64]) -> Self {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self { min, max }
    }

    /// Map a raw value into `[0, 1]`. A degenerate range (`max == min`)
    /// maps everything to 0.
    pub fn normalize(&self, raw: f64) -> f64 {
        if self.max > self.min {
            (raw - self.min) / (self.max - self.min)
        } else {
            0.0
        }
    }

    /// Map a normalized value back to raw units.
    pub fn denormalize(&self, scaled: f64) -> f64 {
        if self.max > self.min {
            self.min + scaled * (self.max - self.min)
        } else {
            self.min
        }
    }
}

/// A univariate series, normalized to `[0, 1]`, with its raw values and the
/// scaling record retained. Immutable after construction.
#[derive(Debug, Clone)]
pub struct TimeSeriesDataset {
    pub id: String,
    pub name: String,
    pub values: Vec<f64>,
    pub raw_values: Vec<f64>,
    pub normalization: Normalization,
}

impl TimeSeriesDataset {
    /// Build a dataset from raw values, normalizing them on the way in.
    pub fn from_raw(
        id: impl Into<String>,
        name: impl Into<String>,
        raw_values: Vec<f64>,
    ) -> Result<Self, DataError> {
        let id = id.into();
        if raw_values.is_empty() {
            return Err(DataError::EmptySeries(id));
        }
        let normalization = Normalization::of(&raw_values);
        let values = raw_values
            .iter()
            .map(|&v| normalization.normalize(v))
            .collect();
        Ok(Self {
            id,
            name: name.into(),
            values,
            raw_values,
            normalization,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A contiguous slice of a dataset's normalized values.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub dataset_id: String,
    pub start: usize,
    pub length: usize,
    pub values: Vec<f64>,
}

impl Window {
    /// Extract the window `[start, start + length)` from a dataset.
    pub fn extract(
        dataset: &TimeSeriesDataset,
        start: usize,
        length: usize,
    ) -> Result<Self, DataError> {
        if length == 0 {
            return Err(DataError::ZeroLength);
        }
        if start + length > dataset.len() {
            return Err(DataError::WindowTooLong {
                length: start + length,
                series_len: dataset.len(),
            });
        }
        Ok(Self {
            dataset_id: dataset.id.clone(),
            start,
            length,
            values: dataset.values[start..start + length].to_vec(),
        })
    }
}

/// Parse a dataset file: optional header line, then one record per line,
/// comma or tab delimited, value in the last field.
pub fn load_dataset(path: impl AsRef<Path>, id: &str) -> Result<TimeSeriesDataset, DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    if !path.exists() {
        return Err(DataError::FileNotFound(display));
    }
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;

    let mut raw_values = Vec::new();
    // One non-numeric line is tolerated as a header, but only at the top.
    let mut header_allowed = true;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let field = last_field(trimmed);
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                raw_values.push(v);
                header_allowed = false;
            }
            Ok(_) => {
                return Err(DataError::NonFinite {
                    path: display,
                    line: line_no,
                })
            }
            Err(_) if header_allowed => header_allowed = false,
            Err(_) => {
                return Err(DataError::Parse {
                    path: display,
                    line: line_no,
                    value: field.to_string(),
                })
            }
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| id.to_string());
    if raw_values.is_empty() {
        return Err(DataError::EmptySeries(id.to_string()));
    }
    TimeSeriesDataset::from_raw(id, name, raw_values)
}

fn last_field(line: &str) -> &str {
    let field = if line.contains(',') {
        line.rsplit(',').next().unwrap_or(line)
    } else if line.contains('\t') {
        line.rsplit('\t').next().unwrap_or(line)
    } else {
        line
    };
    field.trim()
}

/// Load a corpus manifest: `id,path` records (comma or tab delimited),
/// `#`-prefixed comment lines allowed; paths resolve relative to the
/// manifest's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<(String, PathBuf)>, DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    if !path.exists() {
        return Err(DataError::FileNotFound(display));
    }
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if trimmed.contains(',') {
            trimmed.splitn(2, ',').collect()
        } else {
            trimmed.splitn(2, '\t').collect()
        };
        if fields.len() != 2 {
            return Err(DataError::Manifest {
                path: display,
                line: idx + 1,
                record: trimmed.to_string(),
            });
        }
        let id = fields[0].trim().to_string();
        let rel = Path::new(fields[1].trim());
        let resolved = if rel.is_absolute() {
            rel.to_path_buf()
        } else {
            base.join(rel)
        };
        entries.push((id, resolved));
    }
    Ok(entries)
}

/// Load every dataset named by a manifest, in manifest order.
pub fn load_corpus(manifest: impl AsRef<Path>) -> Result<Vec<TimeSeriesDataset>, DataError> {
    load_manifest(manifest)?
        .into_iter()
        .map(|(id, p)| load_dataset(p, &id))
        .collect()
}

/// Sample `count` windows of `length` values, start indices drawn uniformly
/// with replacement from `[0, n - length]` using a ChaCha generator seeded
/// with `seed`.
pub fn sample_windows(
    dataset: &TimeSeriesDataset,
    count: usize,
    length: usize,
    seed: u64,
) -> Result<Vec<Window>, DataError> {
    if count == 0 {
        return Err(DataError::ZeroWindows);
    }
    if length == 0 {
        return Err(DataError::ZeroLength);
    }
    let n = dataset.len();
    if length > n {
        return Err(DataError::WindowTooLong {
            length,
            series_len: n,
        });
    }
    let max_start = n - length;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let start = rng.gen_range(0..=max_start);
            Window::extract(dataset, start, length)
        })
        .collect()
}
