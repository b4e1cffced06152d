//! Error types, grouped by pipeline stage.

use thiserror::Error;

/// Errors from dataset loading and window sampling.
#[derive(Error, Debug)]
pub enum DataError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("{path}:{line}: could not parse value {value:?}")]
    Parse {
        path: String,
        line: usize,
        value: String,
    },
    #[error("dataset {0:?} contains no values")]
    EmptySeries(String),
    #[error("window length {length} exceeds series length {series_len}")]
    WindowTooLong { length: usize, series_len: usize },
    #[error("window count must be at least 1")]
    ZeroWindows,
    #[error("window length must be at least 1")]
    ZeroLength,
    #[error("{path}:{line}: malformed manifest record {record:?}")]
    Manifest {
        path: String,
        line: usize,
        record: String,
    },
    #[error("non-finite value at {path}:{line}")]
    NonFinite { path: String, line: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Errors from model-space configuration and enumeration.
#[derive(Error, Debug)]
pub enum SpaceError {
    #[error("duplicate value {value:?} in grid {grid:?} of algorithm {algorithm:?}")]
    DuplicateValue {
        algorithm: String,
        grid: String,
        value: String,
    },
    #[error("empty grid {grid:?} for algorithm {algorithm:?}")]
    EmptyGrid { algorithm: String, grid: String },
    #[error("unknown algorithm name {0:?} in space configuration")]
    UnknownAlgorithm(String),
    #[error("unknown representation {0:?} in space configuration")]
    UnknownRepresentation(String),
    #[error("could not read space configuration {path}: {reason}")]
    Config { path: String, reason: String },
}

/// Errors from meta-feature extraction.
#[derive(Error, Debug)]
pub enum FeatureError {
    #[error("window of length {0} is too short for feature extraction (minimum 4)")]
    WindowTooShort(usize),
    #[error("empty input: no feature vectors to aggregate")]
    EmptyInput,
    #[error("catalog mismatch: expected {expected:?}, got {got:?}")]
    CatalogMismatch { expected: String, got: String },
}

/// Errors from the native forecasters.
#[derive(Error, Debug)]
pub enum ForecastError {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("smoothing factor must lie in (0, 1], got {0}")]
    BadAlpha(f64),
}

/// Errors from performance-tensor construction, IO, and queries.
#[derive(Error, Debug)]
pub enum MatrixError {
    #[error("{path}:{line}: {reason}")]
    Format {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("model-space checksum mismatch: file has {file}, active space is {active}")]
    SpaceMismatch { file: String, active: String },
    #[error("{0}")]
    Dimension(String),
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error("dataset {0:?} has no complete model aggregate")]
    AllMissing(String),
    #[error("window manifest mismatch: file has {file}, active windows hash to {active}")]
    ManifestMismatch { file: String, active: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Errors from prompt rendering (response parsing never errors; failures are
/// `Invalid` outcomes).
#[derive(Error, Debug)]
pub enum PromptError {
    #[error("missing template section {0:?}")]
    TemplateMissing(String),
    #[error("variant includes meta-features but none were supplied")]
    MetaFeaturesRequired,
    #[error("meta-features supplied but the variant does not include them")]
    UnexpectedMetaFeatures,
}

/// Errors from the chat-completion client.
#[derive(Error, Debug)]
pub enum ClientError {
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    #[error("endpoint {endpoint} unreachable after {attempts} attempts: {reason}")]
    EndpointUnreachable {
        endpoint: String,
        attempts: u32,
        reason: String,
    },
    #[error("no fixture recorded for request hash {0}")]
    FixtureMiss(String),
    #[error("provider returned status {status}: {body_excerpt}")]
    Provider { status: u16, body_excerpt: String },
    #[error("fixture store {path} is not writable: {reason}")]
    StoreUnwritable { path: String, reason: String },
    #[error("hash collision guard: fixture {hash} already holds a different request")]
    HashCollisionGuard { hash: String },
    #[error("unknown provider profile {0:?}")]
    UnknownProfile(String),
    #[error("malformed provider response: {0}")]
    MalformedResponse(String),
}

/// Errors from the selection strategies.
#[derive(Error, Debug)]
pub enum SelectorError {
    #[error("model space is empty")]
    EmptySpace,
    #[error("configured popular model is not in the active space")]
    NotInSpace,
    #[error("no model of family {0:?} has any performance entry")]
    AllMissingForFamily(String),
    #[error("need at least {k} datasets to form {k} clusters, got {got}")]
    TooFewDatasets { k: usize, got: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Errors from the experiment harness and report emission.
#[derive(Error, Debug)]
pub enum HarnessError {
    #[error("k = {k} exceeds the model-space size {m}")]
    KExceedsSpace { k: usize, m: usize },
    #[error("selection for dataset {dataset:?} references model {model} with no matrix entries")]
    MissingEntry { dataset: String, model: usize },
    #[error("output path {path} is not writable: {source}")]
    Unwritable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid experiment configuration: {0}")]
    Config(String),
}

/// Top-level error, one variant per pipeline stage.
#[derive(Error, Debug)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

pub type Result<T> = std::result::Result<T, Error>;
