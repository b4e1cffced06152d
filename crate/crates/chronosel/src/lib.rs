//! Model selection benchmark for univariate time-series forecasting.
//!
//! The crate answers one question end to end: given a new time series, which
//! forecasting configuration (algorithm + hyperparameters + data
//! representation) should be used, and how good was that choice? Selection
//! strategies range from asking an LLM over a rendered prompt to classic
//! meta-learning over a precomputed performance tensor, plus the heuristic
//! baselines in between. Everything is deterministic under fixed seeds and
//! recorded LLM fixtures, so whole experiments replay bit-for-bit.
//!
//! The pipeline, module by module:
//!
//! - [`data`]: dataset loading, min-max normalization, seeded window sampling.
//! - [`space`]: the enumerated model space (322 configurations in the
//!   canonical grid) with exact-value lookup.
//! - [`features`]: the 32-entry meta-feature catalog over windows.
//! - [`forecast`]: native lightweight forecasters and representation
//!   transforms.
//! - [`matrix`]: the window × dataset × model performance tensor, its file
//!   format, and ground-truth rankings.
//! - [`prompt`]: prompt rendering and response parsing for LLM selection.
//! - [`llm`]: provider-agnostic chat-completion client with record/replay.
//! - [`selectors`]: the selection strategies (random, popular, SOTA-variant,
//!   ISAC, MLP, LLM).
//! - [`harness`]: the experiment runner, hit@k / MSE / runtime / token
//!   metrics, and report emission.

pub mod data;
pub mod error;
pub mod features;
pub mod forecast;
pub mod harness;
pub mod llm;
pub mod matrix;
pub mod prompt;
pub mod selectors;
pub mod space;

pub use error::{Error, Result};
