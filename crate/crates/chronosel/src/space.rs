//! The candidate model space: (algorithm, hyperparameters, representation)
//! tuples enumerated from a grid configuration.
//!
//! Hyperparameter values are canonicalized to exact decimals before any
//! comparison, so `"10"`, `10`, and `10.0` all name the same grid point while
//! string values like `"None"` or `"HC0"` compare case-sensitively. The
//! canonical configuration (shipped as `modelspace/canonical.conf` and
//! embedded here) enumerates 322 configurations across seven algorithm
//! families.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::SpaceError;

/// The seven forecasting algorithm families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    DeepAr,
    DeepFactor,
    Prophet,
    SeasonalNaive,
    GaussianProcess,
    Var,
    RandomForest,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::DeepAr,
        Algorithm::DeepFactor,
        Algorithm::Prophet,
        Algorithm::SeasonalNaive,
        Algorithm::GaussianProcess,
        Algorithm::Var,
        Algorithm::RandomForest,
    ];

    /// Compact token used in configuration files.
    pub fn token(self) -> &'static str {
        match self {
            Algorithm::DeepAr => "DeepAR",
            Algorithm::DeepFactor => "DeepFactor",
            Algorithm::Prophet => "Prophet",
            Algorithm::SeasonalNaive => "SeasonalNaive",
            Algorithm::GaussianProcess => "GaussianProcess",
            Algorithm::Var => "VAR",
            Algorithm::RandomForest => "RandomForest",
        }
    }

    /// Human-readable name, used when rendering the space into prompts.
    pub fn display_name(self) -> &'static str {
        match self {
            Algorithm::DeepAr => "DeepAR",
            Algorithm::DeepFactor => "DeepFactor",
            Algorithm::Prophet => "Prophet",
            Algorithm::SeasonalNaive => "Seasonal Naive",
            Algorithm::GaussianProcess => "Gaussian Process",
            Algorithm::Var => "Vector Auto Regression",
            Algorithm::RandomForest => "Random Forest Regressor",
        }
    }

    /// Match a free-form name (config token, display name, or common alias).
    /// Comparison ignores case and non-alphanumeric characters.
    pub fn parse_name(name: &str) -> Option<Algorithm> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "deepar" => Some(Algorithm::DeepAr),
            "deepfactor" | "deepfactors" => Some(Algorithm::DeepFactor),
            "prophet" => Some(Algorithm::Prophet),
            "seasonalnaive" => Some(Algorithm::SeasonalNaive),
            "gaussianprocess" => Some(Algorithm::GaussianProcess),
            "var" | "vectorautoregression" => Some(Algorithm::Var),
            "randomforest" | "randomforestregressor" => Some(Algorithm::RandomForest),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Pre-forecast data representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Representation {
    ExpSmoothing,
    Raw,
}

impl Representation {
    pub fn token(self) -> &'static str {
        match self {
            Representation::ExpSmoothing => "Exp_smoothing",
            Representation::Raw => "Raw",
        }
    }

    /// Match a free-form representation name, ignoring case and separators.
    pub fn parse_name(name: &str) -> Option<Representation> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "expsmoothing" | "exponentialsmoothing" => Some(Representation::ExpSmoothing),
            "raw" => Some(Representation::Raw),
            _ => None,
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// An exact decimal: `unscaled / 10^scale`, normalized so that the unscaled
/// part carries no trailing zeros (and zero has scale 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decimal {
    unscaled: i64,
    scale: u32,
}

impl Decimal {
    pub fn new(unscaled: i64, scale: u32) -> Self {
        let mut d = Decimal { unscaled, scale };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.unscaled == 0 {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.unscaled % 10 == 0 {
            self.unscaled /= 10;
            self.scale -= 1;
        }
    }

    /// Parse a plain or exponent-form decimal literal exactly.
    pub fn parse(text: &str) -> Option<Decimal> {
        let s = text.trim();
        if s.is_empty() {
            return None;
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(pos) => {
                let exp: i32 = s[pos + 1..].parse().ok()?;
                (&s[..pos], exp)
            }
            None => (s, 0),
        };
        let (mantissa, negative) = match mantissa.strip_prefix('-') {
            Some(rest) => (rest, true),
            None => (mantissa.strip_prefix('+').unwrap_or(mantissa), false),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut unscaled: i128 = digits.parse().ok()?;
        if negative {
            unscaled = -unscaled;
        }
        let mut scale = frac_part.len() as i64 - exp as i64;
        while scale < 0 {
            unscaled = unscaled.checked_mul(10)?;
            scale += 1;
        }
        if scale > u32::MAX as i64 {
            return None;
        }
        let unscaled = i64::try_from(unscaled).ok()?;
        Some(Decimal::new(unscaled, scale as u32))
    }

    /// Exact decimal from an `f64` via its shortest round-trip rendering.
    pub fn from_f64(value: f64) -> Option<Decimal> {
        if !value.is_finite() {
            return None;
        }
        Decimal::parse(&format!("{value}"))
    }

    pub fn to_f64(self) -> f64 {
        self.unscaled as f64 / 10f64.powi(self.scale as i32)
    }

    /// Exact absolute-difference comparison: |self - a| vs |self - b|.
    pub fn cmp_distance(self, a: Decimal, b: Decimal) -> std::cmp::Ordering {
        let da = self.abs_diff_scaled(a);
        let db = self.abs_diff_scaled(b);
        // Differences are expressed at each pair's own scale; rescale to the
        // common maximum before comparing.
        let scale = da.1.max(db.1);
        let va = da.0 * 10i128.pow(scale - da.1);
        let vb = db.0 * 10i128.pow(scale - db.1);
        va.cmp(&vb)
    }

    fn abs_diff_scaled(self, other: Decimal) -> (i128, u32) {
        let scale = self.scale.max(other.scale);
        let a = self.unscaled as i128 * 10i128.pow(scale - self.scale);
        let b = other.unscaled as i128 * 10i128.pow(scale - other.scale);
        ((a - b).abs(), scale)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.unscaled);
        }
        let sign = if self.unscaled < 0 { "-" } else { "" };
        let magnitude = self.unscaled.unsigned_abs();
        let pow = 10u64.pow(self.scale);
        let int = magnitude / pow;
        let frac = magnitude % pow;
        write!(f, "{sign}{int}.{frac:0width$}", width = self.scale as usize)
    }
}

/// A canonicalized hyperparameter value: exact decimal or literal string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HyperValue {
    Num(Decimal),
    Text(String),
}

impl HyperValue {
    /// Canonicalize free text: parse as an exact decimal when possible,
    /// otherwise keep the (trimmed) string.
    pub fn parse(text: &str) -> HyperValue {
        match Decimal::parse(text) {
            Some(d) => HyperValue::Num(d),
            None => HyperValue::Text(text.trim().to_string()),
        }
    }

    pub fn from_i64(v: i64) -> HyperValue {
        HyperValue::Num(Decimal::new(v, 0))
    }

    pub fn as_num(&self) -> Option<Decimal> {
        match self {
            HyperValue::Num(d) => Some(*d),
            HyperValue::Text(_) => None,
        }
    }
}

impl fmt::Display for HyperValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperValue::Num(d) => write!(f, "{d}"),
            HyperValue::Text(s) => f.write_str(s),
        }
    }
}

/// One candidate configuration: algorithm, hyperparameters in schema order,
/// and data representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    pub algorithm: Algorithm,
    pub hyperparameters: Vec<(String, HyperValue)>,
    pub representation: Representation,
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.algorithm)?;
        for (i, (name, value)) in self.hyperparameters.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        write!(f, ") / {}", self.representation)
    }
}

/// One hyperparameter grid: a name and its allowed values.
#[derive(Debug, Clone)]
pub struct Grid {
    pub name: String,
    pub values: Vec<HyperValue>,
}

/// Grid block for one algorithm family.
#[derive(Debug, Clone)]
pub struct AlgorithmGrid {
    pub algorithm: Algorithm,
    pub grids: Vec<Grid>,
    pub representations: Vec<Representation>,
}

impl AlgorithmGrid {
    pub fn grid(&self, name: &str) -> Option<&Grid> {
        self.grids.iter().find(|g| g.name == name)
    }

    /// Number of specs this block contributes.
    pub fn count(&self) -> usize {
        self.grids.iter().map(|g| g.values.len()).product::<usize>()
            * self.representations.len()
    }
}

/// Parsed model-space configuration, in file order.
#[derive(Debug, Clone)]
pub struct SpaceConfig {
    pub algorithms: Vec<AlgorithmGrid>,
}

#[derive(Deserialize)]
struct RawConfig {
    #[serde(default)]
    algorithms: Vec<RawAlgorithm>,
}

#[derive(Deserialize)]
struct RawAlgorithm {
    name: String,
    representations: Vec<String>,
    #[serde(default)]
    hyperparameters: Vec<RawGrid>,
}

#[derive(Deserialize)]
struct RawGrid {
    name: String,
    values: Vec<toml::Value>,
}

impl SpaceConfig {
    /// Parse a configuration from TOML text.
    pub fn from_toml(text: &str) -> Result<SpaceConfig, SpaceError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| SpaceError::Config {
            path: "<inline>".to_string(),
            reason: e.to_string(),
        })?;
        let mut algorithms = Vec::with_capacity(raw.algorithms.len());
        for alg in raw.algorithms {
            let algorithm = Algorithm::parse_name(&alg.name)
                .ok_or_else(|| SpaceError::UnknownAlgorithm(alg.name.clone()))?;
            let mut representations = Vec::new();
            for rep in &alg.representations {
                let parsed = Representation::parse_name(rep)
                    .ok_or_else(|| SpaceError::UnknownRepresentation(rep.clone()))?;
                if representations.contains(&parsed) {
                    return Err(SpaceError::DuplicateValue {
                        algorithm: alg.name.clone(),
                        grid: "representations".to_string(),
                        value: rep.clone(),
                    });
                }
                representations.push(parsed);
            }
            if representations.is_empty() {
                return Err(SpaceError::EmptyGrid {
                    algorithm: alg.name.clone(),
                    grid: "representations".to_string(),
                });
            }
            let mut grids = Vec::new();
            for grid in alg.hyperparameters {
                if grid.values.is_empty() {
                    return Err(SpaceError::EmptyGrid {
                        algorithm: alg.name.clone(),
                        grid: grid.name,
                    });
                }
                let mut values = Vec::with_capacity(grid.values.len());
                for v in grid.values {
                    let value = canonicalize_toml(&v).ok_or_else(|| SpaceError::Config {
                        path: "<inline>".to_string(),
                        reason: format!("unsupported grid value {v:?} in {}", grid.name),
                    })?;
                    if values.contains(&value) {
                        return Err(SpaceError::DuplicateValue {
                            algorithm: alg.name.clone(),
                            grid: grid.name,
                            value: value.to_string(),
                        });
                    }
                    values.push(value);
                }
                grids.push(Grid {
                    name: grid.name,
                    values,
                });
            }
            algorithms.push(AlgorithmGrid {
                algorithm,
                grids,
                representations,
            });
        }
        Ok(SpaceConfig { algorithms })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<SpaceConfig, SpaceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SpaceError::Config {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        SpaceConfig::from_toml(&text)
    }

    /// The canonical 322-model grid shipped with the crate.
    pub fn canonical() -> SpaceConfig {
        SpaceConfig::from_toml(include_str!("../../../modelspace/canonical.conf"))
            .expect("embedded canonical space configuration is valid")
    }

    pub fn algorithm(&self, algorithm: Algorithm) -> Option<&AlgorithmGrid> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }
}

fn canonicalize_toml(value: &toml::Value) -> Option<HyperValue> {
    match value {
        toml::Value::Integer(i) => Some(HyperValue::from_i64(*i)),
        toml::Value::Float(f) => Decimal::from_f64(*f).map(HyperValue::Num),
        toml::Value::String(s) => Some(HyperValue::parse(s)),
        _ => None,
    }
}

/// The enumerated model space: every spec with a stable integer id, plus the
/// grid configuration it came from. Immutable once built.
#[derive(Debug, Clone)]
pub struct ModelSpace {
    specs: Vec<ModelSpec>,
    index: HashMap<ModelSpec, usize>,
    config: SpaceConfig,
    checksum: String,
}

impl ModelSpace {
    /// Enumerate the full space from a grid configuration: per algorithm, the
    /// Cartesian product of its grids (file order, slowest first) with the
    /// representation varying fastest; blocks concatenated in file order.
    pub fn enumerate(config: SpaceConfig) -> Result<ModelSpace, SpaceError> {
        let mut specs = Vec::new();
        for block in &config.algorithms {
            let mut combos: Vec<Vec<(String, HyperValue)>> = vec![Vec::new()];
            for grid in &block.grids {
                let mut next = Vec::with_capacity(combos.len() * grid.values.len());
                for combo in &combos {
                    for value in &grid.values {
                        let mut extended = combo.clone();
                        extended.push((grid.name.clone(), value.clone()));
                        next.push(extended);
                    }
                }
                combos = next;
            }
            for combo in combos {
                for representation in &block.representations {
                    specs.push(ModelSpec {
                        algorithm: block.algorithm,
                        hyperparameters: combo.clone(),
                        representation: *representation,
                    });
                }
            }
        }
        let mut index = HashMap::with_capacity(specs.len());
        for (id, spec) in specs.iter().enumerate() {
            index.insert(spec.clone(), id);
        }
        let checksum = checksum_of(&specs);
        Ok(ModelSpace {
            specs,
            index,
            config,
            checksum,
        })
    }

    /// The canonical 322-model space.
    pub fn canonical() -> ModelSpace {
        ModelSpace::enumerate(SpaceConfig::canonical())
            .expect("embedded canonical space enumerates")
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[ModelSpec] {
        &self.specs
    }

    pub fn spec(&self, id: usize) -> Option<&ModelSpec> {
        self.specs.get(id)
    }

    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    /// SHA-256 over the canonical enumeration, hex-encoded. Two spaces with
    /// identical spec sequences share a checksum.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// Exact lookup of a candidate tuple. Hyperparameters may arrive in any
    /// order; names must match the algorithm's schema exactly (no extras, no
    /// omissions) and values are compared canonically.
    pub fn lookup(
        &self,
        algorithm: Algorithm,
        hyperparameters: &[(String, HyperValue)],
        representation: Representation,
    ) -> Option<usize> {
        let block = self.config.algorithm(algorithm)?;
        if hyperparameters.len() != block.grids.len() {
            return None;
        }
        let mut ordered = Vec::with_capacity(block.grids.len());
        for grid in &block.grids {
            let (_, value) = hyperparameters.iter().find(|(name, _)| *name == grid.name)?;
            ordered.push((grid.name.clone(), value.clone()));
        }
        let key = ModelSpec {
            algorithm,
            hyperparameters: ordered,
            representation,
        };
        self.index.get(&key).copied()
    }

    /// Ids of every spec in one algorithm family, ascending.
    pub fn family_ids(&self, algorithm: Algorithm) -> Vec<usize> {
        self.specs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.algorithm == algorithm)
            .map(|(id, _)| id)
            .collect()
    }

    /// Per-algorithm spec counts, in configuration order.
    pub fn family_counts(&self) -> Vec<(Algorithm, usize)> {
        self.config
            .algorithms
            .iter()
            .map(|block| (block.algorithm, block.count()))
            .collect()
    }
}

fn checksum_of(specs: &[ModelSpec]) -> String {
    let mut hasher = Sha256::new();
    for spec in specs {
        hasher.update(spec.algorithm.token().as_bytes());
        hasher.update(b"|");
        for (name, value) in &spec.hyperparameters {
            hasher.update(name.as_bytes());
            hasher.update(b"=");
            hasher.update(value.to_string().as_bytes());
            hasher.update(b",");
        }
        hasher.update(b"|");
        hasher.update(spec.representation.token().as_bytes());
        hasher.update(b"\n");
    }
    hex_encode(&hasher.finalize())
}

pub(crate) fn hex_encode(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
