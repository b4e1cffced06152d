//! Native lightweight forecasters and data-representation transforms.
//!
//! These back two things: performance-tensor construction (one-step-ahead
//! squared error per window) and the landmarker meta-features. Everything
//! here is deterministic; the only randomness is the seeded bootstrap in
//! [`random_forest_lite`].
//!
//! Forecasters operate on plain value slices so the same code serves whole
//! windows and held-out training prefixes. All of them forecast exactly one
//! step ahead.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Window;
use crate::error::ForecastError;

/// Default exponential-smoothing factor when a configuration does not set one.
pub const DEFAULT_SMOOTHING_ALPHA: f64 = 0.3;

/// Pre-forecast transform of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepresentationTransform {
    /// Identity.
    Raw,
    /// First-order exponential smoothing: `s_0 = x_0`,
    /// `s_t = alpha * x_t + (1 - alpha) * s_{t-1}`.
    ExpSmoothing { alpha: f64 },
}

impl RepresentationTransform {
    pub fn exp_smoothing(alpha: f64) -> Result<Self, ForecastError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ForecastError::BadAlpha(alpha));
        }
        Ok(RepresentationTransform::ExpSmoothing { alpha })
    }

    /// Transform a value slice.
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        match *self {
            RepresentationTransform::Raw => values.to_vec(),
            RepresentationTransform::ExpSmoothing { alpha } => {
                let mut out = Vec::with_capacity(values.len());
                let mut state = match values.first() {
                    Some(&x) => x,
                    None => return out,
                };
                out.push(state);
                for &x in &values[1..] {
                    state = alpha * x + (1.0 - alpha) * state;
                    out.push(state);
                }
                out
            }
        }
    }
}

/// Apply a representation transform to a window, keeping its provenance.
pub fn apply_representation(window: &Window, transform: &RepresentationTransform) -> Window {
    Window {
        dataset_id: window.dataset_id.clone(),
        start: window.start,
        length: window.length,
        values: transform.apply_values(&window.values),
    }
}

/// A one-step-ahead forecast with its fit cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastResult {
    pub prediction: f64,
    pub fit_seconds: f64,
    pub model_id: usize,
}

impl ForecastResult {
    fn new(prediction: f64, started: Instant) -> Self {
        ForecastResult {
            prediction,
            fit_seconds: started.elapsed().as_secs_f64(),
            model_id: 0,
        }
    }

    pub fn with_model_id(mut self, model_id: usize) -> Self {
        self.model_id = model_id;
        self
    }
}

/// Forecast the next value as the observation one season earlier:
/// `values[n - season_length]`, falling back to the first observation when
/// the season reaches past the start of the series.
pub fn seasonal_naive(
    values: &[f64],
    season_length: usize,
) -> Result<ForecastResult, ForecastError> {
    let started = Instant::now();
    let n = values.len();
    if n == 0 {
        return Err(ForecastError::TooShort { needed: 1, got: 0 });
    }
    let season = season_length.max(1);
    let prediction = if season <= n {
        values[n - season]
    } else {
        values[0]
    };
    Ok(ForecastResult::new(prediction, started))
}

/// Deterministic terms added to an autoregression design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trend {
    /// No deterministic terms.
    None,
    /// Constant.
    Constant,
    /// Linear time.
    Time,
    /// Constant plus linear time.
    ConstantTime,
}

impl Trend {
    /// Parse the statsmodels-style code: `n`, `c`, `t`, or `ct`.
    pub fn parse_code(code: &str) -> Option<Trend> {
        match code.trim() {
            "n" => Some(Trend::None),
            "c" => Some(Trend::Constant),
            "t" => Some(Trend::Time),
            "ct" => Some(Trend::ConstantTime),
            _ => None,
        }
    }

    fn terms(&self, time: f64) -> Vec<f64> {
        match self {
            Trend::None => vec![],
            Trend::Constant => vec![1.0],
            Trend::Time => vec![time],
            Trend::ConstantTime => vec![1.0, time],
        }
    }
}

/// A fitted autoregression: deterministic (trend) coefficients followed by
/// lag coefficients, with the one-step forecast and in-sample residual
/// variance (population convention).
#[derive(Debug, Clone, PartialEq)]
pub struct ArOlsFit {
    pub trend_coefficients: Vec<f64>,
    pub lag_coefficients: Vec<f64>,
    pub prediction: f64,
    pub residual_variance: f64,
}

/// Ordinary-least-squares autoregression of order `order` with deterministic
/// terms per `trend`. Rank-deficient designs are solved via minimum-norm
/// least squares (SVD). Requires at least `order + 4` observations.
pub fn fit_ar_ols(values: &[f64], order: usize, trend: Trend) -> Result<ArOlsFit, ForecastError> {
    let n = values.len();
    let order = order.max(1);
    if n < order + 4 {
        return Err(ForecastError::TooShort {
            needed: order + 4,
            got: n,
        });
    }
    let n_trend = trend.terms(0.0).len();
    let n_cols = n_trend + order;
    let n_rows = n - order;

    let mut design = DMatrix::zeros(n_rows, n_cols);
    let mut target = DVector::zeros(n_rows);
    for (row, t) in (order..n).enumerate() {
        for (j, term) in trend.terms(t as f64).into_iter().enumerate() {
            design[(row, j)] = term;
        }
        for lag in 1..=order {
            design[(row, n_trend + lag - 1)] = values[t - lag];
        }
        target[row] = values[t];
    }

    let svd = design.clone().svd(true, true);
    let coefficients = svd
        .solve(&target, 1e-12)
        .expect("SVD solve cannot fail when both factors are computed");

    let residuals = &design * &coefficients - &target;
    let residual_variance = residuals.iter().map(|r| r * r).sum::<f64>() / n_rows as f64;

    let mut prediction = 0.0;
    for (j, term) in trend.terms(n as f64).into_iter().enumerate() {
        prediction += coefficients[j] * term;
    }
    for lag in 1..=order {
        prediction += coefficients[n_trend + lag - 1] * values[n - lag];
    }

    Ok(ArOlsFit {
        trend_coefficients: coefficients.as_slice()[..n_trend].to_vec(),
        lag_coefficients: coefficients.as_slice()[n_trend..].to_vec(),
        prediction,
        residual_variance,
    })
}

/// One-step autoregressive forecast; see [`fit_ar_ols`] for the fit itself.
pub fn ar_ols(values: &[f64], order: usize, trend: Trend) -> Result<ForecastResult, ForecastError> {
    let started = Instant::now();
    let fit = fit_ar_ols(values, order, trend)?;
    Ok(ForecastResult::new(fit.prediction, started))
}

/// Landmark baseline kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Mean,
    Drift,
}

/// Mean forecast or drift extrapolation `last + (last - first) / (n - 1)`.
pub fn mean_drift_forecast(
    values: &[f64],
    kind: BaselineKind,
) -> Result<ForecastResult, ForecastError> {
    let started = Instant::now();
    let n = values.len();
    if n < 2 {
        return Err(ForecastError::TooShort { needed: 2, got: n });
    }
    let prediction = match kind {
        BaselineKind::Mean => values.iter().sum::<f64>() / n as f64,
        BaselineKind::Drift => {
            let last = values[n - 1];
            let first = values[0];
            last + (last - first) / (n - 1) as f64
        }
    };
    Ok(ForecastResult::new(prediction, started))
}

const RF_LAGS: usize = 3;

/// Bagged regression trees over a 3-lag embedding of the series.
///
/// Each tree trains on a bootstrap sample of the embedded pairs (indices
/// drawn sequentially from one ChaCha stream seeded with `seed`, one draw
/// per pair per tree) and splits greedily on the threshold minimizing the
/// summed squared error of the two children. `max_depth: None` grows trees
/// until nodes are pure. The forecast is the ensemble mean at the final lag
/// vector.
pub fn random_forest_lite(
    values: &[f64],
    n_estimators: usize,
    max_depth: Option<usize>,
    seed: u64,
) -> Result<ForecastResult, ForecastError> {
    let started = Instant::now();
    let n = values.len();
    if n < RF_LAGS + RF_LAGS {
        return Err(ForecastError::TooShort {
            needed: RF_LAGS + RF_LAGS,
            got: n,
        });
    }
    let n_estimators = n_estimators.max(1);

    let mut rows: Vec<[f64; RF_LAGS]> = Vec::with_capacity(n - RF_LAGS);
    let mut targets: Vec<f64> = Vec::with_capacity(n - RF_LAGS);
    for t in RF_LAGS..n {
        rows.push([values[t - 1], values[t - 2], values[t - 3]]);
        targets.push(values[t]);
    }
    let query = [values[n - 1], values[n - 2], values[n - 3]];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..n_estimators {
        let sample: Vec<usize> = (0..rows.len())
            .map(|_| rng.gen_range(0..rows.len()))
            .collect();
        let tree = grow_tree(&rows, &targets, &sample, max_depth, 0);
        sum += tree.predict(&query);
    }
    Ok(ForecastResult::new(sum / n_estimators as f64, started))
}

enum TreeNode {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn predict(&self, query: &[f64; RF_LAGS]) -> f64 {
        match self {
            TreeNode::Leaf(v) => *v,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if query[*feature] <= *threshold {
                    left.predict(query)
                } else {
                    right.predict(query)
                }
            }
        }
    }
}

fn mean_of(targets: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| targets[i]).sum::<f64>() / idx.len() as f64
}

fn sse_of(targets: &[f64], idx: &[usize]) -> f64 {
    let mean = mean_of(targets, idx);
    idx.iter().map(|&i| (targets[i] - mean).powi(2)).sum()
}

fn grow_tree(
    rows: &[[f64; RF_LAGS]],
    targets: &[f64],
    idx: &[usize],
    max_depth: Option<usize>,
    depth: usize,
) -> TreeNode {
    let at_depth_limit = max_depth.is_some_and(|d| depth >= d);
    if idx.len() < 2 || at_depth_limit {
        return TreeNode::Leaf(mean_of(targets, idx));
    }
    let first = targets[idx[0]];
    if idx.iter().all(|&i| targets[i] == first) {
        return TreeNode::Leaf(first);
    }

    // Best split over (feature, midpoint between adjacent distinct values);
    // features in order, thresholds ascending, strict improvement only, so
    // ties keep the first candidate.
    let mut best: Option<(usize, f64, f64)> = None;
    for feature in 0..RF_LAGS {
        let mut feature_values: Vec<f64> = idx.iter().map(|&i| rows[i][feature]).collect();
        feature_values.sort_by(|a, b| a.total_cmp(b));
        feature_values.dedup();
        for pair in feature_values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let left: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| rows[i][feature] <= threshold)
                .collect();
            let right: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| rows[i][feature] > threshold)
                .collect();
            if left.is_empty() || right.is_empty() {
                continue;
            }
            let sse = sse_of(targets, &left) + sse_of(targets, &right);
            if best.as_ref().is_none_or(|&(_, _, b)| sse < b) {
                best = Some((feature, threshold, sse));
            }
        }
    }

    match best {
        None => TreeNode::Leaf(mean_of(targets, idx)),
        Some((feature, threshold, _)) => {
            let left_idx: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| rows[i][feature] <= threshold)
                .collect();
            let right_idx: Vec<usize> = idx
                .iter()
                .copied()
                .filter(|&i| rows[i][feature] > threshold)
                .collect();
            TreeNode::Split {
                feature,
                threshold,
                left: Box::new(grow_tree(rows, targets, &left_idx, max_depth, depth + 1)),
                right: Box::new(grow_tree(rows, targets, &right_idx, max_depth, depth + 1)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn raw_representation_is_identity() {
        let values = vec![0.3, 0.9, 0.1];
        assert_eq!(RepresentationTransform::Raw.apply_values(&values), values);
    }

    #[test]
    fn exp_smoothing_unrolls_the_recursion() {
        let t = RepresentationTransform::exp_smoothing(0.5).unwrap();
        assert_eq!(t.apply_values(&[0.0, 1.0]), vec![0.0, 0.5]);
    }

    #[test]
    fn exp_smoothing_with_alpha_one_is_identity() {
        let t = RepresentationTransform::exp_smoothing(1.0).unwrap();
        let values = vec![0.2, 0.8, 0.5, 0.5];
        assert_eq!(t.apply_values(&values), values);
    }

    #[test]
    fn alpha_outside_unit_interval_is_rejected() {
        assert!(RepresentationTransform::exp_smoothing(0.0).is_err());
        assert!(RepresentationTransform::exp_smoothing(1.5).is_err());
    }

    #[test]
    fn exp_smoothing_stays_within_input_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let values: Vec<f64> = (0..16).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let alpha = rng.gen_range(0.05..1.0);
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let t = RepresentationTransform::exp_smoothing(alpha).unwrap();
            for s in t.apply_values(&values) {
                assert!(s >= lo - 1e-12 && s <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn seasonal_naive_matches_definition() {
        let values = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(seasonal_naive(&values, 1).unwrap().prediction, 4.0);
        assert_eq!(seasonal_naive(&values, 2).unwrap().prediction, 3.0);
        // Season longer than the series falls back to the first value.
        assert_eq!(seasonal_naive(&values, 9).unwrap().prediction, 1.0);
        let constant = [5.0; 16];
        for m in [1, 5, 7, 10, 30] {
            assert_eq!(seasonal_naive(&constant, m).unwrap().prediction, 5.0);
        }
    }

    #[test]
    fn ar_ols_recovers_planted_ar1() {
        let mut values = vec![1.0];
        for t in 1..20 {
            values.push(0.5 * values[t - 1]);
        }
        let fit = fit_ar_ols(&values, 1, Trend::None).unwrap();
        assert_abs_diff_eq!(fit.lag_coefficients[0], 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(
            fit.prediction,
            0.5 * values[values.len() - 1],
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(fit.residual_variance, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ar_ols_on_constant_series_predicts_the_constant() {
        let values = [0.7; 12];
        let fit = fit_ar_ols(&values, 1, Trend::Constant).unwrap();
        assert_abs_diff_eq!(fit.prediction, 0.7, epsilon = 1e-8);
    }

    #[test]
    fn ar_ols_on_zero_series_predicts_zero_exactly() {
        let values = [0.0; 10];
        let fit = fit_ar_ols(&values, 1, Trend::None).unwrap();
        assert_eq!(fit.prediction, 0.0);
    }

    #[test]
    fn ar_ols_rejects_short_series() {
        assert!(matches!(
            fit_ar_ols(&[1.0, 2.0, 3.0], 1, Trend::None),
            Err(ForecastError::TooShort { needed: 5, got: 3 })
        ));
    }

    /// Gaussian elimination with partial pivoting on the normal equations;
    /// independent of the SVD path under test.
    fn normal_equations_solve(design: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
        let p = design[0].len();
        let mut ata = vec![vec![0.0; p + 1]; p];
        for i in 0..p {
            for j in 0..p {
                ata[i][j] = design.iter().map(|row| row[i] * row[j]).sum();
            }
            ata[i][p] = design.iter().zip(target).map(|(row, y)| row[i] * y).sum();
        }
        for col in 0..p {
            let pivot = (col..p)
                .max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs()))
                .unwrap();
            ata.swap(col, pivot);
            for row in 0..p {
                if row != col {
                    let factor = ata[row][col] / ata[col][col];
                    for k in col..=p {
                        ata[row][k] -= factor * ata[col][k];
                    }
                }
            }
        }
        (0..p).map(|i| ata[i][p] / ata[i][i]).collect()
    }

    #[test]
    fn ar_ols_matches_normal_equations_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let values: Vec<f64> = (0..24).map(|_| rng.gen_range(0.0..1.0)).collect();
            let order = 2;
            let fit = fit_ar_ols(&values, order, Trend::ConstantTime).unwrap();

            let mut design = Vec::new();
            let mut target = Vec::new();
            for t in order..values.len() {
                design.push(vec![1.0, t as f64, values[t - 1], values[t - 2]]);
                target.push(values[t]);
            }
            let coefs = normal_equations_solve(&design, &target);
            let n = values.len() as f64;
            let expected = coefs[0]
                + coefs[1] * n
                + coefs[2] * values[values.len() - 1]
                + coefs[3] * values[values.len() - 2];
            assert_abs_diff_eq!(fit.prediction, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn mean_and_drift_baselines() {
        let values = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(
            mean_drift_forecast(&values, BaselineKind::Mean)
                .unwrap()
                .prediction,
            1.5
        );
        assert_eq!(
            mean_drift_forecast(&values, BaselineKind::Drift)
                .unwrap()
                .prediction,
            4.0
        );
        let constant = [2.5; 8];
        for kind in [BaselineKind::Mean, BaselineKind::Drift] {
            assert_eq!(
                mean_drift_forecast(&constant, kind).unwrap().prediction,
                2.5
            );
        }
        assert!(mean_drift_forecast(&[1.0], BaselineKind::Mean).is_err());
    }

    #[test]
    fn forest_on_constant_series_predicts_the_constant() {
        let values = [0.4; 10];
        let out = random_forest_lite(&values, 10, Some(5), 3).unwrap();
        // Every leaf is the constant; the ensemble mean only adds summation
        // rounding.
        assert_abs_diff_eq!(out.prediction, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn forest_is_deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let values: Vec<f64> = (0..30).map(|_| rng.gen_range(0.0..1.0)).collect();
        let a = random_forest_lite(&values, 25, None, 77).unwrap();
        let b = random_forest_lite(&values, 25, None, 77).unwrap();
        assert_eq!(a.prediction, b.prediction);
    }

    #[test]
    fn single_stump_matches_exhaustive_split_enumeration() {
        // 6 observations embed into 3 training pairs; replicate the
        // documented bootstrap stream, then enumerate every stump.
        let values = [0.1, 0.9, 0.2, 0.8, 0.3, 0.7];
        let seed = 21;
        let out = random_forest_lite(&values, 1, Some(1), seed).unwrap();

        let mut rows = Vec::new();
        let mut targets = Vec::new();
        for t in 3..values.len() {
            rows.push([values[t - 1], values[t - 2], values[t - 3]]);
            targets.push(values[t]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample: Vec<usize> = (0..rows.len())
            .map(|_| rng.gen_range(0..rows.len()))
            .collect();

        let query = [values[5], values[4], values[3]];
        let mean = |idx: &[usize]| idx.iter().map(|&i| targets[i]).sum::<f64>() / idx.len() as f64;
        let sse = |idx: &[usize]| {
            let m = mean(idx);
            idx.iter().map(|&i| (targets[i] - m).powi(2)).sum::<f64>()
        };

        let mut best: Option<(f64, f64)> = None; // (sse, prediction)
        for feature in 0..3 {
            let mut feat: Vec<f64> = sample.iter().map(|&i| rows[i][feature]).collect();
            feat.sort_by(|a, b| a.total_cmp(b));
            feat.dedup();
            for pair in feat.windows(2) {
                let threshold = (pair[0] + pair[1]) / 2.0;
                let left: Vec<usize> = sample
                    .iter()
                    .copied()
                    .filter(|&i| rows[i][feature] <= threshold)
                    .collect();
                let right: Vec<usize> = sample
                    .iter()
                    .copied()
                    .filter(|&i| rows[i][feature] > threshold)
                    .collect();
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let split_sse = sse(&left) + sse(&right);
                let prediction = if query[feature] <= threshold {
                    mean(&left)
                } else {
                    mean(&right)
                };
                if best.is_none_or(|(b, _)| split_sse < b) {
                    best = Some((split_sse, prediction));
                }
            }
        }
        let expected = best.map(|(_, p)| p).unwrap_or_else(|| mean(&sample));
        assert_eq!(out.prediction, expected);
    }

    #[test]
    fn forest_rejects_short_series() {
        assert!(random_forest_lite(&[1.0; 5], 1, None, 0).is_err());
    }
}
