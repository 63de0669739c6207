//! Noise / bias / variance decomposition for learners under a Bregman loss.
//!
//! For a fixed input `x`, with `Y` the outcome, `D` a random training set and
//! `f_D` the predictor trained on it:
//!
//! ```text
//! E_{D,Y}[D_F(Y‖f_D(x))] = E_Y[D_F(Y‖f*(x))]        noise
//!                        + D_F(f*(x)‖f̄(x))          bias
//!                        + E_D[D_F(f̄(x)‖f_D(x))]    variance
//! ```
//!
//! where `f*(x) = E[Y | x]` and `f̄(x)` is the left minimizer of the predictor
//! distribution, i.e. `∇F(f̄) = E_D[∇F(f_D(x))]`.
//!
//! Two evaluation modes:
//!
//! - [`Mode::EmpiricalExact`]: the dataset distribution is the finite population
//!   of `n_datasets` seeded training sets and `Y` ranges over the model's finite
//!   conditional support. All expectations are exact finite sums, so the
//!   identity holds to rounding error.
//! - [`Mode::MonteCarlo`]: `f*` is the analytic conditional mean and the noise
//!   and total are sample averages over `n_datasets · n_train` fresh outcome
//!   draws. The same draws feed both averages, each draw paired with
//!   predictor `i mod n_datasets`.
//!
//! Randomness: training set `j` is drawn from its own ChaCha8 stream seeded
//! with [`stream_seed`]`(seed, j)`, so datasets can be generated in parallel
//! and every reduction runs in index order.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::divergence::{divergence, divergence_from_closure};
use crate::error::{Error, Result};
use crate::generator::{ConvexGenerator, Domain, Point};
use crate::minimizers::{expected_divergence, left_minimizer, EmpiricalDistribution, Side};
use crate::numeric::{logistic, CompensatedSum};

/// Named real-valued parameters.
pub type Params = BTreeMap<String, f64>;

/// Distance kept from the domain boundary when clamping predictions.
pub const CLAMP_MARGIN: f64 = 1e-9;

/// Mixing constant for per-stream seeds. Part of the reproducibility contract:
/// changing it changes every generated dataset.
pub const STREAM_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream index reserved for Monte Carlo outcome draws.
pub const NOISE_STREAM: u64 = u64::MAX - 1;

/// Gaussian noise in `gaussian_sine` is truncated to `±NOISE_TRUNCATION`
/// standard deviations (symmetric, so the conditional mean is unchanged).
pub const NOISE_TRUNCATION: f64 = 4.0;

/// Seed of stream `stream` derived from the run seed:
/// `seed XOR mix64((stream + 1) · STREAM_MIX)` where `mix64` is the
/// SplitMix64 finalizer.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ mix64(stream.wrapping_add(1).wrapping_mul(STREAM_MIX))
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn take_params(
    what: &str,
    params: &Params,
    allowed: &[(&str, f64)],
    err: fn(String) -> Error,
) -> Result<Vec<f64>> {
    if let Some(k) = params.keys().find(|k| !allowed.iter().any(|(a, _)| a == k)) {
        let names: Vec<&str> = allowed.iter().map(|(a, _)| *a).collect();
        return Err(err(format!(
            "{} has no parameter `{}` (expected {})",
            what,
            k,
            names.join(", ")
        )));
    }
    allowed
        .iter()
        .map(|(name, default)| {
            let v = params.get(*name).copied().unwrap_or(*default);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(format!("{} parameter `{}` must be finite", what, name)))
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Data models
// ---------------------------------------------------------------------------

pub const DATA_MODELS: [&str; 3] = ["gaussian_sine", "two_point", "logistic_bernoulli"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataModel {
    /// `Y = sin(2πx) + shift + σε`, ε standard normal truncated to ±4.
    GaussianSine { sigma: f64, shift: f64 },
    /// `Y ∈ {a, b}` with equal probability, independent of `x`.
    TwoPoint { a: f64, b: f64 },
    /// `Y ∈ {0, 1}` with `P(Y = 1 | x) = logistic(slope·x + intercept)`.
    LogisticBernoulli { slope: f64, intercept: f64 },
}

/// Builds a data model. Inputs are drawn uniformly from `[0, 1)`.
///
/// Parameters and defaults: gaussian_sine `sigma = 0.3, shift = 0`;
/// two_point `a = 0, b = 1`; logistic_bernoulli `slope = 0, intercept = 0`.
pub fn make_data_model(name: &str, params: &Params) -> Result<DataModel> {
    let err = Error::InvalidParameter;
    match name {
        "gaussian_sine" => {
            let v = take_params(name, params, &[("sigma", 0.3), ("shift", 0.0)], err)?;
            if v[0] < 0.0 {
                return Err(Error::InvalidParameter("gaussian_sine sigma must be >= 0".into()));
            }
            Ok(DataModel::GaussianSine {
                sigma: v[0],
                shift: v[1],
            })
        }
        "two_point" => {
            let v = take_params(name, params, &[("a", 0.0), ("b", 1.0)], err)?;
            Ok(DataModel::TwoPoint { a: v[0], b: v[1] })
        }
        "logistic_bernoulli" => {
            let v = take_params(name, params, &[("slope", 0.0), ("intercept", 0.0)], err)?;
            Ok(DataModel::LogisticBernoulli {
                slope: v[0],
                intercept: v[1],
            })
        }
        _ => Err(Error::UnknownDataModel(name.to_string())),
    }
}

impl DataModel {
    pub fn name(&self) -> &'static str {
        match self {
            DataModel::GaussianSine { .. } => "gaussian_sine",
            DataModel::TwoPoint { .. } => "two_point",
            DataModel::LogisticBernoulli { .. } => "logistic_bernoulli",
        }
    }

    pub fn sample_input<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random::<f64>()
    }

    pub fn sample_output<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> Point {
        match *self {
            DataModel::GaussianSine { sigma, shift } => {
                let eps = loop {
                    let e: f64 = rng.sample(StandardNormal);
                    if e.abs() <= NOISE_TRUNCATION {
                        break e;
                    }
                };
                vec![(2.0 * PI * x).sin() + shift + sigma * eps]
            }
            DataModel::TwoPoint { a, b } => vec![if rng.random_bool(0.5) { b } else { a }],
            DataModel::LogisticBernoulli { .. } => {
                let p = self.success_probability(x);
                vec![if rng.random::<f64>() < p { 1.0 } else { 0.0 }]
            }
        }
    }

    fn success_probability(&self, x: f64) -> f64 {
        match *self {
            DataModel::LogisticBernoulli { slope, intercept } => logistic(slope * x + intercept),
            _ => unreachable!("only logistic_bernoulli has a success probability"),
        }
    }

    /// `E[Y | x]`.
    pub fn conditional_mean(&self, x: f64) -> Point {
        match *self {
            DataModel::GaussianSine { shift, .. } => vec![(2.0 * PI * x).sin() + shift],
            DataModel::TwoPoint { a, b } => vec![0.5 * (a + b)],
            DataModel::LogisticBernoulli { .. } => vec![self.success_probability(x)],
        }
    }

    /// The conditional law of `Y` given `x`, when it has finite support.
    pub fn finite_conditional_support(&self, x: f64) -> Option<EmpiricalDistribution> {
        match *self {
            DataModel::GaussianSine { .. } => None,
            DataModel::TwoPoint { a, b } => {
                EmpiricalDistribution::new(vec![vec![a], vec![b]], vec![0.5, 0.5]).ok()
            }
            DataModel::LogisticBernoulli { .. } => {
                let p = self.success_probability(x);
                EmpiricalDistribution::new(vec![vec![0.0], vec![1.0]], vec![1.0 - p, p]).ok()
            }
        }
    }

    /// Smallest closed interval holding every possible outcome.
    pub fn output_bounds(&self) -> (f64, f64) {
        match *self {
            DataModel::GaussianSine { sigma, shift } => {
                let r = 1.0 + NOISE_TRUNCATION * sigma;
                (shift - r, shift + r)
            }
            DataModel::TwoPoint { a, b } => (a.min(b), a.max(b)),
            DataModel::LogisticBernoulli { .. } => (0.0, 1.0),
        }
    }

    /// Checks that every outcome has a finite generator value (outcomes may
    /// sit on the domain boundary) and that `E[Y | x]` is interior.
    pub fn check_compatibility(&self, gen: &ConvexGenerator, x: f64) -> Result<()> {
        if gen.dimension() != 1 {
            return Err(Error::IncompatibleParams(format!(
                "data model {} produces 1-dimensional outputs but generator {} has dimension {}",
                self.name(),
                gen.name(),
                gen.dimension()
            )));
        }
        let (lo, hi) = self.output_bounds();
        let continuous = matches!(self, DataModel::GaussianSine { .. });
        for y in [lo, hi] {
            let ok = if continuous {
                gen.domain().contains(&[y])?
            } else {
                gen.closure_value(&[y])?.is_some()
            };
            if !ok {
                return Err(Error::IncompatibleParams(format!(
                    "{} outcome {} is outside the domain {} of generator {}",
                    self.name(),
                    y,
                    gen.domain(),
                    gen.name()
                )));
            }
        }
        let mean = self.conditional_mean(x);
        if !gen.domain().contains(&mean)? {
            return Err(Error::IncompatibleParams(format!(
                "conditional mean {:?} of {} is outside the domain {} of generator {}",
                mean,
                self.name(),
                gen.domain(),
                gen.name()
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

pub const LEARNERS: [&str; 3] = ["shrunk_mean", "knn_mean", "laplace_rate"];

/// One training example.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: f64,
    pub output: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LearnerSpec {
    /// `λ·anchor + (1 − λ)·mean(y)`, constant in `x`.
    ShrunkMean { lambda: f64, anchor: f64 },
    /// Mean output of the `k` training inputs nearest to `x`.
    KnnMean { k: usize },
    /// `(Σy + α) / (n + 2α)`, constant in `x`.
    LaplaceRate { alpha: f64 },
}

/// Builds a learner. Defaults: shrunk_mean `lambda = 0, anchor = 0`;
/// knn_mean `k = 1`; laplace_rate `alpha = 1`.
pub fn make_learner(name: &str, params: &Params) -> Result<LearnerSpec> {
    let err = Error::InvalidHyperparameter;
    let learner = match name {
        "shrunk_mean" => {
            let v = take_params(name, params, &[("lambda", 0.0), ("anchor", 0.0)], err)?;
            LearnerSpec::ShrunkMean {
                lambda: v[0],
                anchor: v[1],
            }
        }
        "knn_mean" => {
            let v = take_params(name, params, &[("k", 1.0)], err)?;
            if v[0] < 1.0 || v[0].fract() != 0.0 {
                return Err(Error::InvalidHyperparameter(format!(
                    "knn_mean k must be a positive integer, got {}",
                    v[0]
                )));
            }
            LearnerSpec::KnnMean { k: v[0] as usize }
        }
        "laplace_rate" => {
            let v = take_params(name, params, &[("alpha", 1.0)], err)?;
            LearnerSpec::LaplaceRate { alpha: v[0] }
        }
        _ => return Err(Error::UnknownLearner(name.to_string())),
    };
    learner.validate()?;
    Ok(learner)
}

impl LearnerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerSpec::ShrunkMean { .. } => "shrunk_mean",
            LearnerSpec::KnnMean { .. } => "knn_mean",
            LearnerSpec::LaplaceRate { .. } => "laplace_rate",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LearnerSpec::ShrunkMean { lambda, .. } if !(0.0..=1.0).contains(&lambda) => Err(
                Error::InvalidHyperparameter(format!("shrunk_mean lambda must be in [0, 1], got {}", lambda)),
            ),
            LearnerSpec::LaplaceRate { alpha } if alpha < 0.0 => Err(Error::InvalidHyperparameter(
                format!("laplace_rate alpha must be >= 0, got {}", alpha),
            )),
            _ => Ok(()),
        }
    }

    /// The current hyperparameters by name.
    pub fn hyperparameters(&self) -> Params {
        let pairs: Vec<(&str, f64)> = match *self {
            LearnerSpec::ShrunkMean { lambda, anchor } => vec![("lambda", lambda), ("anchor", anchor)],
            LearnerSpec::KnnMean { k } => vec![("k", k as f64)],
            LearnerSpec::LaplaceRate { alpha } => vec![("alpha", alpha)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// A copy with one hyperparameter replaced.
    pub fn with_hyperparameter(&self, name: &str, value: f64) -> Result<LearnerSpec> {
        let mut params = self.hyperparameters();
        if !params.contains_key(name) {
            return Err(Error::InvalidHyperparameter(format!(
                "{} has no hyperparameter `{}`",
                self.name(),
                name
            )));
        }
        params.insert(name.to_string(), value);
        make_learner(self.name(), &params)
    }

    /// Fits a predictor. Deterministic in the data.
    pub fn train(&self, data: &[Sample]) -> Predictor {
        let n = data.len() as f64;
        match *self {
            LearnerSpec::ShrunkMean { lambda, anchor } => {
                let mean = output_mean(data.iter());
                Predictor::Constant(mean.iter().map(|m| lambda * anchor + (1.0 - lambda) * m).collect())
            }
            LearnerSpec::LaplaceRate { alpha } => {
                let dim = data.first().map_or(1, |s| s.output.len());
                let rate = (0..dim)
                    .map(|c| {
                        let mut acc = CompensatedSum::new();
                        data.iter().for_each(|s| acc.add(s.output[c]));
                        (acc.value() + alpha) / (n + 2.0 * alpha)
                    })
                    .collect();
                Predictor::Constant(rate)
            }
            LearnerSpec::KnnMean { k } => Predictor::Knn {
                data: data.to_vec(),
                k,
            },
        }
    }
}

fn output_mean<'a, I: Iterator<Item = &'a Sample>>(samples: I) -> Point {
    let mut acc: Vec<CompensatedSum> = Vec::new();
    let mut count = 0usize;
    for s in samples {
        if acc.is_empty() {
            acc = vec![CompensatedSum::new(); s.output.len()];
        }
        for (a, v) in acc.iter_mut().zip(&s.output) {
            a.add(*v);
        }
        count += 1;
    }
    acc.iter().map(|a| a.value() / count as f64).collect()
}

/// A trained prediction function.
#[derive(Debug, Clone, PartialEq)]
pub enum Predictor {
    Constant(Point),
    Knn { data: Vec<Sample>, k: usize },
}

impl Predictor {
    /// Raw prediction, possibly outside the loss generator's domain.
    pub fn predict(&self, x: f64) -> Point {
        match self {
            Predictor::Constant(p) => p.clone(),
            Predictor::Knn { data, k } => {
                let mut order: Vec<usize> = (0..data.len()).collect();
                // stable: ties broken by training index
                order.sort_by(|&i, &j| {
                    let di = (data[i].input - x).abs();
                    let dj = (data[j].input - x).abs();
                    di.total_cmp(&dj)
                });
                let k = (*k).min(data.len());
                output_mean(order[..k].iter().map(|&i| &data[i]))
            }
        }
    }

    /// Prediction clamped into the open domain (margin [`CLAMP_MARGIN`]),
    /// with the number of clamped coordinates.
    pub fn predict_in(&self, x: f64, domain: &Domain) -> (Point, usize) {
        let mut p = self.predict(x);
        let clamped = domain.clamp_into(&mut p, CLAMP_MARGIN);
        (p, clamped)
    }
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    EmpiricalExact,
    MonteCarlo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::EmpiricalExact => "empirical_exact",
            Mode::MonteCarlo => "monte_carlo",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical_exact" => Ok(Mode::EmpiricalExact),
            "monte_carlo" => Ok(Mode::MonteCarlo),
            _ => Err(Error::InvalidParameter(format!(
                "mode `{}` (expected empirical_exact or monte_carlo)",
                s
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasVarianceReport {
    pub noise: f64,
    pub bias: f64,
    pub variance: f64,
    pub total: f64,
    /// `total − noise − bias − variance`.
    pub residual: f64,
    /// `f̄(x)`.
    pub central_prediction: Point,
    /// `f*(x)`.
    pub bayes_prediction: Point,
    pub mode: Mode,
    pub n_datasets: usize,
    pub n_train: usize,
    pub seed: u64,
    /// Prediction coordinates moved into the open domain.
    pub clamp_count: usize,
}

/// Predictions at `x` of learners trained on `n_datasets` seeded datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionPopulation {
    /// `f_{D_j}(x)` after clamping, in dataset order.
    pub predictions: Vec<Point>,
    pub clamp_count: usize,
}

/// Draws training set `index` of the run with seed `seed`.
pub fn draw_dataset(model: &DataModel, n_train: usize, seed: u64, index: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, index));
    (0..n_train)
        .map(|_| {
            let input = model.sample_input(&mut rng);
            let output = model.sample_output(input, &mut rng);
            Sample { input, output }
        })
        .collect()
}

/// Trains one predictor per dataset (in parallel) and evaluates each at `x`.
///
/// A prediction still outside the generator's domain after clamping fails
/// with `DomainViolation` tagged with its dataset index.
pub fn simulate_predictions(
    gen: &ConvexGenerator,
    model: &DataModel,
    learner: &LearnerSpec,
    x: f64,
    n_datasets: usize,
    n_train: usize,
    seed: u64,
) -> Result<PredictionPopulation> {
    let results: Vec<Result<(Point, usize)>> = (0..n_datasets)
        .into_par_iter()
        .map(|j| {
            let data = draw_dataset(model, n_train, seed, j as u64);
            let (p, clamped) = learner.train(&data).predict_in(x, gen.domain());
            gen.domain()
                .require(&p, "prediction")
                .map_err(|e| Error::at(j, e))?;
            Ok((p, clamped))
        })
        .collect();
    let mut predictions = Vec::with_capacity(n_datasets);
    let mut clamp_count = 0;
    for r in results {
        let (p, c) = r?;
        predictions.push(p);
        clamp_count += c;
    }
    Ok(PredictionPopulation {
        predictions,
        clamp_count,
    })
}

/// `n` outcome draws `Y ~ P(Y | x)` from the reserved noise stream.
pub fn draw_outcomes(model: &DataModel, x: f64, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, NOISE_STREAM));
    (0..n).map(|_| model.sample_output(x, &mut rng)).collect()
}

/// The five quantities of the decomposition, before run metadata is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Terms {
    pub noise: f64,
    pub bias: f64,
    pub variance: f64,
    pub total: f64,
    pub central_prediction: Point,
    pub bayes_prediction: Point,
}

impl Terms {
    pub fn residual(&self) -> f64 {
        self.total - self.noise - self.bias - self.variance
    }
}

/// `f̄` and the variance term for a predictor population.
fn central_and_variance(gen: &ConvexGenerator, predictions: &[Point]) -> Result<(Point, f64)> {
    let population = EmpiricalDistribution::uniform(predictions.to_vec())?;
    let central = left_minimizer(gen, &population)?;
    let variance = expected_divergence(gen, Side::SecondArgRandom, &population, &central)?;
    Ok((central, variance))
}

/// Exact decomposition over a finite predictor population and a finite
/// outcome law. `total` is the direct double sum
/// `Σ_j Σ_k (1/J)·w_k·D_F(y_k‖p_j)`.
pub fn decompose_population_exact(
    gen: &ConvexGenerator,
    outcomes: &EmpiricalDistribution,
    predictions: &[Point],
) -> Result<Terms> {
    let bayes = crate::minimizers::right_minimizer(outcomes)?;
    gen.domain().require(&bayes, "conditional mean")?;
    let (central, variance) = central_and_variance(gen, predictions)?;
    let mut noise = CompensatedSum::new();
    for (y, w) in outcomes.iter() {
        noise.add(w * divergence_from_closure(gen, y, &bayes)?);
    }
    let bias = divergence(gen, &bayes, &central)?;
    let scale = 1.0 / predictions.len() as f64;
    let mut total = CompensatedSum::new();
    for p in predictions {
        for (y, w) in outcomes.iter() {
            total.add(scale * w * divergence_from_closure(gen, y, p)?);
        }
    }
    Ok(Terms {
        noise: noise.value(),
        bias,
        variance,
        total: total.value(),
        central_prediction: central,
        bayes_prediction: bayes,
    })
}

/// The exact total computed by conditioning on each dataset first:
/// the inner expectation over `Y` per predictor, then the mean over datasets.
pub fn exact_total_by_conditioning(
    gen: &ConvexGenerator,
    outcomes: &EmpiricalDistribution,
    predictions: &[Point],
) -> Result<f64> {
    let mut outer = CompensatedSum::new();
    for p in predictions {
        let mut inner = CompensatedSum::new();
        for (y, w) in outcomes.iter() {
            inner.add(w * divergence_from_closure(gen, y, p)?);
        }
        outer.add(inner.value());
    }
    Ok(outer.value() / predictions.len() as f64)
}

/// Sampled decomposition: `bayes` is the analytic `f*(x)`, noise and total are
/// averages over `draws`, draw `i` paired with predictor `i mod J`.
pub fn decompose_population_sampled(
    gen: &ConvexGenerator,
    bayes: &[f64],
    draws: &[Point],
    predictions: &[Point],
) -> Result<Terms> {
    gen.domain().require(bayes, "conditional mean")?;
    if draws.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let (central, variance) = central_and_variance(gen, predictions)?;
    let mut noise = CompensatedSum::new();
    let mut total = CompensatedSum::new();
    for (i, y) in draws.iter().enumerate() {
        noise.add(divergence_from_closure(gen, y, bayes).map_err(|e| Error::at(i, e))?);
        let p = &predictions[i % predictions.len()];
        total.add(divergence_from_closure(gen, y, p).map_err(|e| Error::at(i, e))?);
    }
    let n = draws.len() as f64;
    Ok(Terms {
        noise: noise.value() / n,
        bias: divergence(gen, bayes, &central)?,
        variance,
        total: total.value() / n,
        central_prediction: central,
        bayes_prediction: bayes.to_vec(),
    })
}

/// Full pipeline: draw datasets, train, predict at `x`, decompose.
#[allow(clippy::too_many_arguments)]
pub fn decompose_bias_variance(
    gen: &ConvexGenerator,
    model: &DataModel,
    learner: &LearnerSpec,
    x: f64,
    n_datasets: usize,
    n_train: usize,
    seed: u64,
    mode: Mode,
) -> Result<BiasVarianceReport> {
    if n_datasets == 0 || n_train == 0 {
        return Err(Error::InvalidParameter(
            "n_datasets and n_train must be at least 1".into(),
        ));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("input x = {} is not finite", x)));
    }
    let outcomes = match mode {
        Mode::EmpiricalExact => Some(model.finite_conditional_support(x).ok_or_else(|| {
            Error::ModeUnsupported(
                mode.to_string(),
                format!("data model {} has no finite conditional support", model.name()),
            )
        })?),
        Mode::MonteCarlo => None,
    };
    model.check_compatibility(gen, x)?;
    let population = simulate_predictions(gen, model, learner, x, n_datasets, n_train, seed)?;
    let terms = match outcomes {
        Some(outcomes) => decompose_population_exact(gen, &outcomes, &population.predictions)?,
        None => {
            let draws = draw_outcomes(model, x, n_datasets * n_train, seed);
            decompose_population_sampled(gen, &model.conditional_mean(x), &draws, &population.predictions)?
        }
    };
    Ok(BiasVarianceReport {
        residual: terms.residual(),
        noise: terms.noise,
        bias: terms.bias,
        variance: terms.variance,
        total: terms.total,
        central_prediction: terms.central_prediction,
        bayes_prediction: terms.bayes_prediction,
        mode,
        n_datasets,
        n_train,
        seed,
        clamp_count: population.clamp_count,
    })
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// The quantity varied across a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepKey {
    NTrain,
    NDatasets,
    Input,
    /// A learner hyperparameter by name.
    Learner(String),
}

impl FromStr for SweepKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n_train" => SweepKey::NTrain,
            "n_datasets" => SweepKey::NDatasets,
            "x" => SweepKey::Input,
            other => {
                let name = other.strip_prefix("learner.params.").unwrap_or(other);
                if name.is_empty() {
                    return Err(Error::InvalidParameter("empty sweep key".into()));
                }
                SweepKey::Learner(name.to_string())
            }
        })
    }
}

fn as_count(key: &str, v: f64) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "sweep value {} for {} must be a positive integer",
            v, key
        )))
    }
}

/// One report per grid value, in grid order. Grid point `i` runs with seed
/// `seed + i` (wrapping).
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    gen: &ConvexGenerator,
    model: &DataModel,
    learner: &LearnerSpec,
    x: f64,
    key: &SweepKey,
    grid: &[f64],
    n_datasets: usize,
    n_train: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<BiasVarianceReport>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("sweep grid is empty".into()));
    }
    grid.iter()
        .enumerate()
        .map(|(i, &v)| {
            let seed = seed.wrapping_add(i as u64);
            let (mut l, mut xi, mut nd, mut nt) = (*learner, x, n_datasets, n_train);
            match key {
                SweepKey::NTrain => nt = as_count("n_train", v)?,
                SweepKey::NDatasets => nd = as_count("n_datasets", v)?,
                SweepKey::Input => xi = v,
                SweepKey::Learner(name) => l = learner.with_hyperparameter(name, v)?,
            }
            decompose_bias_variance(gen, model, &l, xi, nd, nt, seed, mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::builtin_generator;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn samples(outputs: &[f64]) -> Vec<Sample> {
        outputs
            .iter()
            .enumerate()
            .map(|(i, &y)| Sample {
                input: i as f64 / 10.0,
                output: vec![y],
            })
            .collect()
    }

    #[test]
    fn data_model_examples() {
        let m = make_data_model("two_point", &params(&[("a", 0.0), ("b", 2.0)])).unwrap();
        for x in [0.0, 0.3, 0.9] {
            assert_eq!(m.conditional_mean(x), vec![1.0]);
        }
        let m = make_data_model("gaussian_sine", &params(&[("sigma", 0.0)])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for x in [0.1, 0.25, 0.8] {
            assert_eq!(m.sample_output(x, &mut rng), m.conditional_mean(x));
        }
        let m = make_data_model("logistic_bernoulli", &Params::new()).unwrap();
        assert_eq!(m.conditional_mean(0.7), vec![0.5]);
    }

    #[test]
    fn finite_support_means_match_conditional_means() {
        let models = [
            make_data_model("two_point", &params(&[("a", 1.0), ("b", 4.0)])).unwrap(),
            make_data_model("logistic_bernoulli", &params(&[("slope", 3.0), ("intercept", -1.0)])).unwrap(),
        ];
        for m in models {
            for x in [0.0, 0.2, 0.5, 0.99] {
                let s = m.finite_conditional_support(x).unwrap();
                let mean = crate::minimizers::right_minimizer(&s).unwrap();
                assert!((mean[0] - m.conditional_mean(x)[0]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn data_model_errors() {
        assert_eq!(
            make_data_model("sine", &Params::new()).unwrap_err(),
            Error::UnknownDataModel("sine".into())
        );
        assert!(make_data_model("two_point", &params(&[("c", 1.0)])).is_err());
        assert!(make_data_model("gaussian_sine", &params(&[("sigma", -1.0)])).is_err());
    }

    #[test]
    fn compatibility_rules() {
        let ne = builtin_generator("negentropy", 1).unwrap();
        let is = builtin_generator("itakura_saito", 1).unwrap();
        let be = builtin_generator("bit_entropy", 1).unwrap();
        let sine = make_data_model("gaussian_sine", &params(&[("sigma", 0.2), ("shift", 2.0)])).unwrap();
        assert!(sine.check_compatibility(&ne, 0.3).is_ok());
        let wide = make_data_model("gaussian_sine", &params(&[("sigma", 0.5), ("shift", 2.0)])).unwrap();
        assert_eq!(wide.check_compatibility(&ne, 0.3).unwrap_err().code(), "E_INCOMPATIBLE_PARAMS");
        let bern = make_data_model("logistic_bernoulli", &Params::new()).unwrap();
        assert!(bern.check_compatibility(&be, 0.3).is_ok());
        assert!(bern.check_compatibility(&ne, 0.3).is_ok());
        assert_eq!(bern.check_compatibility(&is, 0.3).unwrap_err().code(), "E_INCOMPATIBLE_PARAMS");
        let sq2 = builtin_generator("squared", 2).unwrap();
        assert!(bern.check_compatibility(&sq2, 0.3).is_err());
    }

    #[test]
    fn learner_examples() {
        let full = make_learner("shrunk_mean", &params(&[("lambda", 1.0), ("anchor", 0.5)])).unwrap();
        assert_eq!(full.train(&samples(&[7.0, 9.0])).predict(0.3), vec![0.5]);
        let none = make_learner("shrunk_mean", &params(&[("lambda", 0.0)])).unwrap();
        assert_eq!(none.train(&samples(&[1.0, 3.0])).predict(0.3), vec![2.0]);
        let lap = make_learner("laplace_rate", &params(&[("alpha", 1.0)])).unwrap();
        assert_eq!(lap.train(&samples(&[1.0, 1.0, 0.0])).predict(0.0), vec![0.6]);
    }

    #[test]
    fn knn_uses_nearest_inputs() {
        let knn = make_learner("knn_mean", &params(&[("k", 2.0)])).unwrap();
        // inputs 0.0, 0.1, 0.2, 0.3
        let p = knn.train(&samples(&[10.0, 20.0, 30.0, 40.0]));
        assert_eq!(p.predict(0.21), vec![35.0]);
        assert_eq!(p.predict(0.14), vec![25.0]);
        assert_eq!(p.predict(-5.0), vec![15.0]);
        let big = make_learner("knn_mean", &params(&[("k", 10.0)])).unwrap();
        assert_eq!(big.train(&samples(&[1.0, 2.0])).predict(0.0), vec![1.5]);
    }

    #[test]
    fn learner_errors() {
        assert_eq!(
            make_learner("svm", &Params::new()).unwrap_err(),
            Error::UnknownLearner("svm".into())
        );
        for (name, p) in [
            ("shrunk_mean", params(&[("lambda", 1.5)])),
            ("knn_mean", params(&[("k", 0.0)])),
            ("knn_mean", params(&[("k", 1.5)])),
            ("laplace_rate", params(&[("alpha", -0.1)])),
            ("laplace_rate", params(&[("beta", 1.0)])),
        ] {
            assert_eq!(make_learner(name, &p).unwrap_err().code(), "E_INVALID_HYPERPARAMETER");
        }
    }

    #[test]
    fn laplace_clamps_into_unit_interval() {
        let lap = make_learner("laplace_rate", &params(&[("alpha", 0.0)])).unwrap();
        let unit = builtin_generator("bit_entropy", 1).unwrap();
        let (p, c) = lap.train(&samples(&[0.0, 0.0])).predict_in(0.0, unit.domain());
        assert_eq!((p, c), (vec![CLAMP_MARGIN], 1));
    }

    #[test]
    fn stream_seeds_are_distinct_and_stable() {
        let s: Vec<u64> = (0..1000).map(|j| stream_seed(42, j)).collect();
        let mut sorted = s.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), s.len());
        assert_eq!(stream_seed(42, 0), 42 ^ mix64(STREAM_MIX));
    }

    #[test]
    fn population_exact_squared_example() {
        // 2 predictors × 2 outcomes, enumerated by hand
        let sq = builtin_generator("squared", 1).unwrap();
        let outcomes = EmpiricalDistribution::uniform(vec![vec![0.0], vec![2.0]]).unwrap();
        let t = decompose_population_exact(&sq, &outcomes, &[vec![0.5], vec![1.5]]).unwrap();
        assert_eq!(t.noise, 0.5);
        assert_eq!(t.bias, 0.0);
        assert_eq!(t.variance, 0.125);
        assert_eq!(t.total, 0.625);
        assert!(t.residual().abs() <= 1e-12);
    }

    #[test]
    fn population_exact_itakura_saito_example() {
        let is = builtin_generator("itakura_saito", 1).unwrap();
        let outcomes = EmpiricalDistribution::uniform(vec![vec![1.0], vec![4.0]]).unwrap();
        let t = decompose_population_exact(&is, &outcomes, &[vec![1.0], vec![4.0]]).unwrap();
        assert!((t.central_prediction[0] - 1.6).abs() <= 1e-15);
        assert!((t.variance - 0.223_143_551_314_209_76).abs() <= 1e-14);
        assert!(t.residual().abs() <= 1e-12);
    }

    /// Finds a seed whose `n_datasets` single-sample datasets produce the
    /// requested outputs in some order.
    fn seed_producing(model: &DataModel, wanted: &[f64]) -> u64 {
        (0..1000)
            .find(|&seed| {
                let mut got: Vec<f64> = (0..wanted.len() as u64)
                    .map(|j| draw_dataset(model, 1, seed, j)[0].output[0])
                    .collect();
                got.sort_by(f64::total_cmp);
                got == wanted
            })
            .expect("some seed draws each outcome once")
    }

    #[test]
    fn end_to_end_squared_two_point() {
        let sq = builtin_generator("squared", 1).unwrap();
        let model = make_data_model("two_point", &params(&[("a", 0.0), ("b", 2.0)])).unwrap();
        // λ = ½ towards anchor 1 on single-sample datasets gives {0.5, 1.5}
        let learner = make_learner("shrunk_mean", &params(&[("lambda", 0.5), ("anchor", 1.0)])).unwrap();
        let seed = seed_producing(&model, &[0.0, 2.0]);
        let r = decompose_bias_variance(&sq, &model, &learner, 0.4, 2, 1, seed, Mode::EmpiricalExact).unwrap();
        assert_eq!((r.noise, r.bias, r.variance, r.total), (0.5, 0.0, 0.125, 0.625));
        assert!(r.residual.abs() <= 1e-12);
        assert_eq!(r.bayes_prediction, vec![1.0]);
    }

    #[test]
    fn end_to_end_itakura_saito_two_point() {
        let is = builtin_generator("itakura_saito", 1).unwrap();
        let model = make_data_model("two_point", &params(&[("a", 1.0), ("b", 4.0)])).unwrap();
        let learner = make_learner("shrunk_mean", &Params::new()).unwrap();
        let seed = seed_producing(&model, &[1.0, 4.0]);
        let r = decompose_bias_variance(&is, &model, &learner, 0.4, 2, 1, seed, Mode::EmpiricalExact).unwrap();
        assert!((r.central_prediction[0] - 1.6).abs() <= 1e-15);
        assert!((r.variance - 0.223_143_551_314_209_76).abs() <= 1e-14);
    }

    #[test]
    fn full_shrinkage_to_bayes_leaves_only_noise() {
        let be = builtin_generator("bit_entropy", 1).unwrap();
        let model = make_data_model("logistic_bernoulli", &params(&[("slope", 2.0), ("intercept", -0.5)])).unwrap();
        let x = 0.6;
        let anchor = model.conditional_mean(x)[0];
        let learner = make_learner("shrunk_mean", &params(&[("lambda", 1.0), ("anchor", anchor)])).unwrap();
        for mode in [Mode::EmpiricalExact, Mode::MonteCarlo] {
            let r = decompose_bias_variance(&be, &model, &learner, x, 8, 5, 1, mode).unwrap();
            assert_eq!(r.bias, 0.0);
            assert_eq!(r.variance, 0.0);
            if mode == Mode::EmpiricalExact {
                assert!((r.total - r.noise).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn exact_mode_requires_finite_support() {
        let sq = builtin_generator("squared", 1).unwrap();
        let model = make_data_model("gaussian_sine", &Params::new()).unwrap();
        let learner = make_learner("knn_mean", &Params::new()).unwrap();
        let err = decompose_bias_variance(&sq, &model, &learner, 0.2, 4, 4, 0, Mode::EmpiricalExact).unwrap_err();
        assert_eq!(err.code(), "E_MODE_UNSUPPORTED");
        assert!(decompose_bias_variance(&sq, &model, &learner, 0.2, 4, 4, 0, Mode::MonteCarlo).is_ok());
    }

    #[test]
    fn prediction_outside_domain_reports_dataset() {
        // clamping leaves simplex points alone, so a constant 0.5 prediction
        // stays outside the 1-simplex {1}
        use crate::generator::{ConvexGenerator, Domain, DomainKind};
        let domain = Domain::new(DomainKind::OpenSimplex, 1).unwrap();
        let gen = ConvexGenerator::new("flat", domain, |x| x[0] * x[0], |x| vec![2.0 * x[0]], |g| Some(vec![g[0] / 2.0]));
        let populate = simulate_predictions(
            &gen,
            &make_data_model("two_point", &Params::new()).unwrap(),
            &make_learner("shrunk_mean", &params(&[("lambda", 1.0), ("anchor", 0.5)])).unwrap(),
            0.0,
            3,
            2,
            9,
        );
        match populate.unwrap_err() {
            Error::AtIndex { index, source } => {
                assert_eq!(index, 0);
                assert_eq!(source.code(), "E_DOMAIN_VIOLATION");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sweep_endpoints_for_shrinkage() {
        let sq = builtin_generator("squared", 1).unwrap();
        let model = make_data_model("two_point", &params(&[("a", 0.0), ("b", 2.0)])).unwrap();
        let learner = make_learner("shrunk_mean", &params(&[("anchor", 1.0)])).unwrap();
        let key = SweepKey::Learner("lambda".into());
        let out = sweep(&sq, &model, &learner, 0.5, &key, &[0.0, 1.0], 32, 4, 5, Mode::EmpiricalExact).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].bias, 0.0);
        assert_eq!(out[1].variance, 0.0);
        assert!(out[0].variance >= out[1].variance);
        assert_eq!(out[0].seed, 5);
        assert_eq!(out[1].seed, 6);
    }

    #[test]
    fn sweep_over_sample_size_shrinks_variance() {
        let sq = builtin_generator("squared", 1).unwrap();
        let model = make_data_model("two_point", &params(&[("a", 0.0), ("b", 2.0)])).unwrap();
        let learner = make_learner("shrunk_mean", &Params::new()).unwrap();
        let out = sweep(&sq, &model, &learner, 0.5, &SweepKey::NTrain, &[4.0, 16.0, 64.0], 200, 1, 17, Mode::EmpiricalExact)
            .unwrap();
        // variance of a sample mean of ±1 outcomes is 1/n, halved by the loss
        assert!(out[2].variance < out[0].variance);
        for (r, n) in out.iter().zip([4.0, 16.0, 64.0]) {
            assert!((r.variance - 0.5 / n).abs() < 0.5 / n * 0.5, "n={n} var={}", r.variance);
        }
    }

    #[test]
    fn single_point_sweep_matches_direct_call() {
        let be = builtin_generator("bit_entropy", 1).unwrap();
        let model = make_data_model("logistic_bernoulli", &params(&[("slope", 1.0)])).unwrap();
        let learner = make_learner("laplace_rate", &Params::new()).unwrap();
        let key = SweepKey::Learner("alpha".into());
        let s = sweep(&be, &model, &learner, 0.3, &key, &[1.0], 16, 8, 99, Mode::EmpiricalExact).unwrap();
        let d = decompose_bias_variance(&be, &model, &learner, 0.3, 16, 8, 99, Mode::EmpiricalExact).unwrap();
        assert_eq!(s, vec![d]);
    }

    #[test]
    fn sweep_errors() {
        let sq = builtin_generator("squared", 1).unwrap();
        let model = make_data_model("two_point", &Params::new()).unwrap();
        let learner = make_learner("shrunk_mean", &Params::new()).unwrap();
        assert!(sweep(&sq, &model, &learner, 0.5, &SweepKey::NTrain, &[], 4, 4, 0, Mode::EmpiricalExact).is_err());
        assert!(sweep(&sq, &model, &learner, 0.5, &SweepKey::NTrain, &[2.5], 4, 4, 0, Mode::EmpiricalExact).is_err());
        let k = SweepKey::Learner("k".into());
        assert_eq!(
            sweep(&sq, &model, &learner, 0.5, &k, &[1.0], 4, 4, 0, Mode::EmpiricalExact).unwrap_err().code(),
            "E_INVALID_HYPERPARAMETER"
        );
        assert_eq!("learner.params.alpha".parse::<SweepKey>().unwrap(), SweepKey::Learner("alpha".into()));
    }
}
