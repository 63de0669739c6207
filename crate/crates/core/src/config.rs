//! Line-based `key = value` experiment configs.
//!
//! ```text
//! # squared loss, two-point outcomes
//! generator = squared
//! model = two_point
//! model.params.a = 0
//! model.params.b = 2
//! learner = shrunk_mean
//! learner.params.lambda = 0.25
//! learner.params.anchor = 1
//! x = 0.5
//! n_datasets = 200
//! n_train = 8
//! seed = 42
//! mode = empirical_exact
//! sweep.key = n_train          # optional
//! sweep.values = 4,16,64
//! ```
//!
//! `#` starts a comment. Unknown and duplicate keys are errors carrying the
//! offending line number; missing required keys are reported together.
//! Identifiers and parameters are resolved against their catalogs while
//! parsing, so a config that parses can be run without further lookups.

use std::collections::HashMap;

use crate::bias_variance::{
    decompose_bias_variance, make_data_model, make_learner, sweep, BiasVarianceReport, DataModel, LearnerSpec,
    Mode, Params, SweepKey,
};
use crate::error::{Error, Result};
use crate::generator::{BuiltinGenerator, ConvexGenerator};

const REQUIRED: [&str; 8] = ["generator", "model", "learner", "x", "n_datasets", "n_train", "seed", "mode"];

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: SweepKey,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub generator: BuiltinGenerator,
    pub model: DataModel,
    pub learner: LearnerSpec,
    pub x: f64,
    pub n_datasets: usize,
    pub n_train: usize,
    pub seed: u64,
    pub mode: Mode,
    pub sweep: Option<Sweep>,
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_count(line: usize, key: &str, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(config_err(line, format!("`{}` must be a positive integer, got `{}`", key, value))),
    }
}

fn parse_real(line: usize, key: &str, value: &str) -> Result<f64> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(config_err(line, format!("`{}` must be a finite number, got `{}`", key, value))),
    }
}

/// Parses and resolves a config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut values: HashMap<&'static str, (usize, String)> = HashMap::new();
    let mut model_params = Params::new();
    let mut learner_params = Params::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected `key = value`, got `{}`", content)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(config_err(line, "empty key"));
        }
        if let Some(first) = seen.insert(key.to_string(), line) {
            return Err(config_err(line, format!("duplicate key `{}` (first set on line {})", key, first)));
        }
        if let Some(name) = key.strip_prefix("model.params.") {
            model_params.insert(name.to_string(), parse_real(line, key, value)?);
        } else if let Some(name) = key.strip_prefix("learner.params.") {
            learner_params.insert(name.to_string(), parse_real(line, key, value)?);
        } else {
            let known = REQUIRED
                .iter()
                .chain(["sweep.key", "sweep.values"].iter())
                .find(|k| **k == key)
                .ok_or_else(|| config_err(line, format!("unknown key `{}`", key)))?;
            values.insert(known, (line, value.to_string()));
        }
    }

    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| !values.contains_key(k)).collect();
    if !missing.is_empty() {
        return Err(Error::MissingConfigKeys(format!(
            "missing required config keys: {}",
            missing.join(", ")
        )));
    }
    let get = |k: &str| -> (usize, &str) {
        let (line, v) = &values[k];
        (*line, v.as_str())
    };

    let (line, v) = get("generator");
    let generator: BuiltinGenerator = v.parse().map_err(|e: Error| config_err(line, e.to_string()))?;

    let (line, v) = get("model");
    let model = make_data_model(v, &model_params).map_err(|e| config_err(line, e.to_string()))?;

    let (line, v) = get("learner");
    let learner = make_learner(v, &learner_params).map_err(|e| config_err(line, e.to_string()))?;

    let (line, v) = get("x");
    let x = parse_real(line, "x", v)?;
    let (line, v) = get("n_datasets");
    let n_datasets = parse_count(line, "n_datasets", v)?;
    let (line, v) = get("n_train");
    let n_train = parse_count(line, "n_train", v)?;
    let (line, v) = get("seed");
    let seed = v
        .parse::<u64>()
        .map_err(|_| config_err(line, format!("`seed` must be an unsigned 64-bit integer, got `{}`", v)))?;
    let (line, v) = get("mode");
    let mode: Mode = v.parse().map_err(|e: Error| config_err(line, e.to_string()))?;

    let sweep = match (values.get("sweep.key"), values.get("sweep.values")) {
        (None, None) => None,
        (Some((line, _)), None) => return Err(config_err(*line, "`sweep.key` given without `sweep.values`")),
        (None, Some((line, _))) => return Err(config_err(*line, "`sweep.values` given without `sweep.key`")),
        (Some((kline, k)), Some((vline, v))) => {
            let key: SweepKey = k.parse().map_err(|e: Error| config_err(*kline, e.to_string()))?;
            if let SweepKey::Learner(name) = &key {
                if !learner.hyperparameters().contains_key(name) {
                    return Err(config_err(
                        *kline,
                        format!("learner {} has no hyperparameter `{}`", learner.name(), name),
                    ));
                }
            }
            let grid = v
                .split(',')
                .map(|s| parse_real(*vline, "sweep.values", s.trim()))
                .collect::<Result<Vec<f64>>>()?;
            Some(Sweep { key, values: grid })
        }
    };

    Ok(ExperimentConfig {
        generator,
        model,
        learner,
        x,
        n_datasets,
        n_train,
        seed,
        mode,
        sweep,
    })
}

impl ExperimentConfig {
    /// Bias-variance outputs are scalar, so the generator is one-dimensional.
    pub fn build_generator(&self) -> Result<ConvexGenerator> {
        self.generator.build(1)
    }

    /// Runs the experiment: one report per sweep value, or a single report
    /// (with no grid value) when there is no sweep.
    pub fn run(&self) -> Result<Vec<(Option<f64>, BiasVarianceReport)>> {
        let gen = self.build_generator()?;
        match &self.sweep {
            None => {
                let r = decompose_bias_variance(
                    &gen,
                    &self.model,
                    &self.learner,
                    self.x,
                    self.n_datasets,
                    self.n_train,
                    self.seed,
                    self.mode,
                )?;
                Ok(vec![(None, r)])
            }
            Some(s) => {
                let reports = sweep(
                    &gen,
                    &self.model,
                    &self.learner,
                    self.x,
                    &s.key,
                    &s.values,
                    self.n_datasets,
                    self.n_train,
                    self.seed,
                    self.mode,
                )?;
                Ok(s.values.iter().map(|v| Some(*v)).zip(reports).collect())
            }
        }
    }
}
