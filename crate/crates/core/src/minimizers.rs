//! Minimizers of expected Bregman divergence over finite weighted samples.
//!
//! With the random point in the first slot, `z ↦ E[D_F(X‖z)]` is minimized by
//! the arithmetic mean for every generator (the right minimizer). With the
//! random point in the second slot, `z ↦ E[D_F(z‖X)]` is minimized by the
//! unique `x*` with `∇F(x*) = E[∇F(X)]` (the left minimizer), obtained here by
//! pushing the gradient mean through the generator's dual map.

use std::fmt;
use std::str::FromStr;

use crate::divergence::divergence;
use crate::error::{Error, Result};
use crate::generator::{ConvexGenerator, Point};
use crate::numeric::CompensatedSum;

/// Tolerance on the weight sum.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// A finite weighted point set standing in for a random variable.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    support: Vec<Point>,
    weights: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(support: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        Self::validate_support(&support)?;
        if weights.len() != support.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} support points",
                weights.len(),
                support.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {} at index {} is negative or not finite",
                weights[i], i
            )));
        }
        let total = sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {}, not 1", total)));
        }
        Ok(Self { support, weights })
    }

    /// Equal weights `1/n`.
    pub fn uniform(support: Vec<Point>) -> Result<Self> {
        Self::validate_support(&support)?;
        let w = 1.0 / support.len() as f64;
        let weights = vec![w; support.len()];
        Ok(Self { support, weights })
    }

    /// Divides raw non-negative weights by their sum. Also returns the raw sum
    /// so callers can warn when it was far from 1.
    pub fn from_raw_weights(support: Vec<Point>, raw: Vec<f64>) -> Result<(Self, f64)> {
        if let Some(i) = raw.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {} at index {} is negative or not finite",
                raw[i], i
            )));
        }
        let total = sum(raw.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        let weights = raw.iter().map(|w| w / total).collect();
        Ok((Self::new(support, weights)?, total))
    }

    fn validate_support(support: &[Point]) -> Result<()> {
        let first = support.first().ok_or(Error::EmptyDistribution)?;
        if first.is_empty() {
            return Err(Error::InvalidDimension);
        }
        for (i, p) in support.iter().enumerate() {
            if p.len() != first.len() {
                return Err(Error::at(
                    i,
                    Error::DimensionMismatch {
                        expected: first.len(),
                        found: p.len(),
                    },
                ));
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.support[0].len()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.support.iter().zip(self.weights.iter().copied())
    }

    /// Weighted mean of `map(xᵢ)`, coordinate-wise, summed in index order.
    pub(crate) fn weighted_mean_of<F>(&self, map: F) -> Vec<f64>
    where
        F: Fn(&Point) -> Vec<f64>,
    {
        let mut acc = vec![CompensatedSum::new(); self.dimension()];
        for (x, w) in self.iter() {
            for (a, v) in acc.iter_mut().zip(map(x)) {
                a.add(w * v);
            }
        }
        acc.iter().map(CompensatedSum::value).collect()
    }

    fn check_against(&self, gen: &ConvexGenerator) -> Result<()> {
        for (i, x) in self.support.iter().enumerate() {
            gen.domain()
                .require(x, "support point")
                .map_err(|e| Error::at(i, e))?;
        }
        Ok(())
    }
}

fn sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    crate::numeric::compensated_sum(it)
}

/// Which argument slot of the divergence holds the random point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `E[D_F(X‖z)]`
    FirstArgRandom,
    /// `E[D_F(z‖X)]`
    SecondArgRandom,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::FirstArgRandom => "first",
            Side::SecondArgRandom => "second",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" | "first_arg_random" => Ok(Side::FirstArgRandom),
            "second" | "second_arg_random" => Ok(Side::SecondArgRandom),
            _ => Err(Error::InvalidParameter(format!(
                "side `{}` (expected first or second)",
                s
            ))),
        }
    }
}

/// Minimizer of `z ↦ E[D_F(X‖z)]`: the weighted arithmetic mean.
pub fn right_minimizer(dist: &EmpiricalDistribution) -> Result<Point> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(dist.weighted_mean_of(|x| x.clone()))
}

/// Minimizer of `z ↦ E[D_F(z‖X)]`: `(∇F)⁻¹(E[∇F(X)])`.
pub fn left_minimizer(gen: &ConvexGenerator, dist: &EmpiricalDistribution) -> Result<Point> {
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    dist.check_against(gen)?;
    let gradient_mean = dist.weighted_mean_of(|x| gen.grad(x));
    match gen.dual_map(&gradient_mean) {
        Some(p) if gen.domain().contains(&p)? => Ok(p),
        _ => Err(Error::DualMapOutOfRange {
            generator: gen.name().to_string(),
            gradient: gradient_mean,
        }),
    }
}

/// `E[D_F(X‖z)]` or `E[D_F(z‖X)]`, summed in support order.
pub fn expected_divergence(
    gen: &ConvexGenerator,
    side: Side,
    dist: &EmpiricalDistribution,
    z: &[f64],
) -> Result<f64> {
    gen.domain().require(z, "z")?;
    let mut acc = CompensatedSum::new();
    for (i, (x, w)) in dist.iter().enumerate() {
        let d = match side {
            Side::FirstArgRandom => divergence(gen, x, z),
            Side::SecondArgRandom => divergence(gen, z, x),
        }
        .map_err(|e| Error::at(i, e))?;
        acc.add(w * d);
    }
    Ok(acc.value())
}
