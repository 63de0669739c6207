//! Exact three-term decomposition of expected Bregman divergence.
//!
//! For a fixed point `s` and a random point `X`:
//!
//! ```text
//! E[D_F(s‖X)] = D_F(s‖x*) + E[D_F(x*‖X)]      x* = left minimizer
//! E[D_F(X‖s)] = D_F(x*‖s) + E[D_F(X‖x*)]      x* = E[X]
//! ```
//!
//! `total` is always summed directly from the sample, never assembled from
//! the parts, so `residual = total − proximity − spread` measures how well
//! the identity holds in floating point.

use crate::divergence::divergence;
use crate::error::Result;
use crate::generator::{ConvexGenerator, Point};
use crate::minimizers::{expected_divergence, left_minimizer, right_minimizer, EmpiricalDistribution, Side};

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Expected divergence between `s` and `X`, summed directly.
    pub total: f64,
    /// Divergence between `s` and the minimizer.
    pub proximity: f64,
    /// Expected divergence between the minimizer and `X`.
    pub spread: f64,
    /// `total − proximity − spread`.
    pub residual: f64,
    pub minimizer: Point,
}

impl DecompositionReport {
    fn assemble(total: f64, proximity: f64, spread: f64, minimizer: Point) -> Self {
        Self {
            total,
            proximity,
            spread,
            residual: total - proximity - spread,
            minimizer,
        }
    }
}

/// Decomposes `E[D_F(s‖X)]` around the left minimizer.
pub fn decompose_second_arg_random(
    gen: &ConvexGenerator,
    dist: &EmpiricalDistribution,
    s: &[f64],
) -> Result<DecompositionReport> {
    gen.domain().require(s, "s")?;
    let minimizer = left_minimizer(gen, dist)?;
    let total = expected_divergence(gen, Side::SecondArgRandom, dist, s)?;
    let proximity = divergence(gen, s, &minimizer)?;
    let spread = expected_divergence(gen, Side::SecondArgRandom, dist, &minimizer)?;
    Ok(DecompositionReport::assemble(total, proximity, spread, minimizer))
}

/// Decomposes `E[D_F(X‖s)]` around the arithmetic mean.
pub fn decompose_first_arg_random(
    gen: &ConvexGenerator,
    dist: &EmpiricalDistribution,
    s: &[f64],
) -> Result<DecompositionReport> {
    gen.domain().require(s, "s")?;
    let minimizer = right_minimizer(dist)?;
    // convex domain and member support: the mean is a member
    gen.domain().require(&minimizer, "mean of the support")?;
    let total = expected_divergence(gen, Side::FirstArgRandom, dist, s)?;
    let proximity = divergence(gen, &minimizer, s)?;
    let spread = expected_divergence(gen, Side::FirstArgRandom, dist, &minimizer)?;
    Ok(DecompositionReport::assemble(total, proximity, spread, minimizer))
}

/// Dispatches on the random slot.
pub fn decompose(
    gen: &ConvexGenerator,
    side: Side,
    dist: &EmpiricalDistribution,
    s: &[f64],
) -> Result<DecompositionReport> {
    match side {
        Side::FirstArgRandom => decompose_first_arg_random(gen, dist, s),
        Side::SecondArgRandom => decompose_second_arg_random(gen, dist, s),
    }
}
