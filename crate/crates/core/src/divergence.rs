//! Bregman divergence `D_F(x‖y) = F(x) − F(y) − ⟨∇F(y), x − y⟩`.
//!
//! Always evaluated in this definitional form from the generator's `F` and
//! `∇F`; the closed forms it reduces to (squared distance, generalized KL,
//! Itakura-Saito) are only used as test oracles.
//!
//! Rounding can push a true zero slightly negative. Values in
//! `[−CLAMP_TOLERANCE, 0)` are clamped to zero and flagged in
//! [`DivergenceValue::clamped`].

use crate::error::{Error, Result};
use crate::generator::ConvexGenerator;
use crate::numeric::CompensatedSum;

/// Negative values down to this magnitude are treated as rounding noise.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceValue {
    pub value: f64,
    pub clamped: bool,
}

impl DivergenceValue {
    fn from_raw(raw: f64) -> Self {
        if (-CLAMP_TOLERANCE..0.0).contains(&raw) {
            Self {
                value: 0.0,
                clamped: true,
            }
        } else {
            Self {
                value: raw,
                clamped: false,
            }
        }
    }
}

/// Definitional evaluation given `F(x)`; `x` may be a boundary point.
fn evaluate(gen: &ConvexGenerator, fx: f64, x: &[f64], y: &[f64]) -> DivergenceValue {
    let grad_y = gen.grad(y);
    let mut acc = CompensatedSum::new();
    acc.add(fx);
    acc.add(-gen.f(y));
    for ((g, xi), yi) in grad_y.iter().zip(x).zip(y) {
        acc.add(-g * (xi - yi));
    }
    DivergenceValue::from_raw(acc.value())
}

/// `D_F(x‖y)` with the clamp flag.
pub fn divergence_value(gen: &ConvexGenerator, x: &[f64], y: &[f64]) -> Result<DivergenceValue> {
    let domain = gen.domain();
    domain.require(x, "x")?;
    domain.require(y, "y")?;
    Ok(evaluate(gen, gen.f(x), x, y))
}

/// `D_F(x‖y)`.
pub fn divergence(gen: &ConvexGenerator, x: &[f64], y: &[f64]) -> Result<f64> {
    divergence_value(gen, x, y).map(|d| d.value)
}

/// `D_F(x‖y)` with `x` allowed on the closure of the domain.
///
/// Uses the generator's continuous extension of `F` at boundary points
/// (`0 ln 0 = 0`). The second argument must be interior since `∇F(y)` is
/// needed. Fails with `DomainViolation` when `F` has no finite limit at `x`.
pub fn divergence_from_closure(gen: &ConvexGenerator, x: &[f64], y: &[f64]) -> Result<f64> {
    let domain = gen.domain();
    domain.require(y, "y")?;
    let fx = gen.closure_value(x)?.ok_or_else(|| Error::DomainViolation {
        what: format!("x {:?} (no finite generator value on the closure)", x),
        domain: domain.to_string(),
    })?;
    Ok(evaluate(gen, fx, x, y).value)
}

/// `D_F(xs[i]‖y)` for every `i`, in order. The first failing element is
/// reported through [`Error::AtIndex`].
pub fn divergence_batch(
    gen: &ConvexGenerator,
    xs: &[Vec<f64>],
    y: &[f64],
) -> Result<Vec<DivergenceValue>> {
    gen.domain().require(y, "y")?;
    xs.iter()
        .enumerate()
        .map(|(i, x)| divergence_value(gen, x, y).map_err(|e| Error::at(i, e)))
        .collect()
}

/// Number of clamped entries in a batch.
pub fn clamp_count(values: &[DivergenceValue]) -> usize {
    values.iter().filter(|d| d.clamped).count()
}
