//! Convex generators and their domains.
//!
//! A [`ConvexGenerator`] bundles a strictly convex differentiable function
//! `F` with its gradient `∇F`, the inverse gradient (dual map) `(∇F)⁻¹`, an
//! optional diagonal Hessian, and the open convex domain it lives on.
//!
//! Four coordinate-separable generators ship with the crate:
//!
//! | name | F(x) | domain | ∇F | left minimizer |
//! |------|------|--------|----|----------------|
//! | `squared` | ½Σxᵢ² | ℝⁿ | x | arithmetic mean |
//! | `negentropy` | Σ(xᵢ ln xᵢ − xᵢ) | (0,∞)ⁿ | ln x | geometric mean |
//! | `itakura_saito` | −Σ ln xᵢ | (0,∞)ⁿ | −1/x | harmonic mean |
//! | `bit_entropy` | Σ(xᵢ ln xᵢ + (1−xᵢ) ln(1−xᵢ)) | (0,1)ⁿ | logit x | logistic of mean logit |
//!
//! Domains are open. A generator may additionally define `F` on the closure
//! of its domain by continuous extension (`0 ln 0 = 0`), which is what lets a
//! boundary outcome such as a Bernoulli observation `y = 1` appear in the
//! first slot of a divergence.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, logistic, logit, xlogx};

/// A point in a generator's domain.
pub type Point = Vec<f64>;

/// Tolerance on the coordinate sum for open-simplex membership.
pub const SIMPLEX_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    AllReals,
    PositiveOrthant,
    OpenUnitInterval,
    OpenSimplex,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DomainKind::AllReals => "all_reals",
            DomainKind::PositiveOrthant => "positive_orthant",
            DomainKind::OpenUnitInterval => "open_unit_interval",
            DomainKind::OpenSimplex => "open_simplex",
        };
        f.write_str(s)
    }
}

/// An open convex subset of ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domain {
    kind: DomainKind,
    dimension: usize,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.dimension)
    }
}

impl Domain {
    pub fn new(kind: DomainKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(Self { kind, dimension })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn check_dimension(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Membership in the open domain. Non-finite coordinates are never members.
    pub fn contains(&self, p: &[f64]) -> Result<bool> {
        self.check_dimension(p)?;
        if p.iter().any(|v| !v.is_finite()) {
            return Ok(false);
        }
        Ok(match self.kind {
            DomainKind::AllReals => true,
            DomainKind::PositiveOrthant => p.iter().all(|&v| v > 0.0),
            DomainKind::OpenUnitInterval => p.iter().all(|&v| v > 0.0 && v < 1.0),
            DomainKind::OpenSimplex => {
                p.iter().all(|&v| v > 0.0)
                    && (compensated_sum(p.iter().copied()) - 1.0).abs() <= SIMPLEX_SUM_TOLERANCE
            }
        })
    }

    /// Membership in the closure of the domain.
    pub fn closure_contains(&self, p: &[f64]) -> Result<bool> {
        self.check_dimension(p)?;
        if p.iter().any(|v| !v.is_finite()) {
            return Ok(false);
        }
        Ok(match self.kind {
            DomainKind::AllReals => true,
            DomainKind::PositiveOrthant => p.iter().all(|&v| v >= 0.0),
            DomainKind::OpenUnitInterval => p.iter().all(|&v| (0.0..=1.0).contains(&v)),
            DomainKind::OpenSimplex => {
                p.iter().all(|&v| v >= 0.0)
                    && (compensated_sum(p.iter().copied()) - 1.0).abs() <= SIMPLEX_SUM_TOLERANCE
            }
        })
    }

    /// Errors with `DomainViolation` unless `p` is in the open domain.
    pub fn require(&self, p: &[f64], what: &str) -> Result<()> {
        if self.contains(p)? {
            Ok(())
        } else {
            Err(self.violation(p, what))
        }
    }

    pub(crate) fn violation(&self, p: &[f64], what: &str) -> Error {
        Error::DomainViolation {
            what: format!("{} {:?}", what, p),
            domain: self.to_string(),
        }
    }

    /// Moves `p` into the open domain, keeping `margin` away from the boundary.
    /// Returns the number of coordinates that were changed.
    ///
    /// Simplex points are left untouched.
    pub fn clamp_into(&self, p: &mut [f64], margin: f64) -> usize {
        let mut changed = 0;
        for v in p.iter_mut() {
            let clamped = match self.kind {
                DomainKind::AllReals | DomainKind::OpenSimplex => *v,
                DomainKind::PositiveOrthant => v.max(margin),
                DomainKind::OpenUnitInterval => v.clamp(margin, 1.0 - margin),
            };
            if clamped != *v {
                *v = clamped;
                changed += 1;
            }
        }
        changed
    }

    /// Draws a random point of the domain at unit-ish scale.
    ///
    /// all_reals: uniform on [−5, 5]; positive_orthant: log-uniform on
    /// [e⁻³, e³]; open_unit_interval: logistic of uniform on [−5, 5];
    /// open_simplex: normalized log-uniform weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let n = self.dimension;
        match self.kind {
            DomainKind::AllReals => (0..n).map(|_| rng.random_range(-5.0..5.0)).collect(),
            DomainKind::PositiveOrthant => {
                (0..n).map(|_| rng.random_range(-3.0f64..3.0).exp()).collect()
            }
            DomainKind::OpenUnitInterval => {
                (0..n).map(|_| logistic(rng.random_range(-5.0..5.0))).collect()
            }
            DomainKind::OpenSimplex => {
                let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0f64..2.0).exp()).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / total).collect()
            }
        }
    }
}

/// `check_membership` in function form.
pub fn check_membership(domain: &Domain, p: &[f64]) -> Result<bool> {
    domain.contains(p)
}

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type DualFn = Arc<dyn Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync>;

/// A strictly convex differentiable function on an open convex domain.
///
/// Immutable once built; cloning shares the underlying closures.
#[derive(Clone)]
pub struct ConvexGenerator {
    name: String,
    domain: Domain,
    f: ScalarFn,
    grad: VectorFn,
    dual_map: DualFn,
    hessian_diag: Option<VectorFn>,
    closure_f: Option<ScalarFn>,
}

impl fmt::Debug for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexGenerator")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("hessian_diag", &self.hessian_diag.is_some())
            .field("closure_f", &self.closure_f.is_some())
            .finish()
    }
}

impl ConvexGenerator {
    /// Builds a generator from closures.
    ///
    /// `dual_map` returns `None` for gradient vectors outside the range of `grad`.
    pub fn new<F, G, D>(name: impl Into<String>, domain: Domain, f: F, grad: G, dual_map: D) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        D: Fn(&[f64]) -> Option<Vec<f64>> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            domain,
            f: Arc::new(f),
            grad: Arc::new(grad),
            dual_map: Arc::new(dual_map),
            hessian_diag: None,
            closure_f: None,
        }
    }

    pub fn with_hessian_diag<H>(mut self, h: H) -> Self
    where
        H: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.hessian_diag = Some(Arc::new(h));
        self
    }

    /// Continuous extension of `F` to the closure of the domain. Must agree
    /// with `f` on the open domain and may return a non-finite value where
    /// the limit diverges.
    pub fn with_closure_value<C>(mut self, c: C) -> Self
    where
        C: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.closure_f = Some(Arc::new(c));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension
    }

    /// `F(x)`. No membership check.
    pub fn f(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    /// `∇F(x)`. No membership check.
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }

    /// `(∇F)⁻¹(v)`, or `None` when `v` is not a gradient of any domain point.
    pub fn dual_map(&self, v: &[f64]) -> Option<Point> {
        (self.dual_map)(v)
    }

    pub fn hessian_diag(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.hessian_diag.as_ref().map(|h| h(x))
    }

    pub fn has_closure_value(&self) -> bool {
        self.closure_f.is_some()
    }

    /// `F` on the closure of the domain: `Some(F(x))` when `x` is in the open
    /// domain or on its boundary with a finite limit, `None` otherwise.
    pub fn closure_value(&self, x: &[f64]) -> Result<Option<f64>> {
        if self.domain.contains(x)? {
            return Ok(Some(self.f(x)));
        }
        if !self.domain.closure_contains(x)? {
            return Ok(None);
        }
        Ok(self
            .closure_f
            .as_ref()
            .map(|c| c(x))
            .filter(|v| v.is_finite()))
    }
}

/// Names of the shipped generators, in catalog order.
pub const BUILTIN_GENERATORS: [&str; 4] = ["squared", "negentropy", "itakura_saito", "bit_entropy"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinGenerator {
    Squared,
    Negentropy,
    ItakuraSaito,
    BitEntropy,
}

impl BuiltinGenerator {
    pub const ALL: [BuiltinGenerator; 4] = [
        BuiltinGenerator::Squared,
        BuiltinGenerator::Negentropy,
        BuiltinGenerator::ItakuraSaito,
        BuiltinGenerator::BitEntropy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinGenerator::Squared => "squared",
            BuiltinGenerator::Negentropy => "negentropy",
            BuiltinGenerator::ItakuraSaito => "itakura_saito",
            BuiltinGenerator::BitEntropy => "bit_entropy",
        }
    }

    pub fn build(self, dimension: usize) -> Result<ConvexGenerator> {
        match self {
            BuiltinGenerator::Squared => separable(
                self.as_str(),
                DomainKind::AllReals,
                dimension,
                Coordinate {
                    f: |x| 0.5 * x * x,
                    grad: |x| x,
                    inverse: Some,
                    hessian: |_| 1.0,
                    boundary: None,
                },
            ),
            BuiltinGenerator::Negentropy => separable(
                self.as_str(),
                DomainKind::PositiveOrthant,
                dimension,
                Coordinate {
                    f: |x| x * x.ln() - x,
                    grad: f64::ln,
                    inverse: |g| Some(g.exp()),
                    hessian: |x| 1.0 / x,
                    boundary: Some(|x| xlogx(x) - x),
                },
            ),
            BuiltinGenerator::ItakuraSaito => separable(
                self.as_str(),
                DomainKind::PositiveOrthant,
                dimension,
                Coordinate {
                    f: |x| -x.ln(),
                    grad: |x| -1.0 / x,
                    inverse: |g| (g < 0.0).then(|| -1.0 / g),
                    hessian: |x| 1.0 / (x * x),
                    boundary: None,
                },
            ),
            BuiltinGenerator::BitEntropy => separable(
                self.as_str(),
                DomainKind::OpenUnitInterval,
                dimension,
                Coordinate {
                    f: |x| x * x.ln() + (1.0 - x) * (-x).ln_1p(),
                    grad: logit,
                    inverse: |g| Some(logistic(g)),
                    hessian: |x| 1.0 / (x * (1.0 - x)),
                    boundary: Some(|x| xlogx(x) + xlogx(1.0 - x)),
                },
            ),
        }
    }
}

impl FromStr for BuiltinGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinGenerator::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    }
}

/// Instantiates a shipped generator by name.
pub fn builtin_generator(name: &str, dimension: usize) -> Result<ConvexGenerator> {
    name.parse::<BuiltinGenerator>()?.build(dimension)
}

/// Per-coordinate pieces of a separable generator `F(x) = Σ φ(xᵢ)`.
struct Coordinate {
    f: fn(f64) -> f64,
    grad: fn(f64) -> f64,
    inverse: fn(f64) -> Option<f64>,
    hessian: fn(f64) -> f64,
    boundary: Option<fn(f64) -> f64>,
}

fn separable(
    name: &str,
    kind: DomainKind,
    dimension: usize,
    c: Coordinate,
) -> Result<ConvexGenerator> {
    let domain = Domain::new(kind, dimension)?;
    let Coordinate {
        f,
        grad,
        inverse,
        hessian,
        boundary,
    } = c;
    let generator = ConvexGenerator::new(
        name,
        domain,
        move |x| compensated_sum(x.iter().map(|&v| f(v))),
        move |x| x.iter().map(|&v| grad(v)).collect(),
        move |g| {
            let p: Option<Vec<f64>> = g.iter().map(|&v| inverse(v)).collect();
            p.filter(|p| domain.contains(p).unwrap_or(false))
        },
    )
    .with_hessian_diag(move |x| x.iter().map(|&v| hessian(v)).collect());
    Ok(match boundary {
        Some(b) => generator.with_closure_value(move |x| compensated_sum(x.iter().map(|&v| b(v)))),
        None => generator,
    })
}
