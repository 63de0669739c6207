//! Exponential families and their Bregman-divergence form.
//!
//! A family `p(x; η) = h(x) exp(⟨η, T(x)⟩ − A(η))` has a convex log-partition
//! `A`, mean map `μ = ∇A(η) = E_η[T(x)]`, and Legendre conjugate
//! `A*(μ) = sup_η ⟨μ, η⟩ − A(η)` whose gradient inverts the mean map.
//!
//! The log-likelihood then splits as
//!
//! ```text
//! log p(x; η) = −D_{A*}(T(x)‖μ) + A*(T(x)) + log h(x)
//! ```
//!
//! The `log h(x)` term vanishes only when the base measure is constant
//! (bernoulli). `A*` here is always the Legendre conjugate; for families with
//! a non-constant base measure it differs from the negative entropy
//! `E_η[log p(x; η)]` by `E_η[log h(x)]`.
//!
//! At the boundary of the mean domain (`T(x) ∈ {0, 1}` for bernoulli,
//! `T(x) = 0` for poisson) `A*` is evaluated by continuity with `0 ln 0 = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::bias_variance::Params;
use crate::divergence::divergence_from_closure;
use crate::error::{Error, Result};
use crate::generator::{ConvexGenerator, Domain, DomainKind};
use crate::numeric::{adaptive_simpson, compensated_sum, logistic, logit, softplus, xlogx, CompensatedSum};

/// Poisson truncation: the neglected tail of `E[T]` must be below this.
pub const TAIL_BOUND: f64 = 1e-12;

/// Gaussian quadrature runs over `μ ± QUADRATURE_HALF_WIDTH·σ`.
pub const QUADRATURE_HALF_WIDTH: f64 = 10.0;

/// Absolute tolerance of each (rescaled) quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;

const MAX_POISSON_TERMS: u64 = 50_000_000;

pub const FAMILIES: [&str; 3] = ["bernoulli", "poisson", "gaussian_fixed_var"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `T(x) = x`, `h ≡ 1`, `A(η) = ln(1 + e^η)`.
    Bernoulli,
    /// `T(x) = x`, `log h(x) = −ln x!`, `A(η) = e^η`.
    Poisson,
    /// `T(x) = x`, `log h(x) = −x²/(2σ²) − ½ ln(2πσ²)`, `A(η) = η²σ²/2`.
    GaussianFixedVar { sigma2: f64 },
}

/// How `E_η[T(x)]` is computed by brute force.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// Exhaustive sum.
    Finite(Vec<f64>),
    /// Non-negative integers, truncated once the tail bound drops below
    /// [`TAIL_BOUND`].
    Countable,
    /// Real line, integrated over `μ ± half_width·σ`.
    Continuous { half_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFamilySpec {
    family: Family,
}

impl fmt::Display for ExponentialFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::GaussianFixedVar { sigma2 } => write!(f, "gaussian_fixed_var(sigma2={})", sigma2),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for ExponentialFamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        builtin_family(s, &Params::new())
    }
}

/// Instantiates a shipped family. `gaussian_fixed_var` takes `sigma2`
/// (default 1); the other families take no parameters.
pub fn builtin_family(name: &str, fixed: &Params) -> Result<ExponentialFamilySpec> {
    let allowed: &[&str] = match name {
        "gaussian_fixed_var" => &["sigma2"],
        "bernoulli" | "poisson" => &[],
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    if let Some(k) = fixed.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("{} has no parameter `{}`", name, k)));
    }
    let family = match name {
        "bernoulli" => Family::Bernoulli,
        "poisson" => Family::Poisson,
        _ => {
            let sigma2 = fixed.get("sigma2").copied().unwrap_or(1.0);
            if !(sigma2 > 0.0 && sigma2.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "gaussian_fixed_var sigma2 must be positive, got {}",
                    sigma2
                )));
            }
            Family::GaussianFixedVar { sigma2 }
        }
    };
    Ok(ExponentialFamilySpec { family })
}

fn scalar(v: &[f64], what: &str) -> Result<f64> {
    match v {
        [s] if s.is_finite() => Ok(*s),
        [s] => Err(Error::DomainViolation {
            what: format!("{} {}", what, s),
            domain: "finite reals".into(),
        }),
        _ => Err(Error::DimensionMismatch {
            expected: 1,
            found: v.len(),
        }),
    }
}

/// `ln x!`: exact summation below 20, Stirling series above.
fn ln_factorial(x: u64) -> f64 {
    if x < 20 {
        return compensated_sum((2..=x).map(|k| (k as f64).ln()));
    }
    let n = x as f64;
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    n * n.ln() - n + 0.5 * (2.0 * PI * n).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

impl ExponentialFamilySpec {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Bernoulli => "bernoulli",
            Family::Poisson => "poisson",
            Family::GaussianFixedVar { .. } => "gaussian_fixed_var",
        }
    }

    pub fn natural_domain(&self) -> Domain {
        Domain::new(DomainKind::AllReals, 1).expect("dimension 1")
    }

    pub fn mean_domain(&self) -> Domain {
        let kind = match self.family {
            Family::Bernoulli => DomainKind::OpenUnitInterval,
            Family::Poisson => DomainKind::PositiveOrthant,
            Family::GaussianFixedVar { .. } => DomainKind::AllReals,
        };
        Domain::new(kind, 1).expect("dimension 1")
    }

    pub fn support(&self) -> Support {
        match self.family {
            Family::Bernoulli => Support::Finite(vec![0.0, 1.0]),
            Family::Poisson => Support::Countable,
            Family::GaussianFixedVar { .. } => Support::Continuous {
                half_width: QUADRATURE_HALF_WIDTH,
            },
        }
    }

    /// Errors unless `x` is a possible observation.
    pub fn check_observation(&self, x: f64) -> Result<()> {
        let ok = match self.family {
            Family::Bernoulli => x == 0.0 || x == 1.0,
            Family::Poisson => x >= 0.0 && x.fract() == 0.0 && x <= 2f64.powi(53),
            Family::GaussianFixedVar { .. } => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                what: format!("observation {}", x),
                domain: format!("support of {}", self.name()),
            })
        }
    }

    /// `T(x)`.
    pub fn sufficient_statistic(&self, x: f64) -> Vec<f64> {
        vec![x]
    }

    /// `log h(x)`.
    pub fn log_base_measure(&self, x: f64) -> Result<f64> {
        self.check_observation(x)?;
        Ok(match self.family {
            Family::Bernoulli => 0.0,
            Family::Poisson => -ln_factorial(x as u64),
            Family::GaussianFixedVar { sigma2 } => -x * x / (2.0 * sigma2) - 0.5 * (2.0 * PI * sigma2).ln(),
        })
    }

    /// `A(η)`.
    pub fn log_partition(&self, eta: &[f64]) -> Result<f64> {
        let e = scalar(eta, "natural parameter")?;
        Ok(match self.family {
            Family::Bernoulli => softplus(e),
            Family::Poisson => e.exp(),
            Family::GaussianFixedVar { sigma2 } => 0.5 * e * e * sigma2,
        })
    }

    /// `μ = ∇A(η)`.
    pub fn mean_map(&self, eta: &[f64]) -> Result<Vec<f64>> {
        let e = scalar(eta, "natural parameter")?;
        Ok(vec![mean_of(self.family, e)])
    }

    /// `A*(μ)` on the closure of the mean domain (`0 ln 0 = 0`).
    pub fn conjugate(&self, mu: &[f64]) -> Result<f64> {
        let m = scalar(mu, "mean parameter")?;
        if !self.mean_domain().closure_contains(&[m])? {
            return Err(self.mean_domain().violation(mu, "mean parameter"));
        }
        Ok(conjugate_of(self.family, m))
    }

    /// `η = ∇A*(μ)` for interior `μ`.
    pub fn dual_map_star(&self, mu: &[f64]) -> Result<Vec<f64>> {
        let m = scalar(mu, "mean parameter")?;
        self.mean_domain().require(&[m], "mean parameter")?;
        Ok(vec![natural_of(self.family, m)])
    }

    fn hessian_star(&self, m: f64) -> f64 {
        match self.family {
            Family::Bernoulli => 1.0 / (m * (1.0 - m)),
            Family::Poisson => 1.0 / m,
            Family::GaussianFixedVar { sigma2 } => 1.0 / sigma2,
        }
    }
}

fn mean_of(family: Family, eta: f64) -> f64 {
    match family {
        Family::Bernoulli => logistic(eta),
        Family::Poisson => eta.exp(),
        Family::GaussianFixedVar { sigma2 } => eta * sigma2,
    }
}

fn natural_of(family: Family, mu: f64) -> f64 {
    match family {
        Family::Bernoulli => logit(mu),
        Family::Poisson => mu.ln(),
        Family::GaussianFixedVar { sigma2 } => mu / sigma2,
    }
}

/// Closed-form Legendre conjugates; NaN outside the closed mean domain.
fn conjugate_of(family: Family, mu: f64) -> f64 {
    match family {
        Family::Bernoulli if (0.0..=1.0).contains(&mu) => xlogx(mu) + xlogx(1.0 - mu),
        Family::Poisson if mu >= 0.0 => xlogx(mu) - mu,
        Family::GaussianFixedVar { sigma2 } => mu * mu / (2.0 * sigma2),
        _ => f64::NAN,
    }
}

/// `E_η[T(x)]` by direct summation or integration of the unnormalized density
/// `h(x) exp(η T(x))`, normalized by its own sum or integral. Does not use `A`
/// or the mean map.
pub fn mean_param_bruteforce(spec: &ExponentialFamilySpec, eta: &[f64]) -> Result<Vec<f64>> {
    let e = scalar(eta, "natural parameter")?;
    let log_weight = |x: f64| -> f64 { spec.log_base_measure(x).expect("support point") + e * x };
    let mean = match spec.support() {
        Support::Finite(points) => {
            let logs: Vec<f64> = points.iter().map(|&x| log_weight(x)).collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
            compensated_sum(points.iter().zip(&w).map(|(x, w)| x * w)) / compensated_sum(w.iter().copied())
        }
        Support::Countable => {
            let rate = e.exp();
            let terms = poisson_truncation(rate)?;
            // work relative to the log-weight at the mode to stay in range
            let mode = rate.floor();
            let shift = log_weight(mode);
            let mut num = CompensatedSum::new();
            let mut den = CompensatedSum::new();
            for x in 0..terms {
                let xf = x as f64;
                let w = (log_weight(xf) - shift).exp();
                num.add(xf * w);
                den.add(w);
            }
            num.value() / den.value()
        }
        Support::Continuous { half_width } => {
            let Family::GaussianFixedVar { sigma2 } = spec.family else {
                unreachable!("only the gaussian family has continuous support")
            };
            let sigma = sigma2.sqrt();
            // the unnormalized log-weight is a parabola peaking at e·σ²
            let center = e * sigma2;
            let shift = log_weight(center);
            let (lo, hi) = (center - half_width * sigma, center + half_width * sigma);
            let density = |x: f64| (log_weight(x) - shift).exp();
            let fail = || Error::TruncationFailure(format!("quadrature did not converge for eta {}", e));
            let den = adaptive_simpson(density, lo, hi, QUADRATURE_TOLERANCE * sigma).ok_or_else(fail)?;
            let num = adaptive_simpson(|x| x * density(x), lo, hi, QUADRATURE_TOLERANCE * sigma)
                .ok_or_else(fail)?;
            num / den
        }
    };
    Ok(vec![mean])
}

/// Number of leading Poisson terms so that `Σ_{x ≥ K} x·p(x) < TAIL_BOUND`.
///
/// Uses `Σ_{x≥K} x·p(x) = λ·P(X ≥ K−1)` and the Chernoff bound
/// `P(X ≥ k) ≤ exp(−λ + k − k ln(k/λ))` for `k > λ`.
pub fn poisson_truncation(rate: f64) -> Result<u64> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::TruncationFailure(format!("poisson rate {} is not a positive finite number", rate)));
    }
    let target = TAIL_BOUND.ln();
    let mut k = rate.floor() as u64 + 1;
    while k <= MAX_POISSON_TERMS {
        let kf = k as f64;
        let log_tail = rate.ln() + (-rate + kf - kf * (kf / rate).ln());
        if log_tail < target {
            return Ok(k + 1);
        }
        k += 1;
    }
    Err(Error::TruncationFailure(format!(
        "tail bound for poisson rate {} needs more than {} terms",
        rate, MAX_POISSON_TERMS
    )))
}

/// `log p(x; η) = log h(x) + ⟨η, T(x)⟩ − A(η)`.
pub fn log_likelihood_direct(spec: &ExponentialFamilySpec, eta: &[f64], x: f64) -> Result<f64> {
    let log_h = spec.log_base_measure(x)?;
    let t = spec.sufficient_statistic(x);
    let e = scalar(eta, "natural parameter")?;
    Ok(compensated_sum([log_h, e * t[0], -spec.log_partition(eta)?]))
}

struct BregmanParts {
    divergence: f64,
    conjugate_at_statistic: f64,
    log_h: f64,
}

fn bregman_parts(spec: &ExponentialFamilySpec, eta: &[f64], x: f64) -> Result<BregmanParts> {
    let log_h = spec.log_base_measure(x)?;
    let t = spec.sufficient_statistic(x);
    let mu = spec.mean_map(eta)?;
    let domain = spec.mean_domain();
    domain.require(&mu, "mean parameter")?;
    if !domain.closure_contains(&t)? {
        return Err(domain.violation(&t, "sufficient statistic"));
    }
    let gen = induced_generator(spec);
    Ok(BregmanParts {
        divergence: divergence_from_closure(&gen, &t, &mu)?,
        conjugate_at_statistic: spec.conjugate(&t)?,
        log_h,
    })
}

/// `−D_{A*}(T(x)‖μ) + A*(T(x)) + log h(x)` with `μ = ∇A(η)`.
pub fn log_likelihood_bregman(spec: &ExponentialFamilySpec, eta: &[f64], x: f64) -> Result<f64> {
    let p = bregman_parts(spec, eta, x)?;
    Ok(compensated_sum([-p.divergence, p.conjugate_at_statistic, p.log_h]))
}

/// `−D_{A*}(T(x)‖μ) + A*(T(x))` without the base-measure term. Equals the
/// log-likelihood only when `h ≡ 1`.
pub fn log_likelihood_bregman_uncorrected(spec: &ExponentialFamilySpec, eta: &[f64], x: f64) -> Result<f64> {
    let p = bregman_parts(spec, eta, x)?;
    Ok(-p.divergence + p.conjugate_at_statistic)
}

/// The generator `A*` on the mean domain: `f = A*`, `∇f = ∇A*`, dual map `∇A`.
pub fn induced_generator(spec: &ExponentialFamilySpec) -> ConvexGenerator {
    let family = spec.family;
    let domain = spec.mean_domain();
    let spec = *spec;
    ConvexGenerator::new(
        format!("{}_conjugate", spec.name()),
        domain,
        move |m| conjugate_of(family, m[0]),
        move |m| vec![natural_of(family, m[0])],
        move |e| {
            let mu = vec![mean_of(family, e[0])];
            domain.contains(&mu).unwrap_or(false).then_some(mu)
        },
    )
    .with_hessian_diag(move |m| vec![spec.hessian_star(m[0])])
    .with_closure_value(move |m| conjugate_of(family, m[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::divergence;

    fn family(name: &str) -> ExponentialFamilySpec {
        builtin_family(name, &Params::new()).unwrap()
    }

    /// Numeric supremum of `μη − A(η)` over an η grid (oracle for `A*`).
    fn grid_sup(spec: &ExponentialFamilySpec, mu: f64, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step) as usize;
        (0..=n)
            .map(|i| {
                let e = lo + i as f64 * step;
                mu * e - spec.log_partition(&[e]).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn builtin_family_examples() {
        let b = family("bernoulli");
        assert!((b.mean_map(&[3f64.ln()]).unwrap()[0] - 0.75).abs() <= 1e-15);
        let h = 1e-6;
        let fd = (b.log_partition(&[3f64.ln() + h]).unwrap() - b.log_partition(&[3f64.ln() - h]).unwrap()) / (2.0 * h);
        assert!((fd - 0.75).abs() <= 1e-9);
        assert_eq!(family("poisson").mean_map(&[0.0]).unwrap(), vec![1.0]);
        let g = family("gaussian_fixed_var");
        assert_eq!(g.conjugate(&[2.0]).unwrap(), 2.0);
        assert!((grid_sup(&g, 2.0, -10.0, 10.0, 1e-4) - 2.0).abs() <= 1e-6);
    }

    #[test]
    fn family_errors() {
        assert_eq!(
            builtin_family("gamma", &Params::new()).unwrap_err(),
            Error::UnknownFamily("gamma".into())
        );
        let mut p = Params::new();
        p.insert("sigma2".into(), 0.0);
        assert_eq!(builtin_family("gaussian_fixed_var", &p).unwrap_err().code(), "E_INVALID_PARAMETER");
        assert!(builtin_family("bernoulli", &p).is_err());
    }

    #[test]
    fn bruteforce_mean_examples() {
        assert_eq!(mean_param_bruteforce(&family("bernoulli"), &[0.0]).unwrap(), vec![0.5]);
        let pois = mean_param_bruteforce(&family("poisson"), &[2f64.ln()]).unwrap()[0];
        assert!((pois - 2.0).abs() <= 1e-12, "{pois}");
        let gauss = mean_param_bruteforce(&family("gaussian_fixed_var"), &[1.5]).unwrap()[0];
        assert!((gauss - 1.5).abs() <= 1e-10, "{gauss}");
    }

    #[test]
    fn poisson_truncation_bound() {
        // λ = 2: the spec-style fixed bound of 60 terms is more than enough
        let k = poisson_truncation(2.0).unwrap();
        assert!(k <= 60, "{k}");
        // brute-force tail check: Σ_{x≥k} x p(x) for λ = 2
        let mut tail = 0.0;
        let mut p = (-2.0f64).exp();
        for x in 1..200u64 {
            p *= 2.0 / x as f64;
            if x >= k {
                tail += x as f64 * p;
            }
        }
        assert!(tail < TAIL_BOUND);
        assert!(poisson_truncation(f64::INFINITY).is_err());
        assert_eq!(
            mean_param_bruteforce(&family("poisson"), &[800.0]).unwrap_err().code(),
            "E_TRUNCATION_FAILURE"
        );
    }

    #[test]
    fn ln_factorial_matches_summation() {
        for x in [0u64, 1, 5, 19, 20, 21, 50, 170] {
            let direct: f64 = (2..=x).map(|k| (k as f64).ln()).sum();
            assert!((ln_factorial(x) - direct).abs() <= 1e-12 * direct.max(1.0), "{x}");
        }
    }

    #[test]
    fn direct_log_likelihood_examples() {
        let b = family("bernoulli");
        let v = log_likelihood_direct(&b, &[3f64.ln()], 1.0).unwrap();
        assert!((v - 0.75f64.ln()).abs() <= 1e-15);
        assert_eq!(log_likelihood_direct(&family("poisson"), &[0.0], 0.0).unwrap(), -1.0);
        let g = log_likelihood_direct(&family("gaussian_fixed_var"), &[0.0], 0.0).unwrap();
        assert!((g + 0.5 * (2.0 * PI).ln()).abs() <= 1e-15);
    }

    #[test]
    fn bregman_log_likelihood_examples() {
        let b = family("bernoulli");
        let eta = [3f64.ln()];
        let parts = bregman_parts(&b, &eta, 1.0).unwrap();
        assert_eq!(parts.conjugate_at_statistic, 0.0);
        assert!((parts.divergence - 0.287_682_072_451_780_9).abs() <= 1e-15);
        assert_eq!(parts.log_h, 0.0);
        assert!((log_likelihood_bregman(&b, &eta, 1.0).unwrap() + 0.287_682_072_451_780_9).abs() <= 1e-15);

        let p = family("poisson");
        let eta = [2f64.ln()];
        let parts = bregman_parts(&p, &eta, 2.0).unwrap();
        let bregman_part = -parts.divergence + parts.conjugate_at_statistic;
        assert!((bregman_part - (2.0 * 2f64.ln() - 2.0)).abs() <= 1e-14);
        assert!((parts.log_h + 2f64.ln()).abs() <= 1e-15);
        let ll = log_likelihood_bregman(&p, &eta, 2.0).unwrap();
        assert!((ll + 1.306_852_819_440_054_7).abs() <= 1e-14);
        // without the base-measure term the identity fails by ln 2!
        let off = log_likelihood_bregman_uncorrected(&p, &eta, 2.0).unwrap() - ll;
        assert!((off - 2f64.ln()).abs() <= 1e-14);

        let g = family("gaussian_fixed_var");
        let parts = bregman_parts(&g, &[1.0], 1.0).unwrap();
        assert_eq!(parts.divergence, 0.0);
        assert_eq!(parts.conjugate_at_statistic, 0.5);
        assert!((parts.log_h - (-0.5 - 0.5 * (2.0 * PI).ln())).abs() <= 1e-15);
        let ll = log_likelihood_bregman(&g, &[1.0], 1.0).unwrap();
        assert!((ll + 0.5 * (2.0 * PI).ln()).abs() <= 1e-15);
    }

    #[test]
    fn observation_errors() {
        let b = family("bernoulli");
        assert_eq!(log_likelihood_bregman(&b, &[0.0], 0.5).unwrap_err().code(), "E_DOMAIN_VIOLATION");
        let p = family("poisson");
        assert!(log_likelihood_direct(&p, &[0.0], -1.0).is_err());
        assert!(log_likelihood_direct(&p, &[0.0], 1.5).is_err());
        assert_eq!(
            log_likelihood_direct(&p, &[0.0, 1.0], 1.0).unwrap_err(),
            Error::DimensionMismatch { expected: 1, found: 2 }
        );
        assert!(p.conjugate(&[-1.0]).is_err());
        assert!(p.dual_map_star(&[0.0]).is_err());
    }

    #[test]
    fn induced_generator_examples() {
        let gb = induced_generator(&family("bernoulli"));
        let d = divergence(&gb, &[0.5], &[0.75]).unwrap();
        // binary KL oracle
        let kl = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!((d - kl).abs() <= 1e-15);
        assert!((d - 0.143_841_036_225_890_46).abs() <= 1e-15);
        for name in FAMILIES {
            let gen = induced_generator(&family(name));
            assert_eq!(divergence(&gen, &[0.4], &[0.4]).unwrap(), 0.0);
        }
        let gp = induced_generator(&family("poisson"));
        let neg = crate::generator::builtin_generator("negentropy", 1).unwrap();
        let a = divergence(&gp, &[1.0], &[4.0]).unwrap();
        let b = divergence(&neg, &[1.0], &[4.0]).unwrap();
        assert!((a - b).abs() <= 1e-12);
        assert!((a - (0.25f64.ln() - 1.0 + 4.0)).abs() <= 1e-14);
    }

    #[test]
    fn induced_dual_map_rejects_saturated_means() {
        let gb = induced_generator(&family("bernoulli"));
        assert!(gb.dual_map(&[60.0]).is_none());
        assert!((gb.dual_map(&[0.0]).unwrap()[0] - 0.5).abs() <= 1e-16);
    }
}
