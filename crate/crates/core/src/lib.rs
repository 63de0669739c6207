//! Bregman divergences and their exact decompositions.
//!
//! - [`generator`]: convex generators `F` with gradients, dual maps and domains.
//! - [`divergence`]: `D_F(x‖y) = F(x) − F(y) − ⟨∇F(y), x − y⟩`.
//! - [`minimizers`]: left and right minimizers of expected divergence.
//! - [`decomposition`]: the exact three-term split of expected divergence.
//! - [`bias_variance`]: noise / bias / variance for learners under Bregman loss.
//! - [`exp_family`]: exponential families, their conjugates, and the
//!   log-likelihood written as a Bregman divergence.
//! - [`config`], [`io`] and [`cli`]: the experiment config format, CSV I/O
//!   and the command-line front end of the `bregman` binary.

pub mod bias_variance;
pub mod cli;
pub mod config;
pub mod decomposition;
pub mod divergence;
pub mod error;
pub mod exp_family;
pub mod generator;
pub mod io;
pub mod minimizers;
pub mod numeric;

pub use bias_variance::{
    decompose_bias_variance, make_data_model, make_learner, sweep, BiasVarianceReport, DataModel, LearnerSpec, Mode,
    SweepKey,
};
pub use config::{parse_config, ExperimentConfig};

pub use decomposition::{decompose, decompose_first_arg_random, decompose_second_arg_random, DecompositionReport};
pub use divergence::{divergence, divergence_batch, divergence_from_closure, DivergenceValue};
pub use error::{Error, Result};
pub use exp_family::{
    builtin_family, induced_generator, log_likelihood_bregman, log_likelihood_direct, mean_param_bruteforce,
    ExponentialFamilySpec, Family,
};
pub use generator::{builtin_generator, check_membership, BuiltinGenerator, ConvexGenerator, Domain, DomainKind, Point};
pub use minimizers::{expected_divergence, left_minimizer, right_minimizer, EmpiricalDistribution, Side};
