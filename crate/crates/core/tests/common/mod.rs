//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> String {
    manifest_dir().join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{}.out", name))
}

/// Runs the compiled `bregman` binary.
pub fn run_bin(args: &[String]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bregman"))
        .args(args)
        .output()
        .expect("spawn bregman binary")
}

fn strings(args: &[&str]) -> Vec<String> {
    args.iter().map(|s| s.to_string()).collect()
}

/// Golden-file cases: a name (the file under `tests/golden`) and the argv.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let two = fixture("two_points.csv");
    let weighted = fixture("weighted_2d.csv");
    vec![
        ("divergence_squared", strings(&["divergence", "--generator", "squared", "--x", "3", "--y", "1"])),
        (
            "divergence_itakura_saito_2d",
            strings(&["divergence", "--generator", "itakura_saito", "--x", "2,0.5", "--y", "1,1.5"]),
        ),
        (
            "minimize_itakura_saito_left",
            strings(&["minimize", "--generator", "itakura_saito", "--side", "left", "--samples", &two]),
        ),
        (
            "minimize_negentropy_left_weighted",
            strings(&["minimize", "--generator", "negentropy", "--side", "left", "--samples", &weighted]),
        ),
        (
            "minimize_squared_right_weighted",
            strings(&["minimize", "--generator", "squared", "--side", "right", "--samples", &weighted]),
        ),
        (
            "decompose_negentropy_second",
            strings(&["decompose", "--generator", "negentropy", "--samples", &two, "--point", "2", "--side", "second"]),
        ),
        (
            "decompose_itakura_saito_first_weighted",
            strings(&[
                "decompose", "--generator", "itakura_saito", "--samples", &weighted, "--point", "1,0.25", "--side",
                "first",
            ]),
        ),
        (
            "bias_variance_sweep_n_train",
            strings(&["bias-variance", "--config", &fixture("sweep_n_train.cfg")]),
        ),
        (
            "bias_variance_monte_carlo_itakura_saito",
            strings(&["bias-variance", "--config", &fixture("monte_carlo_itakura_saito.cfg")]),
        ),
        (
            "bias_variance_bernoulli_alpha_sweep",
            strings(&["bias-variance", "--config", &fixture("bernoulli_alpha_sweep.cfg")]),
        ),
        ("expfam_bernoulli", strings(&["expfam", "--family", "bernoulli", "--eta", "0.7", "--x", "1"])),
        ("expfam_poisson", strings(&["expfam", "--family", "poisson", "--eta", "1.2", "--x", "3"])),
        (
            "expfam_gaussian",
            strings(&["expfam", "--family", "gaussian_fixed_var", "--eta", "-0.4", "--x", "1.5", "--sigma2", "2"]),
        ),
    ]
}
