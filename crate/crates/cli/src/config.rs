use std::path::{Path, PathBuf};

use gabmul::algebra::{delta, idft, ones};
use gabmul::equivalence::lowpass_response;
use gabmul::random::random_signal;
use gabmul::tf::discrete_gaussian_normalized;
use gabmul::Signal;
use serde::Deserialize;

use crate::CliError;

/// Optional JSON configuration; every field can be overridden by a flag.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub window: Option<String>,
    pub synthesis_window: Option<String>,
    pub filter: Option<String>,
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub lambdas: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// `gaussian[:width]`, `ones`, `delta` or `file:PATH`. Gaussians are unit norm.
pub fn window(spec: &str, n: usize) -> Result<Signal, CliError> {
    let (kind, arg) = split(spec);
    let g = match (kind, arg) {
        ("gaussian", None) => discrete_gaussian_normalized(n, 1.0)?,
        ("gaussian", Some(w)) => discrete_gaussian_normalized(n, number(w, spec)?)?,
        ("ones", None) => ones(n),
        ("delta", None) => delta(n),
        ("file", Some(path)) => read_signal_file(Path::new(path))?,
        _ => return Err(bad_spec(spec, "gaussian[:width] | ones | delta | file:PATH")),
    };
    check_length(&g, n, spec)?;
    Ok(g)
}

/// Impulse response: `lowpass:R`, `delta`, `random[:seed]` or `file:PATH`.
pub fn filter(spec: &str, n: usize, seed: u64) -> Result<Signal, CliError> {
    let (kind, arg) = split(spec);
    let h = match (kind, arg) {
        ("lowpass", Some(r)) => {
            let r: usize = r.parse().map_err(|_| bad_spec(spec, "lowpass:R with integer R"))?;
            if 2 * r >= n {
                return Err(CliError::Usage(format!("cutoff {r} must be below N/2 = {}", n / 2)));
            }
            idft(&lowpass_response(n, r))
        }
        ("delta", None) => delta(n),
        ("random", None) => random_signal(n, seed),
        ("random", Some(s)) => random_signal(n, s.parse().map_err(|_| bad_spec(spec, "random:SEED"))?),
        ("file", Some(path)) => read_signal_file(Path::new(path))?,
        _ => return Err(bad_spec(spec, "lowpass:R | delta | random[:seed] | file:PATH")),
    };
    check_length(&h, n, spec)?;
    Ok(h)
}

pub fn read_signal_file(path: &Path) -> Result<Signal, CliError> {
    let file = gabmul::io::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    gabmul::io::read_signal(file)
        .map_err(|e| CliError::Usage(format!("bad signal file {}: {e}", path.display())))
}

fn split(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    }
}

fn number(text: &str, spec: &str) -> Result<f64, CliError> {
    text.parse()
        .map_err(|_| bad_spec(spec, "a numeric parameter after ':'"))
}

fn bad_spec(spec: &str, expected: &str) -> CliError {
    CliError::Usage(format!("unrecognized spec {spec:?}; expected {expected}"))
}

fn check_length(s: &Signal, n: usize, spec: &str) -> Result<(), CliError> {
    if s.len() != n {
        return Err(CliError::Usage(format!(
            "{spec:?} has length {}, expected N = {n}",
            s.len()
        )));
    }
    Ok(())
}
