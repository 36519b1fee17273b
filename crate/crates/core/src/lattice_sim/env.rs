use serde::Serialize;

use super::rng::{stream, Purpose};
use crate::error::{Error, Result};
use crate::param_laws::ParameterLaw;

/// Whether replicas share one parameter environment or redraw it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quenched,
    Annealed,
}

/// Row parameters `a_1..a_m` and column parameters `b_1..b_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvSample {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub seed: u64,
    pub mode: Mode,
}

/// Environment seen by replica 0.
pub fn sample_env(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    m: usize,
    n: usize,
    seed: u64,
    mode: Mode,
) -> Result<EnvSample> {
    sample_env_for(alpha, beta, m, n, seed, mode, 0)
}

/// Environment seen by `replica`: shared in quenched mode, fresh in annealed mode.
pub fn sample_env_for(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    m: usize,
    n: usize,
    seed: u64,
    mode: Mode,
    replica: u64,
) -> Result<EnvSample> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!("lattice dimensions must be positive, got {m}×{n}")));
    }
    let index = match mode {
        Mode::Quenched => 0,
        Mode::Annealed => replica,
    };
    let mut ra = stream(seed, Purpose::RowParameters, index);
    let mut rb = stream(seed, Purpose::ColumnParameters, index);
    Ok(EnvSample {
        a: (0..m).map(|_| alpha.sample(&mut ra)).collect(),
        b: (0..n).map(|_| beta.sample(&mut rb)).collect(),
        seed,
        mode,
    })
}
