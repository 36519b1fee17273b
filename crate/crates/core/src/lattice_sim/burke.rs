//! Empirical check of the Burke property of the stationary model: along a
//! down-right path the increments of `Ĝ` are independent exponentials with
//! rates `a_i + z` (horizontal) and `b_j - z` (vertical).

use rayon::prelude::*;
use serde::Serialize;

use super::env::{sample_env, Mode};
use super::grid::{sample_weights_stationary, stationary_passage_times};
use crate::error::{Error, Result};
use crate::param_laws::{Marginal, ParameterLaw};

/// Two-sided z-score threshold used by every test in the report.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncrementStat {
    pub index: usize,
    pub mean: f64,
    pub variance: f64,
    pub expected_mean: f64,
    pub z_score: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSummary {
    pub pairs: usize,
    pub max_abs_z: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurkeReport {
    pub z: f64,
    pub m: usize,
    pub n: usize,
    pub reps: usize,
    /// `I(i,n) = Ĝ(i,n) - Ĝ(i-1,n)` against `1/(a_i + z)`.
    pub row_increments: Vec<IncrementStat>,
    /// `J(m,j) = Ĝ(m,j) - Ĝ(m,j-1)` against `1/(b_j - z)`.
    pub column_increments: Vec<IncrementStat>,
    /// Pairwise correlations among `{I(i,l) : i > k} ∪ {J(k,j) : j > l}`, `k = m/2`, `l = n/2`.
    pub correlations: CorrelationSummary,
    pub means_pass: bool,
    pub correlations_pass: bool,
}

fn stat(index: usize, samples: impl Iterator<Item = f64>, expected_mean: f64, reps: usize) -> IncrementStat {
    let xs: Vec<f64> = samples.collect();
    let mean = xs.iter().sum::<f64>() / reps as f64;
    let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
    let z_score = (mean - expected_mean) / (variance / reps as f64).sqrt();
    IncrementStat { index, mean, variance, expected_mean, z_score, pass: z_score.abs() <= Z_THRESHOLD }
}

fn correlation_summary(samples: &[Vec<f64>]) -> CorrelationSummary {
    let reps = samples.len() as f64;
    let dim = samples[0].len();
    let means: Vec<f64> = (0..dim).map(|v| samples.iter().map(|s| s[v]).sum::<f64>() / reps).collect();
    let centered = |s: &Vec<f64>, v: usize| s[v] - means[v];
    let sd: Vec<f64> = (0..dim).map(|v| samples.iter().map(|s| centered(s, v).powi(2)).sum::<f64>().sqrt()).collect();
    let mut pairs = 0;
    let mut failures = 0;
    let mut max_abs_z: f64 = 0.0;
    for v in 0..dim {
        for w in v + 1..dim {
            let cov: f64 = samples.iter().map(|s| centered(s, v) * centered(s, w)).sum();
            let z = cov / (sd[v] * sd[w]) * reps.sqrt();
            pairs += 1;
            max_abs_z = max_abs_z.max(z.abs());
            if z.abs() > Z_THRESHOLD {
                failures += 1;
            }
        }
    }
    CorrelationSummary { pairs, max_abs_z, failures }
}

/// Runs `reps` stationary replicas on one quenched environment and tests the
/// increment means and pairwise independence along a down-right path.
pub fn burke_check(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    z: f64,
    m: usize,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<BurkeReport> {
    if !(z > -alpha.ess_inf() && z < beta.ess_inf()) {
        return Err(Error::domain(format!(
            "stationary z={z} must lie strictly inside ({}, {})",
            -alpha.ess_inf(),
            beta.ess_inf()
        )));
    }
    if m < 2 || n < 2 || reps < 2 {
        return Err(Error::invalid("burke check needs m, n ≥ 2 and reps ≥ 2"));
    }
    let env = sample_env(alpha, beta, m, n, seed, Mode::Quenched)?;
    let (k, l) = (m / 2, n / 2);
    let runs: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let grid = sample_weights_stationary(&env, z, rep)?;
            let g = stationary_passage_times(&grid)?;
            let rows = (1..=m).map(|i| g.get(i, n) - g.get(i - 1, n)).collect();
            let cols = (1..=n).map(|j| g.get(m, j) - g.get(m, j - 1)).collect();
            let path = (k + 1..=m)
                .map(|i| g.get(i, l) - g.get(i - 1, l))
                .chain((l + 1..=n).map(|j| g.get(k, j) - g.get(k, j - 1)))
                .collect();
            Ok((rows, cols, path))
        })
        .collect::<Result<_>>()?;
    let row_increments: Vec<IncrementStat> =
        (0..m).map(|i| stat(i + 1, runs.iter().map(|r| r.0[i]), 1.0 / (env.a[i] + z), reps)).collect();
    let column_increments: Vec<IncrementStat> =
        (0..n).map(|j| stat(j + 1, runs.iter().map(|r| r.1[j]), 1.0 / (env.b[j] - z), reps)).collect();
    let path: Vec<Vec<f64>> = runs.into_iter().map(|r| r.2).collect();
    let correlations = correlation_summary(&path);
    let means_pass = row_increments.iter().chain(&column_increments).all(|s| s.pass);
    Ok(BurkeReport {
        z,
        m,
        n,
        reps,
        row_increments,
        column_increments,
        correlations_pass: correlations.failures == 0,
        correlations,
        means_pass,
    })
}
