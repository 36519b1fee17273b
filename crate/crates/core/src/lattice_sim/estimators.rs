//! Monte Carlo counterparts of the shape function, Lyapunov exponents and
//! tail rates, all built on `G(⌊ns⌋, ⌊nt⌋)` over independent replicas.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::env::{sample_env, sample_env_for, Mode};
use super::grid::last_passage_time;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::param_laws::{Marginal, ParameterLaw};
use crate::shape::Direction;

/// Fraction of `ess_inf(α) + ess_inf(β)` above which the exponential moment
/// estimator is flagged as dominated by rare replicas.
pub const HEAVY_TAIL_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeEstimate {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub value: f64,
    pub heavy_tail_warning: bool,
}

/// One replicate-level record, written as CSV `replicate,n,value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replicate {
    pub replicate: u64,
    pub n: u64,
    pub value: f64,
}

/// `G(⌊ns⌋, ⌊nt⌋)` for replicas `0..reps`, in replica order.
pub fn corner_samples(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    n: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
) -> Result<Vec<f64>> {
    if reps == 0 {
        return Err(Error::invalid("`reps` must be at least 1"));
    }
    let rows = (n as f64 * dir.s).floor() as usize;
    let cols = (n as f64 * dir.t).floor() as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::invalid(format!("n={n} gives an empty lattice in direction ({}, {})", dir.s, dir.t)));
    }
    let shared = sample_env(alpha, beta, rows, cols, seed, mode)?;
    (0..reps as u64)
        .into_par_iter()
        .map(|rep| match mode {
            Mode::Quenched => Ok(last_passage_time(&shared, rep)),
            Mode::Annealed => Ok(last_passage_time(&sample_env_for(alpha, beta, rows, cols, seed, mode, rep)?, rep)),
        })
        .collect()
}

/// Mean and standard error of `G(⌊ns⌋, ⌊nt⌋)/n`.
pub fn mc_shape_estimate(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    n: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
) -> Result<ShapeEstimate> {
    let xs: Vec<f64> =
        corner_samples(alpha, beta, dir, n, reps, seed, mode)?.into_iter().map(|g| g / n as f64).collect();
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let stderr = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    } else {
        f64::NAN
    };
    Ok(ShapeEstimate { mean, stderr })
}

/// `n⁻¹ log( reps⁻¹ Σ e^{λ G} )`, computed by log-sum-exp.
#[allow(clippy::too_many_arguments)]
pub fn mc_lyapunov_estimate(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    lambda: f64,
    n: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
) -> Result<LyapunovEstimate> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::domain(format!("λ must be a finite nonnegative real, got {lambda}")));
    }
    let xs = corner_samples(alpha, beta, dir, n, reps, seed, mode)?;
    let top = xs.iter().map(|g| lambda * g).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = xs.iter().map(|g| (lambda * g - top).exp()).sum();
    let value = (top + sum.ln() - (xs.len() as f64).ln()) / n as f64;
    Ok(LyapunovEstimate {
        value,
        heavy_tail_warning: lambda > HEAVY_TAIL_FRACTION * (alpha.ess_inf() + beta.ess_inf()),
    })
}

fn frequency_rate(hits: usize, reps: usize, n: usize) -> ExtReal {
    if hits == 0 {
        return ExtReal::INFINITY;
    }
    ExtReal::new((-(hits as f64 / reps as f64).ln() / n as f64).max(0.0))
}

/// `-n⁻¹ log` of the empirical frequency of `G ≥ nr`; `+∞` if never seen.
#[allow(clippy::too_many_arguments)]
pub fn mc_tail_estimate(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    r: f64,
    n: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
) -> Result<ExtReal> {
    let xs = corner_samples(alpha, beta, dir, n, reps, seed, mode)?;
    let hits = xs.iter().filter(|&&g| g >= n as f64 * r).count();
    Ok(frequency_rate(hits, reps, n))
}

/// `-n⁻¹ log` of the empirical frequency of `G ≤ nr`; `+∞` if never seen.
#[allow(clippy::too_many_arguments)]
pub fn mc_left_tail_estimate(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    r: f64,
    n: usize,
    reps: usize,
    seed: u64,
    mode: Mode,
) -> Result<ExtReal> {
    let xs = corner_samples(alpha, beta, dir, n, reps, seed, mode)?;
    let hits = xs.iter().filter(|&&g| g <= n as f64 * r).count();
    Ok(frequency_rate(hits, reps, n))
}

pub fn replicate_records(n: usize, values: &[f64]) -> Vec<Replicate> {
    values.iter().enumerate().map(|(k, &value)| Replicate { replicate: k as u64, n: n as u64, value }).collect()
}

/// Writes `replicate,n,value` rows with round-trip precision.
pub fn write_replicates_csv<W: Write>(out: W, records: &[Replicate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::invalid(format!("cannot write replicates: {e}"));
    w.write_record(["replicate", "n", "value"]).map_err(io)?;
    for r in records {
        w.write_record([r.replicate.to_string(), r.n.to_string(), format!("{:.16e}", r.value)]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("cannot write replicates: {e}")))?;
    Ok(())
}
