//! Weight sampling and the last-passage recursion
//! `G(i,j) = max(G(i-1,j), G(i,j-1)) + W(i,j)`.
//!
//! Bulk weights are drawn with the shorter side as the inner loop (row-major
//! when `m ≥ n`, column-major otherwise). The rolling solver consumes the
//! same stream in the same order, so it reproduces the full table's corner
//! value bit for bit while keeping `O(min(m,n))` memory.

use rand::Rng;
use serde::Serialize;

use super::env::EnvSample;
use super::rng::{exponential, stream, Purpose};
use crate::error::{Error, Result};

/// Boundary weights of the stationary model with parameter `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryWeights {
    pub z: f64,
    /// `W(i,0) ~ Exp(a_i + z)`, `i = 1..m`.
    pub row: Vec<f64>,
    /// `W(0,j) ~ Exp(b_j - z)`, `j = 1..n`.
    pub column: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightGrid {
    pub m: usize,
    pub n: usize,
    /// Row-major, `W(i,j)` at `(i-1)·n + (j-1)`.
    bulk: Vec<f64>,
    pub boundary: Option<BoundaryWeights>,
}

impl WeightGrid {
    /// `W(i,j)` with 1-based bulk indices; index 0 addresses the boundary
    /// (zero for a bulk-only grid, and `W(0,0) = 0` always).
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => 0.0,
            (0, j) => self.boundary.as_ref().map_or(0.0, |b| b.column[j - 1]),
            (i, 0) => self.boundary.as_ref().map_or(0.0, |b| b.row[i - 1]),
            (i, j) => self.bulk[(i - 1) * self.n + (j - 1)],
        }
    }
}

/// Visits bulk cells in draw order, handing each one its weight.
fn draw_bulk<R: Rng + ?Sized>(env: &EnvSample, rng: &mut R, mut visit: impl FnMut(usize, usize, f64)) {
    let (m, n) = (env.a.len(), env.b.len());
    if m >= n {
        for i in 1..=m {
            for j in 1..=n {
                visit(i, j, exponential(rng, env.a[i - 1] + env.b[j - 1]));
            }
        }
    } else {
        for j in 1..=n {
            for i in 1..=m {
                visit(i, j, exponential(rng, env.a[i - 1] + env.b[j - 1]));
            }
        }
    }
}

/// Bulk weights for `replica`, independent across replicas.
pub fn sample_weights(env: &EnvSample, replica: u64) -> WeightGrid {
    let (m, n) = (env.a.len(), env.b.len());
    let mut bulk = vec![0.0; m * n];
    let mut rng = stream(env.seed, Purpose::BulkWeights, replica);
    draw_bulk(env, &mut rng, |i, j, w| bulk[(i - 1) * n + (j - 1)] = w);
    WeightGrid { m, n, bulk, boundary: None }
}

/// Bulk weights plus stationary boundary weights; the bulk is the same
/// realization [`sample_weights`] gives for this replica.
pub fn sample_weights_stationary(env: &EnvSample, z: f64, replica: u64) -> Result<WeightGrid> {
    let min_a = env.a.iter().copied().fold(f64::INFINITY, f64::min);
    let min_b = env.b.iter().copied().fold(f64::INFINITY, f64::min);
    if !(z > -min_a && z < min_b) {
        return Err(Error::domain(format!("stationary z={z} must lie in ({}, {min_b})", -min_a)));
    }
    let mut grid = sample_weights(env, replica);
    let mut rng = stream(env.seed, Purpose::BoundaryWeights, replica);
    let row = env.a.iter().map(|&a| exponential(&mut rng, a + z)).collect();
    let column = env.b.iter().map(|&b| exponential(&mut rng, b - z)).collect();
    grid.boundary = Some(BoundaryWeights { z, row, column });
    Ok(grid)
}

/// Last-passage times `G(i,j)` for `0 ≤ i ≤ m`, `0 ≤ j ≤ n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassageTable {
    pub m: usize,
    pub n: usize,
    pub stationary: bool,
    values: Vec<f64>,
}

impl PassageTable {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.n + 1) + j]
    }

    pub fn corner(&self) -> f64 {
        self.get(self.m, self.n)
    }
}

fn fill_table(grid: &WeightGrid, stationary: bool) -> PassageTable {
    let (m, n) = (grid.m, grid.n);
    let width = n + 1;
    let mut values = vec![0.0; (m + 1) * width];
    if stationary {
        for i in 1..=m {
            values[i * width] = values[(i - 1) * width] + grid.weight(i, 0);
        }
        for j in 1..=n {
            values[j] = values[j - 1] + grid.weight(0, j);
        }
    }
    for i in 1..=m {
        for j in 1..=n {
            let up = values[(i - 1) * width + j];
            let left = values[i * width + j - 1];
            values[i * width + j] = up.max(left) + grid.weight(i, j);
        }
    }
    PassageTable { m, n, stationary, values }
}

/// Bulk passage times with zero boundary, `G(i,0) = G(0,j) = 0`.
pub fn passage_times(grid: &WeightGrid) -> PassageTable {
    fill_table(grid, false)
}

/// Passage times `Ĝ` including the boundary weights.
pub fn stationary_passage_times(grid: &WeightGrid) -> Result<PassageTable> {
    if grid.boundary.is_none() {
        return Err(Error::invalid("stationary passage times need a grid with boundary weights"));
    }
    Ok(fill_table(grid, true))
}

/// `G(m,n)` for `replica` without storing the grid.
pub fn last_passage_time(env: &EnvSample, replica: u64) -> f64 {
    let (m, n) = (env.a.len(), env.b.len());
    let mut row = vec![0.0f64; m.min(n) + 1];
    let mut rng = stream(env.seed, Purpose::BulkWeights, replica);
    // `row[k]` holds G along the current line of the longer side, indexed by the shorter one
    draw_bulk(env, &mut rng, |i, j, w| {
        let k = if m >= n { j } else { i };
        row[k] = row[k].max(row[k - 1]) + w;
    });
    row[m.min(n)]
}
