use serde::Serialize;

use super::grid::PassageTable;
use crate::error::{Error, Result};

/// Particle positions `σ(i,t) = -i + max{j : G(i,j) ≤ t}` for `i = 1..m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TasepPositions {
    pub t: f64,
    pub positions: Vec<i64>,
    /// Set where the maximizing `j` is the last column of the table, so the
    /// true position may lie further right.
    pub unreliable: Vec<bool>,
}

pub fn tasep_positions(table: &PassageTable, t: f64) -> Result<TasepPositions> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("`t` must be a finite nonnegative real, got {t}")));
    }
    if table.stationary {
        return Err(Error::invalid("particle positions are read from a bulk passage table"));
    }
    let mut positions = Vec::with_capacity(table.m);
    let mut unreliable = Vec::with_capacity(table.m);
    for i in 1..=table.m {
        // G(i, ·) is nondecreasing, so count the prefix below t
        let jumps = (1..=table.n).take_while(|&j| table.get(i, j) <= t).count();
        positions.push(jumps as i64 - i as i64);
        unreliable.push(jumps == table.n);
    }
    Ok(TasepPositions { t, positions, unreliable })
}
