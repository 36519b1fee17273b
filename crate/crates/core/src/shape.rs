//! The shape function `g(s,t)`, its minimizer `ζ`, the stationary shape
//! `g_z(s,t)` and the phase portrait of linear and concave regions.
//!
//! The minimization variable is carried as `u = z + ess_inf(α) ∈ [0, Λ]` with
//! `Λ = ess_inf(α) + ess_inf(β)`, so the offsets seen by the two laws are `u`
//! and `Λ - u`, both exactly zero at the respective endpoint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numerics::roots::split_root;
use crate::param_laws::{offset_of, Marginal};

/// Relative tolerance for placing `s/t` on a phase boundary `c1` or `c2`.
pub const BOUNDARY_RTOL: f64 = 1e-9;

/// Macroscopic direction `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Direction {
    pub s: f64,
    pub t: f64,
}

impl Direction {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        for (name, v) in [("s", s), ("t", t)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("`{name}` must be a finite positive real, got {v}")));
            }
        }
        Ok(Direction { s, t })
    }

    pub fn scaled(self, c: f64) -> Self {
        Direction { s: c * self.s, t: c * self.t }
    }
}

/// Which part of the admissible interval an inner minimizer sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Lower,
    Interior,
    Upper,
}

/// Region of the phase portrait containing the direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    LinearA,
    BoundaryA,
    Concave,
    BoundaryB,
    LinearB,
}

impl Region {
    pub fn is_linear(self) -> bool {
        matches!(self, Region::LinearA | Region::LinearB)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePortrait {
    pub c1: ExtReal,
    pub c2: ExtReal,
    pub zeta: f64,
    pub region: Region,
}

/// Full solution of the shape minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ShapeSolution {
    pub g: f64,
    pub zeta: f64,
    /// `ζ + ess_inf(α)`.
    pub u: f64,
    /// `ess_inf(β) - ζ`.
    pub cb: f64,
    pub side: Side,
}

pub(crate) fn lambda_max(alpha: &dyn Marginal, beta: &dyn Marginal) -> f64 {
    alpha.ess_inf() + beta.ess_inf()
}

/// `g_z(s,t) = s E[(a+z)^{-1}] + t E[(b-z)^{-1}]`.
pub fn stationary_shape(alpha: &dyn Marginal, beta: &dyn Marginal, z: f64, dir: Direction) -> Result<ExtReal> {
    let ca = offset_of(alpha, z)?;
    let cb = offset_of(beta, -z)?;
    Ok(alpha.inv_pow(ca, 1).scale(dir.s) + beta.inv_pow(cb, 1).scale(dir.t))
}

/// `∂_z g_z` at `u = z + ess_inf(α)`; increasing in `u`.
fn slope(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, ca: f64, cb: f64) -> f64 {
    -dir.s * alpha.inv_pow(ca, 2).value() + dir.t * beta.inv_pow(cb, 2).value()
}

pub(crate) fn solve_shape(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> ShapeSolution {
    let total = lambda_max(alpha, beta);
    let lo = slope(alpha, beta, dir, 0.0, total);
    let (u, cb, side) = if lo >= 0.0 {
        (0.0, total, Side::Lower)
    } else {
        let hi = slope(alpha, beta, dir, total, 0.0);
        if hi <= 0.0 {
            (total, 0.0, Side::Upper)
        } else {
            let (u, cb) = split_root(&mut |ca, cb| slope(alpha, beta, dir, ca, cb), total, lo, hi);
            (u, cb, Side::Interior)
        }
    };
    let g = dir.s * alpha.inv_pow(u, 1).value() + dir.t * beta.inv_pow(cb, 1).value();
    ShapeSolution { g, zeta: u - alpha.ess_inf(), u, cb, side }
}

/// `g(s,t) = min_z g_z(s,t)` over `z ∈ [-ess_inf(α), ess_inf(β)]`, with the
/// minimizer `ζ`. Returns `(g, ζ)`.
pub fn shape_function(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> (f64, f64) {
    let sol = solve_shape(alpha, beta, dir);
    (sol.g, sol.zeta)
}

/// Ratio of second inverse moments. `0` when only the denominator is
/// infinite, `+∞` when only the numerator is.
fn moment_ratio(num: ExtReal, den: ExtReal) -> ExtReal {
    match (num.to_finite(), den.to_finite()) {
        (Some(n), Some(d)) => ExtReal::finite(n / d),
        (Some(_), None) => ExtReal::ZERO,
        (None, Some(_)) => ExtReal::INFINITY,
        // excluded by the model: both would need atoms at ess_inf and offset zero simultaneously
        (None, None) => ExtReal::INFINITY,
    }
}

fn near(x: f64, c: f64) -> bool {
    (x - c).abs() <= BOUNDARY_RTOL * c
}

pub fn phase_portrait(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> PhasePortrait {
    let total = lambda_max(alpha, beta);
    let c1 = moment_ratio(beta.inv_pow(total, 2), alpha.inv_pow(0.0, 2));
    let c2 = moment_ratio(beta.inv_pow(0.0, 2), alpha.inv_pow(total, 2));
    let ratio = dir.s / dir.t;
    let region = if c1.is_finite() && near(ratio, c1.value()) && c1.value() > 0.0 {
        Region::BoundaryA
    } else if c2.is_finite() && near(ratio, c2.value()) {
        Region::BoundaryB
    } else if ratio < c1.value() {
        Region::LinearA
    } else if ratio > c2.value() {
        Region::LinearB
    } else {
        Region::Concave
    };
    let zeta = solve_shape(alpha, beta, dir).zeta;
    PhasePortrait { c1, c2, zeta, region }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param_laws::ParameterLaw;

    fn delta(x: f64) -> ParameterLaw {
        ParameterLaw::point_mass(x).unwrap()
    }

    fn dir(s: f64, t: f64) -> Direction {
        Direction::new(s, t).unwrap()
    }

    #[test]
    fn stationary_values() {
        let a = delta(0.5);
        assert_eq!(stationary_shape(&a, &a, 0.0, dir(1.0, 1.0)).unwrap().value(), 4.0);
        assert!(stationary_shape(&a, &a, 0.5, dir(1.0, 1.0)).unwrap().is_infinite());
        assert!(stationary_shape(&a, &a, 0.6, dir(1.0, 1.0)).is_err());
    }

    #[test]
    fn homogeneous_point_masses() {
        let a = delta(0.5);
        let (g, z) = shape_function(&a, &a, dir(1.0, 1.0));
        assert!((g - 4.0).abs() < 1e-12 && z.abs() < 1e-12);
        let (g, z) = shape_function(&a, &a, dir(4.0, 1.0));
        assert!((g - 9.0).abs() < 1e-12);
        assert!((z - 1.0 / 6.0).abs() < 1e-12, "{z}");
    }

    #[test]
    fn endpoint_minimizer() {
        let alpha = ParameterLaw::poly(1.0, 2.0, 3).unwrap();
        let beta = delta(1.0);
        let sol = solve_shape(&alpha, &beta, dir(1.0, 10.0));
        assert_eq!(sol.side, Side::Lower);
        assert_eq!(sol.zeta, -1.0);
        // g = E[1/(a-1)] + 10·E[1/(b+1)] = 4/3 + 5
        assert!((sol.g - (4.0 / 3.0 + 5.0)).abs() < 1e-12);
    }

    #[test]
    fn phase_regions() {
        let a = delta(0.5);
        let p = phase_portrait(&a, &a, dir(3.0, 1.0));
        assert_eq!((p.c1, p.c2, p.region), (ExtReal::ZERO, ExtReal::INFINITY, Region::Concave));
        let alpha = ParameterLaw::poly(1.0, 2.0, 3).unwrap();
        let p = phase_portrait(&alpha, &delta(1.0), dir(1.0, 10.0));
        assert!((p.c1.value() - 0.125).abs() < 1e-13);
        assert!(p.c2.is_infinite());
        assert_eq!(p.region, Region::LinearA);
        assert_eq!(phase_portrait(&alpha, &delta(1.0), dir(1.0, 8.0)).region, Region::BoundaryA);
        assert_eq!(phase_portrait(&alpha, &delta(1.0), dir(1.0, 7.0)).region, Region::Concave);
    }
}
