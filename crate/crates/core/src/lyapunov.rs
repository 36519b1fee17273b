//! Quenched, annealed and stationary Lyapunov exponents.
//!
//! For `0 < λ < Λ = ess_inf(α) + ess_inf(β)` both exponents are
//! `min_z F(z, λ)` over `z ∈ [-ess_inf(α), ess_inf(β) - λ]`, with
//!
//! * quenched: `F = s E log((a+z+λ)/(a+z)) + t E log((b-z)/(b-z-λ))`
//! * annealed: `F = s log E[(a+z+λ)/(a+z)] + t log E[(b-z)/(b-z-λ)]`
//!
//! `F` is convex in `z`, so the minimizer is found from the sign of the
//! closed-form derivative. The variable is `u = z + ess_inf(α) ∈ [0, D]`,
//! `D = Λ - λ`, giving law offsets `u` and `D - u`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numerics::roots::{brent_root, split_root};
use crate::param_laws::{offset_of, Marginal};
use crate::shape::{lambda_max, solve_shape, Direction};

/// Root tolerance for `λ₁, λ₂`.
const LAMBDA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Quenched,
    Annealed,
}

/// Where the inner minimizer `ẑ` sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Interior,
    /// `ẑ = -ess_inf(α)`
    AtMinusAlpha,
    /// `ẑ = ess_inf(β) - λ`
    AtBetaMinusLambda,
    /// `λ = Λ`: the admissible interval is a single point.
    AtLambdaEndpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovPoint {
    pub lambda: f64,
    pub value: ExtReal,
    pub zhat: f64,
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalLambdas {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda0: f64,
}

/// Inner minimizer in offset coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Inner {
    pub lambda: f64,
    /// Offset of α, `ẑ + ess_inf(α)`.
    pub ca: f64,
    /// Offset of β, `ess_inf(β) - ẑ - λ`.
    pub cb: f64,
    pub boundary: Boundary,
}

struct Problem<'a> {
    kind: Kind,
    alpha: &'a dyn Marginal,
    beta: &'a dyn Marginal,
    dir: Direction,
    total: f64,
}

/// `m2 / (1 + λ m1)` with `m2 = ∞` giving `∞` (then `m2/m1 ≥ m1` diverges too).
fn damped(m2: ExtReal, m1: ExtReal, lambda: f64) -> f64 {
    if m2.is_infinite() {
        return f64::INFINITY;
    }
    m2.value() / (1.0 + lambda * m1.value())
}

/// `m1 / (1 + λ m1)`, tending to `1/λ` as `m1 → ∞`.
fn damped_first(m1: ExtReal, lambda: f64) -> f64 {
    match m1.to_finite() {
        Some(m) => m / (1.0 + lambda * m),
        None => 1.0 / lambda,
    }
}

impl<'a> Problem<'a> {
    fn new(kind: Kind, alpha: &'a dyn Marginal, beta: &'a dyn Marginal, dir: Direction) -> Self {
        Problem { kind, alpha, beta, dir, total: lambda_max(alpha, beta) }
    }

    /// `F` at offsets `(ca, cb)` with `ca + cb + λ = Λ`.
    fn objective(&self, ca: f64, cb: f64, lambda: f64) -> ExtReal {
        let (s, t) = (self.dir.s, self.dir.t);
        match self.kind {
            Kind::Quenched => self.alpha.log_ratio(ca, lambda).scale(s) + self.beta.log_ratio(cb, lambda).scale(t),
            Kind::Annealed => self.alpha.ratio(ca, lambda).ln().scale(s) + self.beta.ratio(cb, lambda).ln().scale(t),
        }
    }

    /// `∂_u F / λ` at offsets `(ca, cb)`; increasing in `u`.
    fn slope(&self, ca: f64, cb: f64, lambda: f64) -> f64 {
        let (s, t) = (self.dir.s, self.dir.t);
        match self.kind {
            Kind::Quenched => {
                -s * self.alpha.inv_product(ca, lambda).value() + t * self.beta.inv_product(cb, lambda).value()
            }
            Kind::Annealed => {
                let a = damped(self.alpha.inv_pow(ca, 2), self.alpha.inv_pow(ca, 1), lambda);
                let b = damped(self.beta.inv_pow(cb, 2), self.beta.inv_pow(cb, 1), lambda);
                -s * a + t * b
            }
        }
    }

    fn inner(&self, lambda: f64) -> Inner {
        debug_assert!(lambda > 0.0 && lambda < self.total);
        let d = self.total - lambda;
        let lo = self.slope(0.0, d, lambda);
        if lo >= 0.0 {
            return Inner { lambda, ca: 0.0, cb: d, boundary: Boundary::AtMinusAlpha };
        }
        let hi = self.slope(d, 0.0, lambda);
        if hi <= 0.0 {
            return Inner { lambda, ca: d, cb: 0.0, boundary: Boundary::AtBetaMinusLambda };
        }
        let (ca, cb) = split_root(&mut |ca, cb| self.slope(ca, cb, lambda), d, lo, hi);
        Inner { lambda, ca, cb, boundary: Boundary::Interior }
    }

    fn point(&self, lambda: f64) -> LyapunovPoint {
        let lo = self.alpha.ess_inf();
        if lambda == 0.0 {
            return LyapunovPoint {
                lambda,
                value: ExtReal::ZERO,
                zhat: solve_shape(self.alpha, self.beta, self.dir).zeta,
                boundary: Boundary::Interior,
            };
        }
        if lambda > self.total {
            return LyapunovPoint { lambda, value: ExtReal::INFINITY, zhat: -lo, boundary: Boundary::AtLambdaEndpoint };
        }
        if lambda == self.total {
            return LyapunovPoint {
                lambda,
                value: self.objective(0.0, 0.0, lambda),
                zhat: -lo,
                boundary: Boundary::AtLambdaEndpoint,
            };
        }
        let inner = self.inner(lambda);
        LyapunovPoint {
            lambda,
            value: self.objective(inner.ca, inner.cb, lambda),
            zhat: inner.ca - lo,
            boundary: inner.boundary,
        }
    }

    /// `∂_λ F` along the minimizer, switching formula on the moving endpoint.
    fn derivative(&self, inner: &Inner) -> ExtReal {
        let (s, t) = (self.dir.s, self.dir.t);
        let (ca, cb, lambda) = (inner.ca, inner.cb, inner.lambda);
        let (alpha, beta) = (self.alpha, self.beta);
        match (self.kind, inner.boundary) {
            (Kind::Quenched, Boundary::AtBetaMinusLambda) => {
                alpha.inv_pow(ca, 1).scale(s) + beta.inv_pow(lambda, 1).scale(t)
            }
            (Kind::Quenched, _) => alpha.inv_pow(ca + lambda, 1).scale(s) + beta.inv_pow(cb, 1).scale(t),
            (Kind::Annealed, Boundary::AtBetaMinusLambda) => {
                let a_num = alpha.inv_pow(ca, 1) + alpha.inv_pow(ca, 2).scale(lambda);
                let a = a_num.value() / alpha.ratio(ca, lambda).value();
                let b = damped_first(beta.inv_pow(0.0, 1), lambda);
                ExtReal::new(s * a + t * b)
            }
            (Kind::Annealed, _) => {
                let a = damped_first(alpha.inv_pow(ca, 1), lambda);
                let b_num = beta.inv_pow(cb, 1) + beta.inv_pow(cb, 2).scale(lambda);
                let b = b_num.value() / beta.ratio(cb, lambda).value();
                ExtReal::new(s * a + t * b)
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("λ must be a finite nonnegative real, got {lambda}")))
    }
}

pub(crate) fn inner_minimizer(
    kind: Kind,
    alpha: &dyn Marginal,
    beta: &dyn Marginal,
    dir: Direction,
    lambda: f64,
) -> Inner {
    let p = Problem::new(kind, alpha, beta, dir);
    if lambda >= p.total {
        return Inner { lambda, ca: 0.0, cb: 0.0, boundary: Boundary::AtLambdaEndpoint };
    }
    p.inner(lambda)
}

/// Value of `F` at the given inner point.
pub(crate) fn objective_at(
    kind: Kind,
    alpha: &dyn Marginal,
    beta: &dyn Marginal,
    dir: Direction,
    inner: &Inner,
) -> ExtReal {
    Problem::new(kind, alpha, beta, dir).objective(inner.ca, inner.cb, inner.lambda)
}

/// Lyapunov exponent of the requested kind.
pub fn lyapunov_exponent(
    kind: Kind,
    alpha: &dyn Marginal,
    beta: &dyn Marginal,
    dir: Direction,
    lambda: f64,
) -> Result<LyapunovPoint> {
    check_lambda(lambda)?;
    Ok(Problem::new(kind, alpha, beta, dir).point(lambda))
}

/// Quenched exponent `lim n⁻¹ log E_ω[e^{λ G(ns, nt)}]`.
pub fn quenched_l(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, lambda: f64) -> Result<LyapunovPoint> {
    lyapunov_exponent(Kind::Quenched, alpha, beta, dir, lambda)
}

/// Annealed exponent `lim n⁻¹ log E[e^{λ G(ns, nt)}]`.
pub fn annealed_l(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, lambda: f64) -> Result<LyapunovPoint> {
    lyapunov_exponent(Kind::Annealed, alpha, beta, dir, lambda)
}

/// `λ₁` (minimizer pinned at `-ess_inf(α)` from here on), `λ₂` (pinned at
/// `ess_inf(β) - λ`) and `λ₀ = min(λ₁, λ₂)`. A value of `0` means the pinning
/// already holds as `λ ↓ 0`; `Λ` means it never happens.
pub fn critical_lambdas(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> CriticalLambdas {
    let p = Problem::new(kind, alpha, beta, dir);
    let total = p.total;
    let lower = |l: f64| p.slope(0.0, (total - l).max(0.0), l);
    let upper = |l: f64| p.slope((total - l).max(0.0), 0.0, l);
    let lambda1 = first_crossing(&lower, total, 1.0);
    let lambda2 = first_crossing(&upper, total, -1.0);
    CriticalLambdas { lambda1, lambda2, lambda0: lambda1.min(lambda2) }
}

/// First `λ ∈ [0, Λ]` with `sign·h(λ) ≥ 0` for a `sign·h` increasing in `λ`.
fn first_crossing(h: &dyn Fn(f64) -> f64, total: f64, sign: f64) -> f64 {
    let f0 = sign * h(0.0);
    if f0 >= 0.0 {
        return 0.0;
    }
    // NaN here means both laws are singular at Λ: the condition never holds
    let f1 = sign * h(total);
    if !(f1 >= 0.0) {
        return total;
    }
    let mut f = |l: f64| sign * h(l);
    brent_root(&mut f, 0.0, total, f0, f1, LAMBDA_TOL)
}

/// `L'(λ)` from the closed-form envelope derivative, `0 < λ < Λ`.
pub fn l_prime(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, lambda: f64) -> Result<f64> {
    let p = Problem::new(kind, alpha, beta, dir);
    if !(lambda > 0.0 && lambda < p.total) {
        return Err(Error::domain(format!("L' needs 0 < λ < {}, got {lambda}", p.total)));
    }
    let inner = p.inner(lambda);
    Ok(p.derivative(&inner).value())
}

/// `L'(λ)` given an already computed inner minimizer.
pub(crate) fn l_prime_at(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, inner: &Inner) -> f64 {
    Problem::new(kind, alpha, beta, dir).derivative(inner).value()
}

/// `lim_{λ ↑ Λ} L'(λ)`, possibly `+∞`.
pub fn l_prime_endpoint(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> ExtReal {
    let (s, t) = (dir.s, dir.t);
    let total = lambda_max(alpha, beta);
    match kind {
        Kind::Quenched => {
            let cond = -s * alpha.inv_product(0.0, total).value() + t * beta.inv_product(0.0, total).value();
            if cond.is_nan() {
                return ExtReal::INFINITY;
            }
            if cond <= 0.0 {
                alpha.inv_pow(0.0, 1).scale(s) + beta.inv_pow(total, 1).scale(t)
            } else {
                alpha.inv_pow(total, 1).scale(s) + beta.inv_pow(0.0, 1).scale(t)
            }
        }
        Kind::Annealed => {
            let (a1, a2) = (alpha.inv_pow(0.0, 1), alpha.inv_pow(0.0, 2));
            let (b1, b2) = (beta.inv_pow(0.0, 1), beta.inv_pow(0.0, 2));
            let cond = -s * damped(a2, a1, total) + t * damped(b2, b1, total);
            if cond.is_nan() {
                return ExtReal::INFINITY;
            }
            if cond <= 0.0 {
                // E[(a+β̲)/(a-α̲)²] / E[(a+β̲)/(a-α̲)] = (m1 + Λ m2)/(1 + Λ m1)
                let a = damped_first(a1, total) + total * damped(a2, a1, total);
                ExtReal::new(s * a + t * damped_first(b1, total))
            } else {
                let b = damped_first(b1, total) + total * damped(b2, b1, total);
                ExtReal::new(s * damped_first(a1, total) + t * b)
            }
        }
    }
}

/// Exponent of the stationary model with boundary parameter `z`, defined for
/// `z ∈ (-ess_inf(α), ess_inf(β))` and `0 < λ < min(ess_inf(α)+z, ess_inf(β)-z)`.
pub fn stationary_l(alpha: &dyn Marginal, beta: &dyn Marginal, z: f64, dir: Direction, lambda: f64) -> Result<ExtReal> {
    let ca = offset_of(alpha, z)?;
    let cb = offset_of(beta, -z)?;
    if !(ca > 0.0 && cb > 0.0) {
        return Err(Error::domain(format!("z={z} must lie strictly inside (-ess_inf(α), ess_inf(β))")));
    }
    if lambda == 0.0 {
        return Ok(ExtReal::ZERO);
    }
    if !(lambda > 0.0 && lambda < ca.min(cb)) {
        return Err(Error::domain(format!("λ={lambda} must lie in (0, {})", ca.min(cb))));
    }
    let (s, t) = (dir.s, dir.t);
    let first = alpha.log_ratio(ca - lambda, lambda).scale(s) + beta.log_ratio(cb, lambda).scale(t);
    let second = alpha.log_ratio(ca, lambda).scale(s) + beta.log_ratio(cb - lambda, lambda).scale(t);
    Ok(first.max(second))
}
