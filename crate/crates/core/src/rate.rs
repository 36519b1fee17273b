//! Right-tail rate functions, their closed-form specializations and their
//! expansions near the shape value.
//!
//! For `r > g(s,t)` the rate is the Legendre transform of the Lyapunov
//! exponent, `J(r) = λ* r - L(λ*)`, where `λ*` solves `L'(λ*) = r` or sits at
//! `Λ` once `r` passes `L'(Λ-)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::lyapunov::{self, Inner, Kind};
use crate::numerics::roots::{brent_root, golden_max};
use crate::param_laws::Marginal;
use crate::shape::{lambda_max, phase_portrait, solve_shape, Direction, Region};

const LAMBDA_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    BelowShape,
    Interior,
    LinearTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEval {
    pub r: f64,
    pub value: ExtReal,
    pub lambda_star: f64,
    pub z_star: f64,
    pub regime: Regime,
}

/// Leading-order behaviour of `J(g + ε) ≈ coefficient · ε^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub region: Region,
    pub exponent: f64,
    /// `None` when a boundary case lacks the third inverse moment.
    pub coefficient: Option<f64>,
    pub moment_condition_met: bool,
}

/// Right-tail rate of the requested kind at `r`.
pub fn right_tail(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, r: f64) -> Result<RateEval> {
    right_tail_with_inner(kind, alpha, beta, dir, r).map(|(eval, _)| eval)
}

/// As [`right_tail`], also returning the maximizing pair in offset form
/// (`None` below the shape value).
pub(crate) fn right_tail_with_inner(
    kind: Kind,
    alpha: &dyn Marginal,
    beta: &dyn Marginal,
    dir: Direction,
    r: f64,
) -> Result<(RateEval, Option<Inner>)> {
    if r.is_nan() {
        return Err(Error::domain("r must not be NaN"));
    }
    let shape = solve_shape(alpha, beta, dir);
    if r <= shape.g {
        let eval =
            RateEval { r, value: ExtReal::ZERO, lambda_star: 0.0, z_star: shape.zeta, regime: Regime::BelowShape };
        return Ok((eval, None));
    }
    let total = lambda_max(alpha, beta);
    let lo = alpha.ess_inf();
    let top = lyapunov::l_prime_endpoint(kind, alpha, beta, dir);
    if top.is_finite() && r >= top.value() {
        let l_top = lyapunov::lyapunov_exponent(kind, alpha, beta, dir, total)?;
        let value = match l_top.value.to_finite() {
            Some(l) => ExtReal::new((total * r - l).max(0.0)),
            None => ExtReal::INFINITY,
        };
        let eval = RateEval { r, value, lambda_star: total, z_star: -lo, regime: Regime::LinearTail };
        let inner = lyapunov::inner_minimizer(kind, alpha, beta, dir, total);
        return Ok((eval, Some(inner)));
    }
    let mut last: Option<Inner> = None;
    let mut f = |lambda: f64| {
        let inner = lyapunov::inner_minimizer(kind, alpha, beta, dir, lambda);
        let d = lyapunov::l_prime_at(kind, alpha, beta, dir, &inner) - r;
        last = Some(inner);
        d
    };
    let lambda = brent_root(&mut f, 0.0, total, shape.g - r, top.value() - r, LAMBDA_TOL * total).clamp(0.0, total);
    let inner = match last {
        Some(inner) if inner.lambda == lambda => inner,
        _ => lyapunov::inner_minimizer(kind, alpha, beta, dir, lambda),
    };
    let l = lyapunov::objective_at(kind, alpha, beta, dir, &inner);
    let value = match l.to_finite() {
        Some(l) => ExtReal::new((lambda * r - l).max(0.0)),
        None => ExtReal::INFINITY,
    };
    let eval = RateEval { r, value, lambda_star: lambda, z_star: inner.ca - lo, regime: Regime::Interior };
    Ok((eval, Some(inner)))
}

/// Quenched right-tail rate `𝐉_{s,t}(r)`.
pub fn quenched_j(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, r: f64) -> Result<RateEval> {
    right_tail(Kind::Quenched, alpha, beta, dir, r)
}

/// Annealed right-tail rate `𝕁_{s,t}(r)`.
pub fn annealed_j(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, r: f64) -> Result<RateEval> {
    right_tail(Kind::Annealed, alpha, beta, dir, r)
}

/// Full quenched rate function: `𝐉` at or above the shape value, `+∞` below.
pub fn quenched_i(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, r: f64) -> Result<ExtReal> {
    let (g, _) = crate::shape::shape_function(alpha, beta, dir);
    if r < g {
        return Ok(ExtReal::INFINITY);
    }
    Ok(quenched_j(alpha, beta, dir, r)?.value)
}

/// Rate for `P(σ(⌊nx⌋, nt) > ⌊ny⌋)` in TASEP, i.e. `J_{x, x+y}(t)`.
pub fn tasep_rate(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, x: f64, y: f64, t: f64) -> Result<ExtReal> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid(format!("`t` must be a finite positive real, got {t}")));
    }
    let dir = Direction::new(x, x + y)?;
    if !(y > 0.0) {
        return Err(Error::invalid(format!("`y` must be a finite positive real, got {y}")));
    }
    Ok(right_tail(kind, alpha, beta, dir, t)?.value)
}

/// `J` for `α = β = δ_{c/2}`, valid for `r ≥ (√s + √t)²/c`.
pub fn closed_form_j_homogeneous(c: f64, dir: Direction, r: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::invalid(format!("`c` must be a finite positive real, got {c}")));
    }
    let (s, t) = (dir.s, dir.t);
    let g = (s.sqrt() + t.sqrt()).powi(2) / c;
    if !(r >= g) {
        return Err(Error::domain(format!("closed form needs r ≥ g = {g}, got {r}")));
    }
    let cr = c * r;
    let root = ((s + t - cr).powi(2) - 4.0 * s * t).max(0.0).sqrt();
    let arg_s = ((s - t + cr) / (2.0 * (c * s * r).sqrt())).max(1.0);
    let arg_t = ((t - s + cr) / (2.0 * (c * t * r).sqrt())).max(1.0);
    Ok((root - 2.0 * s * arg_s.acosh() - 2.0 * t * arg_t.acosh()).max(0.0))
}

fn check_two_point(p: f64, q: f64, c: f64, d: f64, s: f64) -> Result<()> {
    for (name, v) in [("p", p), ("q", q), ("c", c), ("d", d), ("s", s)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!("`{name}` must be a finite positive real, got {v}")));
        }
    }
    if (p + q - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("`p + q` must equal 1, got {}", p + q)));
    }
    Ok(())
}

/// `J_{s,s}` for `α = β = p δ_c + q δ_d` on the diagonal.
///
/// By symmetry the optimal pair is `z* = -h`, `λ* = 2h`, and `u = h²` is the
/// root in `[0, min(c,d)²)` of
/// `r u² - [r(c²+d²) - 2s(pc+qd)] u + r c²d² - 2s(p c d² + q d c²) = 0`.
pub fn closed_form_j_twopoint(p: f64, q: f64, c: f64, d: f64, s: f64, r: f64) -> Result<f64> {
    check_two_point(p, q, c, d, s)?;
    let g = 2.0 * s * (p / c + q / d);
    if !(r >= g) {
        return Err(Error::domain(format!("closed form needs r ≥ g = {g}, got {r}")));
    }
    if c == d {
        // a single atom at c, i.e. the homogeneous case with parameter 2c
        return closed_form_j_homogeneous(2.0 * c, Direction::new(s, s)?, r);
    }
    let b = r * (c * c + d * d) - 2.0 * s * (p * c + q * d);
    let k = r * c * c * d * d - 2.0 * s * (p * c * d * d + q * d * c * c);
    let disc = b * b - 4.0 * r * k;
    if disc < 0.0 {
        return Err(Error::consistency(format!("two-point quadratic has negative discriminant {disc}")));
    }
    // smaller root, written to avoid cancellation
    let u = if b > 0.0 { 2.0 * k / (b + disc.sqrt()) } else { (b - disc.sqrt()) / (2.0 * r) };
    let m = c.min(d);
    if !(u >= -1e-15 && u < m * m) {
        return Err(Error::consistency(format!("two-point root h² = {u} outside [0, {})", m * m)));
    }
    let h = u.max(0.0).sqrt();
    let log_ratio = |x: f64| (2.0 * h / (x - h)).ln_1p();
    Ok((2.0 * h * r - 2.0 * s * (p * log_ratio(c) + q * log_ratio(d))).max(0.0))
}

/// The two-point formula in its printed form: `z* = (K - √Δ)/(2r)`, `z* + λ* = (K + √Δ)/(2r)`
/// with `K = 2cp + 2dq + c²r + d²r` and
/// `Δ = K² + 4r(2cd²p + 2c²dq - c²d²r)`.
///
/// The printed roots do not satisfy the first-order conditions (they are
/// not even admissible for typical inputs), so this returns a consistency
/// error whenever the printed pair falls outside the admissible set or
/// disagrees with [`closed_form_j_twopoint`].
pub fn closed_form_j_twopoint_as_printed(p: f64, q: f64, c: f64, d: f64, s: f64, r: f64) -> Result<f64> {
    check_two_point(p, q, c, d, s)?;
    let t = s;
    let k = 2.0 * c * p + 2.0 * d * q + c * c * r + d * d * r;
    let disc = k * k + 4.0 * r * (2.0 * c * d * d * p + 2.0 * c * c * d * q - c * c * d * d * r);
    if disc < 0.0 {
        return Err(Error::consistency(format!("printed discriminant is negative: {disc}")));
    }
    let z = (k - disc.sqrt()) / (2.0 * r);
    let lambda = disc.sqrt() / r;
    let m = c.min(d);
    if !(lambda > 0.0 && lambda <= 2.0 * m && z >= -m && z <= m - lambda) {
        return Err(Error::consistency(format!(
            "printed optimizer (z*, λ*) = ({z}, {lambda}) is outside the admissible set"
        )));
    }
    let value = r * lambda
        - s * p * ((c + z + lambda) / (c + z)).ln()
        - t * q * ((c - z) / (c - z - lambda)).ln()
        - s * q * ((d + z + lambda) / (d + z)).ln()
        - t * q * ((d - z) / (d - z - lambda)).ln();
    let reference = closed_form_j_twopoint(p, q, c, d, s, r)?;
    if (value - reference).abs() > 1e-6 {
        return Err(Error::consistency(format!("printed form gives {value}, first-order solution gives {reference}")));
    }
    Ok(value)
}

/// `J_{s,s}` for `α = β = U[c/2, c/2 + l]` on the diagonal.
pub fn closed_form_j_uniform(c: f64, l: f64, s: f64, r: f64) -> Result<f64> {
    for (name, v) in [("c", c), ("l", l), ("s", s)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!("`{name}` must be a finite positive real, got {v}")));
        }
    }
    let g = 2.0 * s / l * (2.0 * l / c).ln_1p();
    if !(r >= g) {
        return Err(Error::domain(format!("closed form needs r ≥ g = {g}, got {r}")));
    }
    let lo = c / 2.0;
    let hi = c / 2.0 + l;
    // ((c/2+l)² - c² e^{rl/s}/4)/(1 - e^{rl/s}), multiplied through by e^{-rl/s}
    let e = (-r * l / s).exp();
    let h2 = (lo * lo - hi * hi * e) / (-(-r * l / s).exp_m1());
    if !(h2 >= -1e-15 && h2 <= lo * lo * (1.0 + 1e-12)) {
        return Err(Error::consistency(format!("uniform root h² = {h2} outside [0, (c/2)²]")));
    }
    let h = h2.clamp(0.0, lo * lo).sqrt();
    let xlnx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    let antiderivative = |x: f64| xlnx(x + h) - xlnx(x - h);
    let integral = antiderivative(hi) - antiderivative(lo);
    Ok((2.0 * h * r - 2.0 * s / l * integral).max(0.0))
}

/// `C = s E[(a+ζ)^{-3}] + t E[(b-ζ)^{-3}] = ½ ∂²_z g_z(s,t)` at `z = ζ`.
pub fn kpz_constant(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> ExtReal {
    let sol = solve_shape(alpha, beta, dir);
    third_moment_sum(alpha, beta, dir, sol.u, sol.cb)
}

fn third_moment_sum(alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction, ca: f64, cb: f64) -> ExtReal {
    alpha.inv_pow(ca, 3).scale(dir.s) + beta.inv_pow(cb, 3).scale(dir.t)
}

fn positive_inverse(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(1.0 / x)
    } else {
        Err(Error::consistency(format!("{what} bracket is {x}, expected a positive finite value")))
    }
}

/// Leading-order expansion of `J(g + ε)` as `ε ↓ 0`.
pub fn expansion(kind: Kind, alpha: &dyn Marginal, beta: &dyn Marginal, dir: Direction) -> Result<ExpansionReport> {
    let portrait = phase_portrait(alpha, beta, dir);
    let region = portrait.region;
    let total = lambda_max(alpha, beta);
    let (s, t) = (dir.s, dir.t);
    let v = |x: ExtReal| x.value();
    match kind {
        Kind::Quenched => {
            let quad = |coef: f64| ExpansionReport {
                region,
                exponent: 2.0,
                coefficient: Some(coef),
                moment_condition_met: true,
            };
            let three_halves = |coef: Option<f64>, met: bool| ExpansionReport {
                region,
                exponent: 1.5,
                coefficient: coef,
                moment_condition_met: met,
            };
            match region {
                Region::LinearA => {
                    let bracket = -2.0 * s * v(alpha.inv_pow(0.0, 2)) + 2.0 * t * v(beta.inv_pow(total, 2));
                    Ok(quad(positive_inverse(bracket, "linear-a")?))
                }
                Region::LinearB => {
                    let bracket = 2.0 * s * v(alpha.inv_pow(total, 2)) - 2.0 * t * v(beta.inv_pow(0.0, 2));
                    Ok(quad(positive_inverse(bracket, "linear-b")?))
                }
                Region::BoundaryA | Region::BoundaryB => {
                    let (met, ca, cb) = if region == Region::BoundaryA {
                        (alpha.inverse_moment_finite(3), 0.0, total)
                    } else {
                        (beta.inverse_moment_finite(3), total, 0.0)
                    };
                    if !met {
                        return Ok(three_halves(None, false));
                    }
                    let c = v(third_moment_sum(alpha, beta, dir, ca, cb));
                    Ok(three_halves(Some(2.0 / 3.0 * positive_inverse(c, "boundary")?.sqrt()), true))
                }
                Region::Concave => {
                    let c = v(kpz_constant(alpha, beta, dir));
                    Ok(three_halves(Some(4.0 / 3.0 * positive_inverse(c, "concave")?.sqrt()), true))
                }
            }
        }
        Kind::Annealed => {
            if alpha.is_degenerate() && beta.is_degenerate() {
                return Err(Error::domain("annealed expansion needs at least one nondegenerate law"));
            }
            let bracket = match region {
                Region::LinearA => {
                    let m1 = v(alpha.inv_pow(0.0, 1));
                    -s * m1 * m1 + t * v(beta.inv_var(total)) + t * v(beta.inv_pow(total, 2))
                }
                Region::LinearB => {
                    let m1 = v(beta.inv_pow(0.0, 1));
                    s * v(alpha.inv_var(total)) + s * v(alpha.inv_pow(total, 2)) - t * m1 * m1
                }
                _ => {
                    let sol = solve_shape(alpha, beta, dir);
                    s * v(alpha.inv_var(sol.u)) + t * v(beta.inv_var(sol.cb))
                }
            };
            Ok(ExpansionReport {
                region,
                exponent: 2.0,
                coefficient: Some(0.5 * positive_inverse(bracket, "annealed")?),
                moment_condition_met: true,
            })
        }
    }
}

/// One sample of the duality check `sup_r {λr - J(r)} = L(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualitySample {
    pub lambda: f64,
    pub transform: f64,
    pub exponent: f64,
    pub residual: f64,
}

/// Legendre transform of `J` at `λ ∈ (0, Λ)`, compared against `L(λ)`.
pub fn duality_check(
    kind: Kind,
    alpha: &dyn Marginal,
    beta: &dyn Marginal,
    dir: Direction,
    lambda: f64,
) -> Result<DualitySample> {
    let total = lambda_max(alpha, beta);
    if !(lambda > 0.0 && lambda < total) {
        return Err(Error::domain(format!("duality check needs 0 < λ < {total}, got {lambda}")));
    }
    let exponent = lyapunov::lyapunov_exponent(kind, alpha, beta, dir, lambda)?
        .value
        .to_finite()
        .ok_or_else(|| Error::consistency("L(λ) is infinite below Λ"))?;
    let (g, _) = crate::shape::shape_function(alpha, beta, dir);
    let mut width = g.max(1.0);
    for _ in 0..200 {
        if right_tail(kind, alpha, beta, dir, g + width)?.lambda_star > lambda {
            break;
        }
        width *= 2.0;
    }
    let mut objective = |r: f64| match right_tail(kind, alpha, beta, dir, r) {
        Ok(e) => lambda * r - e.value.value(),
        Err(_) => f64::NEG_INFINITY,
    };
    let (_, transform) = golden_max(&mut objective, g, g + width, 1e-9 * width);
    Ok(DualitySample { lambda, transform, exponent, residual: (transform - exponent).abs() })
}
