//! Marginal laws of the row and column parameters and the expectation
//! functionals built on them.
//!
//! Every functional here is of the form `E[h(X + z)]` with `z ≥ -ess_inf`.
//! Internally the shift is carried as the *offset* `c = z + ess_inf ≥ 0`, and
//! integrands are written in `u = X - ess_inf`, so `h` is evaluated at `u + c`
//! and a singularity can only sit at `u = 0, c = 0`. Whether an expectation is
//! infinite is then decided from the law's structure (an atom at the
//! essential infimum, or the density exponent of an interval law) rather than
//! from quadrature output.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numerics::quad;

const PROB_TOL: f64 = 1e-12;
const QUAD_ABS_TOL: f64 = 1e-15;
const QUAD_REL_TOL: f64 = 1e-13;

/// Order of the blow-up of an integrand at `u = 0`: `u^{-pole}`, optionally
/// times a logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Blowup {
    pub pole: u32,
    pub log: bool,
}

impl Blowup {
    pub const NONE: Blowup = Blowup { pole: 0, log: false };

    pub fn pole(order: u32) -> Self {
        Blowup { pole: order, log: false }
    }

    pub fn log() -> Self {
        Blowup { pole: 0, log: true }
    }

    /// `pole(order)` if `singular`, else no blow-up.
    pub fn pole_if(singular: bool, order: u32) -> Self {
        if singular {
            Blowup::pole(order)
        } else {
            Blowup::NONE
        }
    }

    pub fn is_singular(self) -> bool {
        self.pole > 0 || self.log
    }

    /// Blow-up of a product of two integrands.
    pub fn combine(self, other: Blowup) -> Blowup {
        Blowup { pole: self.pole + other.pole, log: self.log || other.log }
    }
}

/// A probability law on `(0, ∞)` with bounded support.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", try_from = "LawSpec", into = "LawSpec")]
pub enum ParameterLaw {
    PointMass {
        x: f64,
    },
    /// Atoms sorted by location, probabilities strictly positive and summing to one.
    FiniteDiscrete {
        atoms: Vec<(f64, f64)>,
    },
    UniformInterval {
        lo: f64,
        hi: f64,
    },
    /// Density `(k+1)(x-lo)^k / (hi-lo)^{k+1}` on `[lo, hi]`.
    PolyInterval {
        lo: f64,
        hi: f64,
        k: u32,
    },
}

/// Wire format of a law: `{"type":"delta","x":..}`, `{"type":"discrete","atoms":[[x,p],..]}`,
/// `{"type":"uniform","lo":..,"hi":..}`, `{"type":"poly","lo":..,"hi":..,"k":..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawSpec {
    Delta { x: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
    Uniform { lo: f64, hi: f64 },
    Poly { lo: f64, hi: f64, k: u32 },
}

impl TryFrom<LawSpec> for ParameterLaw {
    type Error = Error;
    fn try_from(spec: LawSpec) -> Result<Self> {
        match spec {
            LawSpec::Delta { x } => ParameterLaw::point_mass(x),
            LawSpec::Discrete { atoms } => ParameterLaw::discrete(atoms),
            LawSpec::Uniform { lo, hi } => ParameterLaw::uniform(lo, hi),
            LawSpec::Poly { lo, hi, k } => ParameterLaw::poly(lo, hi, k),
        }
    }
}

impl From<ParameterLaw> for LawSpec {
    fn from(law: ParameterLaw) -> Self {
        match law {
            ParameterLaw::PointMass { x } => LawSpec::Delta { x },
            ParameterLaw::FiniteDiscrete { atoms } => LawSpec::Discrete { atoms },
            ParameterLaw::UniformInterval { lo, hi } => LawSpec::Uniform { lo, hi },
            ParameterLaw::PolyInterval { lo, hi, k } => LawSpec::Poly { lo, hi, k },
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("`{name}` must be a finite positive real, got {v}")))
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    check_positive("lo", lo)?;
    check_positive("hi", hi)?;
    if lo < hi {
        Ok(())
    } else {
        Err(Error::invalid(format!("`lo` must be below `hi`, got lo={lo}, hi={hi}")))
    }
}

impl ParameterLaw {
    pub fn point_mass(x: f64) -> Result<Self> {
        check_positive("x", x)?;
        Ok(ParameterLaw::PointMass { x })
    }

    /// Builds a finite discrete law. Probabilities must sum to one within
    /// `1e-12` and are renormalized; zero-probability atoms are dropped and
    /// repeated locations merged.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("`atoms` must not be empty"));
        }
        for &(x, p) in &atoms {
            check_positive("atoms[].x", x)?;
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::invalid(format!("`atoms[].p` must be a probability, got {p}")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::invalid(format!("`atoms` probabilities sum to {total}, expected 1")));
        }
        let mut kept: Vec<(f64, f64)> = atoms.into_iter().filter(|a| a.1 > 0.0).collect();
        kept.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(kept.len());
        for (x, p) in kept {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += p,
                _ => merged.push((x, p)),
            }
        }
        // drift at the level of summation rounding is left alone so that
        // already-normalized input comes back bit for bit
        if (total - 1.0).abs() > 4.0 * f64::EPSILON * merged.len() as f64 {
            for a in &mut merged {
                a.1 /= total;
            }
        }
        Ok(ParameterLaw::FiniteDiscrete { atoms: merged })
    }

    /// Two-atom law `p δ_c + (1-p) δ_d`.
    pub fn two_point(c: f64, p: f64, d: f64) -> Result<Self> {
        ParameterLaw::discrete(vec![(c, p), (d, 1.0 - p)])
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(ParameterLaw::UniformInterval { lo, hi })
    }

    pub fn poly(lo: f64, hi: f64, k: u32) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(ParameterLaw::PolyInterval { lo, hi, k })
    }

    /// Atoms `(x, p)` for discrete laws, `None` for interval laws.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            ParameterLaw::PointMass { x } => Some(vec![(*x, 1.0)]),
            ParameterLaw::FiniteDiscrete { atoms } => Some(atoms.clone()),
            _ => None,
        }
    }

    /// `(lo, hi, k)` for interval laws (uniform is `k = 0`).
    fn interval(&self) -> Option<(f64, f64, u32)> {
        match *self {
            ParameterLaw::UniformInterval { lo, hi } => Some((lo, hi, 0)),
            ParameterLaw::PolyInterval { lo, hi, k } => Some((lo, hi, k)),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ParameterLaw::PointMass { x } => *x,
            ParameterLaw::FiniteDiscrete { atoms } => atoms.iter().map(|(x, p)| x * p).sum(),
            ParameterLaw::UniformInterval { lo, hi } => 0.5 * (lo + hi),
            ParameterLaw::PolyInterval { lo, hi, k } => {
                let k = f64::from(*k);
                lo + (hi - lo) * (k + 1.0) / (k + 2.0)
            }
        }
    }

    /// Draws one value by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ParameterLaw::PointMass { x } => *x,
            ParameterLaw::FiniteDiscrete { atoms } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(x, p) in atoms {
                    acc += p;
                    if u < acc {
                        return x;
                    }
                }
                atoms[atoms.len() - 1].0
            }
            ParameterLaw::UniformInterval { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            ParameterLaw::PolyInterval { lo, hi, k } => {
                let u: f64 = rng.random();
                lo + (hi - lo) * u.powf(1.0 / f64::from(k + 1))
            }
        }
    }
}

impl fmt::Debug for ParameterLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParameterLaw::PointMass { x } => write!(f, "δ({x})"),
            ParameterLaw::FiniteDiscrete { atoms } => {
                f.write_str("Σ[")?;
                for (i, (x, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}·δ({x})")?;
                }
                f.write_str("]")
            }
            ParameterLaw::UniformInterval { lo, hi } => write!(f, "U[{lo}, {hi}]"),
            ParameterLaw::PolyInterval { lo, hi, k } => write!(f, "Poly[{lo}, {hi}; k={k}]"),
        }
    }
}

/// Anything that can stand in for a parameter marginal: the closed
/// [`ParameterLaw`] variants and the tilted laws derived from them.
pub trait Marginal: fmt::Debug + Send + Sync {
    fn ess_inf(&self) -> f64;

    /// True for a law concentrated on one point.
    fn is_degenerate(&self) -> bool;

    /// Whether an integrand with the given blow-up at `u = 0` has a finite
    /// expectation. Exact, from the law's structure.
    fn integrable(&self, blowup: Blowup) -> bool;

    /// `E[h(X - ess_inf)]`. The caller states the blow-up of `h` at `0`;
    /// `+∞` is returned exactly when [`Marginal::integrable`] says so.
    fn expect(&self, h: &dyn Fn(f64) -> f64, blowup: Blowup) -> ExtReal;

    /// `E[(u + c)^{-k}]`.
    fn inv_pow(&self, c: f64, k: u32) -> ExtReal {
        debug_assert!(c >= 0.0);
        let k = k as i32;
        self.expect(&|u| (u + c).powi(-k), Blowup::pole_if(c == 0.0, k as u32))
    }

    /// `E[log((u + c + λ)/(u + c))]`.
    fn log_ratio(&self, c: f64, lambda: f64) -> ExtReal {
        debug_assert!(c >= 0.0 && lambda >= 0.0);
        if lambda == 0.0 {
            return ExtReal::ZERO;
        }
        let blowup = if c == 0.0 { Blowup::log() } else { Blowup::NONE };
        self.expect(&|u| (lambda / (u + c)).ln_1p(), blowup)
    }

    /// `E[(u + c + λ)/(u + c)] = 1 + λ E[(u + c)^{-1}]`.
    fn ratio(&self, c: f64, lambda: f64) -> ExtReal {
        if lambda == 0.0 {
            return ExtReal::finite(1.0);
        }
        ExtReal::finite(1.0) + self.inv_pow(c, 1).scale(lambda)
    }

    /// `E[1/((u + c)(u + c + λ))]`.
    fn inv_product(&self, c: f64, lambda: f64) -> ExtReal {
        debug_assert!(c >= 0.0 && lambda >= 0.0);
        let singular = c == 0.0;
        let order = if lambda == 0.0 { 2 } else { 1 };
        self.expect(&|u| 1.0 / ((u + c) * (u + c + lambda)), Blowup::pole_if(singular, order))
    }

    /// `Var[(u + c)^{-1}]`, computed as a centered second moment.
    fn inv_var(&self, c: f64) -> ExtReal {
        let m1 = match self.inv_pow(c, 1).to_finite() {
            Some(m) => m,
            None => return ExtReal::INFINITY,
        };
        self.expect(&|u| (1.0 / (u + c) - m1).powi(2), Blowup::pole_if(c == 0.0, 2))
    }

    /// Finiteness of `E[(X - ess_inf)^{-k}]`.
    fn inverse_moment_finite(&self, k: u32) -> bool {
        self.integrable(Blowup::pole(k))
    }
}

impl Marginal for ParameterLaw {
    fn ess_inf(&self) -> f64 {
        match self {
            ParameterLaw::PointMass { x } => *x,
            ParameterLaw::FiniteDiscrete { atoms } => atoms[0].0,
            ParameterLaw::UniformInterval { lo, .. } | ParameterLaw::PolyInterval { lo, .. } => *lo,
        }
    }

    fn is_degenerate(&self) -> bool {
        match self {
            ParameterLaw::PointMass { .. } => true,
            ParameterLaw::FiniteDiscrete { atoms } => atoms.len() == 1,
            _ => false,
        }
    }

    fn integrable(&self, blowup: Blowup) -> bool {
        match self.interval() {
            // an atom sits at ess_inf
            None => !blowup.is_singular(),
            Some((_, _, k)) => blowup.pole <= k,
        }
    }

    fn expect(&self, h: &dyn Fn(f64) -> f64, blowup: Blowup) -> ExtReal {
        if !self.integrable(blowup) {
            return ExtReal::INFINITY;
        }
        match self {
            ParameterLaw::PointMass { .. } => ExtReal::new(h(0.0)),
            ParameterLaw::FiniteDiscrete { atoms } => {
                let base = atoms[0].0;
                ExtReal::new(atoms.iter().map(|&(x, p)| p * h(x - base)).sum())
            }
            ParameterLaw::UniformInterval { lo, hi } => {
                let w = hi - lo;
                let v = quad::integrate(h, 0.0, w, QUAD_ABS_TOL, QUAD_REL_TOL);
                ExtReal::new(v / w)
            }
            ParameterLaw::PolyInterval { lo, hi, k } => {
                let w = hi - lo;
                let k = *k as i32;
                let norm = f64::from(k as u32 + 1) / w.powi(k + 1);
                let integrand = |u: f64| h(u) * u.powi(k);
                let v = quad::integrate(&integrand, 0.0, w, QUAD_ABS_TOL, QUAD_REL_TOL);
                ExtReal::new(v * norm)
            }
        }
    }
}

/// Offset `z + ess_inf`, rejecting shifts below `-ess_inf` (up to rounding).
pub fn offset_of(law: &(impl Marginal + ?Sized), z: f64) -> Result<f64> {
    let lo = law.ess_inf();
    let c = z + lo;
    if c >= 0.0 {
        Ok(c)
    } else if c > -1e-14 * lo.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::domain(format!("shift z={z} is below -ess_inf={}", -lo)))
    }
}

/// Essential infimum of the law.
pub fn ess_inf(law: &(impl Marginal + ?Sized)) -> f64 {
    law.ess_inf()
}

/// `E[(X + z)^{-k}]`.
pub fn mean_inv_pow(law: &(impl Marginal + ?Sized), z: f64, k: u32) -> Result<ExtReal> {
    if k == 0 {
        return Err(Error::invalid("power k must be positive"));
    }
    Ok(law.inv_pow(offset_of(law, z)?, k))
}

/// `E[log((X + z + λ)/(X + z))]`.
pub fn mean_log_ratio(law: &(impl Marginal + ?Sized), z: f64, lambda: f64) -> Result<ExtReal> {
    check_lambda(lambda)?;
    Ok(law.log_ratio(offset_of(law, z)?, lambda))
}

/// `E[(X + z + λ)/(X + z)]`.
pub fn mean_ratio(law: &(impl Marginal + ?Sized), z: f64, lambda: f64) -> Result<ExtReal> {
    check_lambda(lambda)?;
    Ok(law.ratio(offset_of(law, z)?, lambda))
}

/// `Var[(X + z)^{-1}]`.
pub fn var_inv(law: &(impl Marginal + ?Sized), z: f64) -> Result<ExtReal> {
    Ok(law.inv_var(offset_of(law, z)?))
}

/// Finiteness of `E[(X - ess_inf)^{-k}]`.
pub fn inverse_moment_finite(law: &(impl Marginal + ?Sized), k: u32) -> bool {
    law.inverse_moment_finite(k)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("λ must be a finite nonnegative real, got {lambda}")))
    }
}

/// `H(ν|μ) = Σ ν_i log(ν_i/μ_i)`, `+∞` unless `supp ν ⊆ supp μ`.
/// Both laws must be discrete (point mass or finite discrete).
pub fn relative_entropy(nu: &ParameterLaw, mu: &ParameterLaw) -> Result<ExtReal> {
    let (Some(nu_atoms), Some(mu_atoms)) = (nu.atoms(), mu.atoms()) else {
        return Err(Error::invalid("relative entropy is only available for discrete laws"));
    };
    let mut h = 0.0;
    for (x, p) in nu_atoms {
        match mu_atoms.iter().find(|(y, _)| (x - y).abs() <= 1e-12 * x.abs().max(1.0)) {
            Some(&(_, q)) => h += p * (p / q).ln(),
            None => return Ok(ExtReal::INFINITY),
        }
    }
    Ok(ExtReal::new(h.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Weight {
    /// `(u + c + λ)/(u + c)`
    Ratio { c: f64, lambda: f64 },
    /// `x = u + ess_inf`
    SizeBias,
}

impl Weight {
    fn eval(self, u: f64, base_inf: f64) -> f64 {
        match self {
            Weight::Ratio { c, lambda } => 1.0 + lambda / (u + c),
            Weight::SizeBias => u + base_inf,
        }
    }

    fn blowup(self) -> Blowup {
        match self {
            Weight::Ratio { c, lambda } => Blowup::pole_if(c == 0.0 && lambda > 0.0, 1),
            Weight::SizeBias => Blowup::NONE,
        }
    }
}

/// A law `ν` with `dν/dμ ∝ w` for a base law `μ`.
///
/// Discrete bases are tilted exactly into a new [`ParameterLaw`]; continuous
/// bases keep `(μ, w)` and integrate against the base law.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedLaw {
    base: ParameterLaw,
    weight: Weight,
    norm: f64,
    exact: Option<ParameterLaw>,
}

impl TiltedLaw {
    fn build(base: &ParameterLaw, weight: Weight) -> Result<Self> {
        let lo = base.ess_inf();
        let norm = base
            .expect(&|u| weight.eval(u, lo), weight.blowup())
            .to_finite()
            .ok_or_else(|| Error::domain("tilt normalizer is infinite"))?;
        let exact = match base.atoms() {
            Some(atoms) if atoms.len() == 1 => Some(base.clone()),
            Some(atoms) => {
                let reweighted: Vec<(f64, f64)> =
                    atoms.iter().map(|&(x, p)| (x, p * weight.eval(x - lo, lo) / norm)).collect();
                let total: f64 = reweighted.iter().map(|a| a.1).sum();
                Some(ParameterLaw::discrete(reweighted.into_iter().map(|(x, p)| (x, p / total)).collect())?)
            }
            None => None,
        };
        Ok(TiltedLaw { base: base.clone(), weight, norm, exact })
    }

    pub fn base(&self) -> &ParameterLaw {
        &self.base
    }

    /// The tilted law as a closed variant, available for discrete bases.
    pub fn as_law(&self) -> Option<&ParameterLaw> {
        self.exact.as_ref()
    }

    /// `H(ν|μ)` against the base law.
    pub fn entropy(&self) -> ExtReal {
        if let Some(exact) = &self.exact {
            return relative_entropy(exact, &self.base).unwrap_or(ExtReal::INFINITY);
        }
        let lo = self.base.ess_inf();
        let (weight, norm) = (self.weight, self.norm);
        let b = weight.blowup();
        let b = Blowup { log: b.log || b.pole > 0, ..b };
        let v = self.base.expect(
            &|u| {
                let d = weight.eval(u, lo) / norm;
                d * d.ln()
            },
            b,
        );
        v.max(ExtReal::ZERO)
    }
}

impl Marginal for TiltedLaw {
    fn ess_inf(&self) -> f64 {
        self.base.ess_inf()
    }

    fn is_degenerate(&self) -> bool {
        self.base.is_degenerate()
    }

    fn integrable(&self, blowup: Blowup) -> bool {
        match &self.exact {
            Some(law) => law.integrable(blowup),
            None => self.base.integrable(blowup.combine(self.weight.blowup())),
        }
    }

    fn expect(&self, h: &dyn Fn(f64) -> f64, blowup: Blowup) -> ExtReal {
        if let Some(law) = &self.exact {
            return law.expect(h, blowup);
        }
        let lo = self.base.ess_inf();
        let weight = self.weight;
        let v = self.base.expect(&|u| weight.eval(u, lo) * h(u), blowup.combine(weight.blowup()));
        if v.is_infinite() {
            v
        } else {
            ExtReal::new(v.value() / self.norm)
        }
    }
}

/// `dν/dμ(x) ∝ (x + z + λ)/(x + z)`.
pub fn tilt_ratio(law: &ParameterLaw, z: f64, lambda: f64) -> Result<TiltedLaw> {
    check_lambda(lambda)?;
    let c = offset_of(law, z)?;
    tilt_ratio_at_offset(law, c, lambda)
}

pub(crate) fn tilt_ratio_at_offset(law: &ParameterLaw, c: f64, lambda: f64) -> Result<TiltedLaw> {
    TiltedLaw::build(law, Weight::Ratio { c, lambda })
}

/// Size-biased law `dν/dμ(x) ∝ x`.
pub fn tilt_mean(law: &ParameterLaw) -> Result<TiltedLaw> {
    TiltedLaw::build(law, Weight::SizeBias)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atoms() -> ParameterLaw {
        ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap()
    }

    fn poly123() -> ParameterLaw {
        ParameterLaw::poly(1.0, 2.0, 3).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ess_inf_per_variant() {
        assert_eq!(ess_inf(&ParameterLaw::point_mass(0.5).unwrap()), 0.5);
        assert_eq!(ess_inf(&poly123()), 1.0);
        assert_eq!(ess_inf(&two_atoms()), 1.0);
    }

    #[test]
    fn inverse_power_moments() {
        let v = mean_inv_pow(&poly123(), -1.0, 2).unwrap();
        assert!(close(v.value(), 2.0, 1e-12), "{v:?}");
        let v = mean_inv_pow(&ParameterLaw::point_mass(1.0).unwrap(), 1.0, 2).unwrap();
        assert_eq!(v.value(), 0.25);
        assert!(mean_inv_pow(&ParameterLaw::point_mass(1.0).unwrap(), -1.0, 2).unwrap().is_infinite());
        // ∫_0^1 4u^3 u^{-3} du = 4
        let v = mean_inv_pow(&poly123(), -1.0, 3).unwrap();
        assert!(close(v.value(), 4.0, 1e-12), "{v:?}");
        assert!(mean_inv_pow(&poly123(), -1.0, 4).unwrap().is_infinite());
    }

    #[test]
    fn shift_below_ess_inf_is_a_domain_error() {
        assert!(matches!(mean_inv_pow(&poly123(), -1.5, 1), Err(Error::Domain(_))));
        assert!(matches!(mean_log_ratio(&two_atoms(), -1.01, 0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn log_ratio_values() {
        let v = mean_log_ratio(&ParameterLaw::point_mass(0.5).unwrap(), -0.25, 0.5).unwrap();
        assert!(close(v.value(), 3f64.ln(), 1e-15));
        assert_eq!(mean_log_ratio(&poly123(), -0.5, 0.0).unwrap().value(), 0.0);
        let v = mean_log_ratio(&two_atoms(), 0.0, 1.0).unwrap();
        let oracle = 0.5 * 2f64.ln() + 0.5 * 1.5f64.ln();
        assert!(close(v.value(), oracle, 1e-15));
        assert!(close(oracle, 0.549306, 1e-6));
        // atom at the shift point
        assert!(mean_log_ratio(&two_atoms(), -1.0, 1.0).unwrap().is_infinite());
        // interval laws keep the log singularity integrable
        assert!(mean_log_ratio(&ParameterLaw::uniform(1.0, 2.0).unwrap(), -1.0, 1.0).unwrap().is_finite());
    }

    #[test]
    fn ratio_values() {
        let v = mean_ratio(&ParameterLaw::point_mass(0.5).unwrap(), 0.0, 1.0).unwrap();
        assert_eq!(v.value(), 3.0);
        assert_eq!(mean_ratio(&poly123(), -1.0, 0.0).unwrap().value(), 1.0);
        let v = mean_ratio(&ParameterLaw::uniform(0.5, 1.5).unwrap(), 0.0, 1.0).unwrap();
        assert!(close(v.value(), 1.0 + 3f64.ln(), 1e-12));
        assert!(mean_ratio(&ParameterLaw::uniform(0.5, 1.5).unwrap(), -0.5, 1.0).unwrap().is_infinite());
    }

    #[test]
    fn inverse_variance() {
        assert_eq!(var_inv(&ParameterLaw::point_mass(0.7).unwrap(), 0.3).unwrap().value(), 0.0);
        let v = var_inv(&two_atoms(), 0.0).unwrap();
        assert!(close(v.value(), 1.0 / 16.0, 1e-15));
        let v = var_inv(&poly123(), -1.0).unwrap();
        assert!(close(v.value(), 2.0 / 9.0, 1e-12), "{v:?}");
    }

    #[test]
    fn inverse_moment_finiteness() {
        assert!(!inverse_moment_finite(&ParameterLaw::point_mass(1.0).unwrap(), 1));
        assert!(!inverse_moment_finite(&two_atoms(), 3));
        assert!(inverse_moment_finite(&poly123(), 2));
        assert!(inverse_moment_finite(&poly123(), 3));
        assert!(!inverse_moment_finite(&poly123(), 4));
        assert!(!inverse_moment_finite(&ParameterLaw::uniform(1.0, 2.0).unwrap(), 1));
    }

    #[test]
    fn entropy_values() {
        let mu = two_atoms();
        assert_eq!(relative_entropy(&mu, &mu).unwrap().value(), 0.0);
        let nu = ParameterLaw::point_mass(2.0).unwrap();
        assert!(close(relative_entropy(&nu, &mu).unwrap().value(), 2f64.ln(), 1e-15));
        let outside = ParameterLaw::point_mass(3.0).unwrap();
        assert!(relative_entropy(&outside, &mu).unwrap().is_infinite());
        assert!(relative_entropy(&poly123(), &mu).is_err());
    }

    #[test]
    fn ratio_tilts() {
        let pm = ParameterLaw::point_mass(0.8).unwrap();
        assert_eq!(tilt_ratio(&pm, 0.1, 0.4).unwrap().as_law(), Some(&pm));
        let t = tilt_ratio(&two_atoms(), 0.0, 1.0).unwrap();
        let atoms = t.as_law().unwrap().atoms().unwrap();
        assert!(close(atoms[0].1, 4.0 / 7.0, 1e-15));
        assert!(close(atoms[1].1, 3.0 / 7.0, 1e-15));
        let t0 = tilt_ratio(&two_atoms(), 0.3, 0.0).unwrap();
        assert_eq!(t0.as_law(), Some(&two_atoms()));
        // atom at the shift point makes the normalizer infinite
        assert!(tilt_ratio(&two_atoms(), -1.0, 1.0).is_err());
    }

    #[test]
    fn size_bias_tilt() {
        let t = tilt_mean(&two_atoms()).unwrap();
        let atoms = t.as_law().unwrap().atoms().unwrap();
        assert!(close(atoms[0].1, 1.0 / 3.0, 1e-15) && close(atoms[1].1, 2.0 / 3.0, 1e-15));
        let oracle = (1.0 / 3.0) * (2.0f64 / 3.0).ln() + (2.0 / 3.0) * (4.0f64 / 3.0).ln();
        assert!(close(t.entropy().value(), oracle, 1e-15));
        assert!(close(oracle, 0.056633, 1e-6));
        let pm = ParameterLaw::point_mass(2.0).unwrap();
        assert_eq!(tilt_mean(&pm).unwrap().as_law(), Some(&pm));
    }

    #[test]
    fn continuous_tilt_matches_weighted_integral() {
        // ν ∝ x on U[1,2]: E_ν[1/X] = E[1]/E[X] = 1/1.5
        let u = ParameterLaw::uniform(1.0, 2.0).unwrap();
        let t = tilt_mean(&u).unwrap();
        assert!(t.as_law().is_none());
        assert!(close(t.inv_pow(1.0, 1).value(), 1.0 / 1.5, 1e-13));
        // entropy of density x/1.5 against U[1,2]: ∫ (x/1.5) ln(x/1.5) dx
        let oracle = {
            let f = |x: f64| (x * x / 2.0) * (x / 1.5).ln() - x * x / 4.0;
            (f(2.0) - f(1.0)) / 1.5
        };
        assert!(close(t.entropy().value(), oracle, 1e-12), "{:?} vs {oracle}", t.entropy());
        // ratio tilt at the ess_inf adds a pole: E_ν[(X-1)^{-3}] finite iff k >= 4
        let tp = tilt_ratio(&poly123(), -1.0, 0.5).unwrap();
        assert!(tp.inverse_moment_finite(2));
        assert!(!tp.inverse_moment_finite(3));
    }

    #[test]
    fn probabilities_are_validated() {
        assert!(ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.4)]).is_err());
        assert!(ParameterLaw::discrete(vec![(1.0, 0.5), (-2.0, 0.5)]).is_err());
        assert!(ParameterLaw::uniform(2.0, 1.0).is_err());
        let law = ParameterLaw::discrete(vec![(2.0, 0.5), (1.0, 0.5 + 5e-13)]).unwrap();
        let atoms = law.atoms().unwrap();
        assert_eq!(atoms[0].0, 1.0);
        assert!(close(atoms.iter().map(|a| a.1).sum::<f64>(), 1.0, 1e-15));
    }

    #[test]
    fn law_spec_round_trip() {
        let json = r#"{"type":"poly","lo":1.0,"hi":2.0,"k":3}"#;
        let law: ParameterLaw = serde_json::from_str(json).unwrap();
        assert_eq!(law, poly123());
        let back = serde_json::to_string(&law).unwrap();
        assert_eq!(serde_json::from_str::<ParameterLaw>(&back).unwrap(), law);
        let law: ParameterLaw = serde_json::from_str(r#"{"type":"discrete","atoms":[[1.0,0.5],[2.0,0.5]]}"#).unwrap();
        assert_eq!(law, two_atoms());
        assert!(serde_json::from_str::<ParameterLaw>(r#"{"type":"uniform","lo":-1,"hi":1}"#).is_err());
    }
}
