//! Entropy link between annealed and quenched right tails.
//!
//! An annealed deviation can be produced by first tilting the parameter laws
//! to `(ν₁, ν₂)` at entropy cost `s H(ν₁|α) + t H(ν₂|β)` and then deviating
//! quenched-ly under the tilted laws. The optimal tilts are explicit ratio
//! tilts at the annealed maximizer `(λ*, z*)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::lyapunov::Kind;
use crate::numerics::nelder_mead::NelderMead;
use crate::param_laws::{relative_entropy, tilt_mean, tilt_ratio_at_offset, Marginal, ParameterLaw, TiltedLaw};
use crate::rate::{quenched_i, right_tail_with_inner};
use crate::shape::{shape_function, Direction};

/// Grid spacing of the simplex search in [`left_tail_bound`].
pub const GRID_STEP: f64 = 1e-3;
/// Cap on the number of product-grid points; the spacing is coarsened to fit.
pub const MAX_GRID_POINTS: usize = 200_000;
/// Margin for the open constraint `g ∈ (x, y)`.
pub const CONSTRAINT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TiltPair {
    #[serde(skip)]
    pub nu1: TiltedLaw,
    #[serde(skip)]
    pub nu2: TiltedLaw,
    pub h1: ExtReal,
    pub h2: ExtReal,
    pub lambda_star: f64,
    pub z_star: f64,
}

/// Optimal tilts `dν₁/dα ∝ (a+z*+λ*)/(a+z*)` and
/// `dν₂/dβ ∝ (b-z*)/(b-z*-λ*)` at the annealed maximizer for `r > g`.
pub fn optimal_tilts(alpha: &ParameterLaw, beta: &ParameterLaw, dir: Direction, r: f64) -> Result<TiltPair> {
    let (eval, inner) = right_tail_with_inner(Kind::Annealed, alpha, beta, dir, r)?;
    let inner = inner.ok_or_else(|| Error::domain(format!("optimal tilts need r above the shape value, got r={r}")))?;
    let nu1 = tilt_ratio_at_offset(alpha, inner.ca, inner.lambda)?;
    let nu2 = tilt_ratio_at_offset(beta, inner.cb, inner.lambda)?;
    Ok(TiltPair { h1: nu1.entropy(), h2: nu2.entropy(), nu1, nu2, lambda_star: eval.lambda_star, z_star: eval.z_star })
}

/// `|𝕁(r) - [𝐈^{ν₁,ν₂}(r) + s H₁ + t H₂]|` at the optimal tilts.
pub fn entropy_decomposition_residual(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    dir: Direction,
    r: f64,
) -> Result<f64> {
    let annealed = right_tail_with_inner(Kind::Annealed, alpha, beta, dir, r)?.0.value;
    let pair = optimal_tilts(alpha, beta, dir, r)?;
    let quenched = quenched_i(&pair.nu1, &pair.nu2, dir, r)?;
    let total = quenched + pair.h1.scale(dir.s) + pair.h2.scale(dir.t);
    match (annealed.to_finite(), total.to_finite()) {
        (Some(a), Some(b)) => Ok((a - b).abs()),
        (None, None) => Ok(0.0),
        _ => Ok(f64::INFINITY),
    }
}

/// `𝐈^{ν₁,ν₂}(r) + s H(ν₁|α) + t H(ν₂|β)` for arbitrary discrete tilts; an
/// upper bound on `𝕁^{α,β}(r)` whatever `(ν₁, ν₂)` is.
pub fn tilt_objective(
    alpha: &ParameterLaw,
    beta: &ParameterLaw,
    nu1: &ParameterLaw,
    nu2: &ParameterLaw,
    dir: Direction,
    r: f64,
) -> Result<ExtReal> {
    let h1 = relative_entropy(nu1, alpha)?;
    let h2 = relative_entropy(nu2, beta)?;
    if h1.is_infinite() || h2.is_infinite() {
        return Ok(ExtReal::INFINITY);
    }
    Ok(quenched_i(nu1, nu2, dir, r)? + h1.scale(dir.s) + h2.scale(dir.t))
}

fn discrete_atoms(law: &ParameterLaw, name: &str) -> Result<Vec<(f64, f64)>> {
    law.atoms().ok_or_else(|| Error::invalid(format!("`{name}` must be a point mass or finite discrete law")))
}

/// `Σ w log(w/p)` over the support of `w`.
fn entropy_of_weights(weights: &[f64], base: &[(f64, f64)]) -> f64 {
    weights.iter().zip(base).filter(|(w, _)| **w > 0.0).map(|(w, (_, p))| w * (w / p).ln()).sum::<f64>().max(0.0)
}

fn law_from_weights(weights: &[f64], base: &[(f64, f64)]) -> Option<ParameterLaw> {
    let atoms: Vec<(f64, f64)> =
        weights.iter().zip(base).filter(|(w, _)| **w > 0.0).map(|(w, (x, _))| (*x, *w)).collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    if atoms.is_empty() || !(total > 0.0) {
        return None;
    }
    ParameterLaw::discrete(atoms.into_iter().map(|(x, w)| (x, w / total)).collect()).ok()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All weight vectors with entries in `{0, 1/k, …, 1}` summing to one.
fn simplex_grid(dim: usize, k: usize) -> Vec<Vec<f64>> {
    fn fill(dim: usize, left: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / k as f64).collect());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            fill(dim, left - c, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(dim, k, k, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Number of grid divisions per coordinate, coarsened until the product grid fits.
fn grid_divisions(na: usize, nb: usize) -> usize {
    let mut k = (1.0 / GRID_STEP).round() as usize;
    while k > 1 && binomial(k + na - 1, na - 1) * binomial(k + nb - 1, nb - 1) > MAX_GRID_POINTS as f64 {
        k = (k as f64 * 0.9) as usize;
    }
    k
}

struct TailProblem<'a> {
    a_atoms: &'a [(f64, f64)],
    b_atoms: &'a [(f64, f64)],
    dir: Direction,
    lo: f64,
    hi: f64,
}

impl TailProblem<'_> {
    /// Entropy cost of the weight pair, `+∞` off the constraint set.
    fn cost(&self, wa: &[f64], wb: &[f64]) -> f64 {
        let (Some(nu1), Some(nu2)) = (law_from_weights(wa, self.a_atoms), law_from_weights(wb, self.b_atoms)) else {
            return f64::INFINITY;
        };
        let (g, _) = shape_function(&nu1, &nu2, self.dir);
        if !(g > self.lo && g < self.hi) {
            return f64::INFINITY;
        }
        self.dir.s * entropy_of_weights(wa, self.a_atoms) + self.dir.t * entropy_of_weights(wb, self.b_atoms)
    }

    /// Nelder–Mead on the face spanned by the support of `(wa, wb)`.
    fn refine(&self, wa: &[f64], wb: &[f64], step: f64) -> f64 {
        let face_a: Vec<usize> = (0..wa.len()).filter(|&i| wa[i] > 0.0).collect();
        let face_b: Vec<usize> = (0..wb.len()).filter(|&i| wb[i] > 0.0).collect();
        // the last support atom of each law carries the remaining mass
        let free_a = face_a.len() - 1;
        let free_b = face_b.len() - 1;
        if free_a + free_b == 0 {
            return self.cost(wa, wb);
        }
        let x0: Vec<f64> =
            face_a[..free_a].iter().map(|&i| wa[i]).chain(face_b[..free_b].iter().map(|&i| wb[i])).collect();
        let expand = |x: &[f64]| -> Option<(Vec<f64>, Vec<f64>)> {
            let mut va = vec![0.0; wa.len()];
            let mut vb = vec![0.0; wb.len()];
            let (xa, xb) = x.split_at(free_a);
            for (face, xs, v) in [(&face_a, xa, &mut va), (&face_b, xb, &mut vb)] {
                let used: f64 = xs.iter().sum();
                if xs.iter().any(|&w| w <= 0.0) || used >= 1.0 {
                    return None;
                }
                for (&i, &w) in face.iter().zip(xs) {
                    v[i] = w;
                }
                v[*face.last().unwrap()] = 1.0 - used;
            }
            Some((va, vb))
        };
        let mut f = |x: &[f64]| match expand(x) {
            Some((va, vb)) => self.cost(&va, &vb),
            None => f64::INFINITY,
        };
        let nm = NelderMead { xtol: 1e-8, max_evals: 4000 };
        nm.minimize(&mut f, &x0, 0.5 * step).1
    }
}

/// Infimum of `s H(ν₁|α) + t H(ν₂|β)` over discrete tilts with
/// `g_{ν₁,ν₂}(s,t) ∈ (x, y)`; `+∞` when no tilt reaches the interval.
///
/// Searches the product simplex on a grid (spacing [`GRID_STEP`], coarsened to
/// at most [`MAX_GRID_POINTS`] points) and refines the best grid point with
/// Nelder–Mead inside its face.
pub fn left_tail_bound(alpha: &ParameterLaw, beta: &ParameterLaw, dir: Direction, x: f64, y: f64) -> Result<ExtReal> {
    if !(x < y) {
        return Err(Error::invalid(format!("interval needs x < y, got ({x}, {y})")));
    }
    let a_atoms = discrete_atoms(alpha, "alpha")?;
    let b_atoms = discrete_atoms(beta, "beta")?;
    let (g, _) = shape_function(alpha, beta, dir);
    if g > x && g < y {
        return Ok(ExtReal::ZERO);
    }
    let problem =
        TailProblem { a_atoms: &a_atoms, b_atoms: &b_atoms, dir, lo: x + CONSTRAINT_MARGIN, hi: y - CONSTRAINT_MARGIN };
    let k = grid_divisions(a_atoms.len(), b_atoms.len());
    let grid_a = simplex_grid(a_atoms.len(), k);
    let grid_b = simplex_grid(b_atoms.len(), k);
    let nb = grid_b.len();
    let best = (0..grid_a.len() * nb)
        .into_par_iter()
        .map(|idx| (problem.cost(&grid_a[idx / nb], &grid_b[idx % nb]), idx))
        .filter(|(v, _)| v.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let Some((grid_value, idx)) = best else {
        return Ok(ExtReal::INFINITY);
    };
    let refined = problem.refine(&grid_a[idx / nb], &grid_b[idx % nb], 1.0 / k as f64);
    Ok(ExtReal::new(grid_value.min(refined)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanTilt {
    #[serde(skip)]
    pub nu1: TiltedLaw,
    pub g_tilt: f64,
    pub g_base: f64,
    pub entropy: ExtReal,
}

/// Shape value after size-biasing `α` (`dν₁/dα ∝ a`), against the base shape.
pub fn mean_tilt_comparison(alpha: &ParameterLaw, beta: &ParameterLaw, dir: Direction) -> Result<MeanTilt> {
    if alpha.is_degenerate() {
        return Err(Error::invalid("`alpha` must be nondegenerate for the size-biased tilt"));
    }
    let nu1 = tilt_mean(alpha)?;
    let (g_tilt, _) = shape_function(&nu1, beta, dir);
    let (g_base, _) = shape_function(alpha, beta, dir);
    Ok(MeanTilt { entropy: nu1.entropy(), nu1, g_tilt, g_base })
}
