//! Strategies and independent oracles shared by the integration tests.
#![allow(dead_code)]

use cgmldp::{Direction, ParameterLaw};
use proptest::prelude::*;

pub fn delta(x: f64) -> ParameterLaw {
    ParameterLaw::point_mass(x).unwrap()
}

pub fn dir(s: f64, t: f64) -> Direction {
    Direction::new(s, t).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn direction() -> impl Strategy<Value = Direction> {
    (0.1f64..10.0, 0.1f64..10.0).prop_map(|(s, t)| dir(s, t))
}

/// Discrete law with 1 to 4 atoms in `[0.2, 3]`.
pub fn discrete_law() -> impl Strategy<Value = ParameterLaw> {
    prop::collection::vec((0.2f64..3.0, 0.05f64..1.0), 1..=4).prop_map(|raw| {
        let total: f64 = raw.iter().map(|a| a.1).sum();
        ParameterLaw::discrete(raw.into_iter().map(|(x, w)| (x, w / total)).collect()).unwrap()
    })
}

pub fn interval_law() -> impl Strategy<Value = ParameterLaw> {
    interval_law_with_width(0.1)
}

/// Interval laws of width at least `min_width`. The antiderivative oracles
/// lose about `(lo/width)^k` in relative accuracy, so they need wide supports.
pub fn interval_law_with_width(min_width: f64) -> impl Strategy<Value = ParameterLaw> {
    prop_oneof![
        (0.2f64..2.0, min_width..2.0).prop_map(|(lo, w)| ParameterLaw::uniform(lo, lo + w).unwrap()),
        (0.2f64..2.0, min_width..2.0, 1u32..=4).prop_map(|(lo, w, k)| ParameterLaw::poly(lo, lo + w, k).unwrap()),
    ]
}

pub fn any_law() -> impl Strategy<Value = ParameterLaw> {
    prop_oneof![(0.2f64..3.0).prop_map(delta), discrete_law(), interval_law()]
}

/// Atoms of a law with a finite support, `(x, p)` pairs.
pub fn atoms(law: &ParameterLaw) -> Vec<(f64, f64)> {
    law.atoms().expect("discrete law")
}

/// `E[h(X)]` for a discrete law by direct summation.
pub fn finite_sum(law: &ParameterLaw, h: impl Fn(f64) -> f64) -> f64 {
    atoms(law).iter().map(|&(x, p)| p * h(x)).sum()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `∫_c^{c+w} (v - c)^k v^{-m} dv` via the binomial expansion of `(v - c)^k`.
fn poly_pole_integral(k: u32, m: u32, c: f64, w: f64) -> f64 {
    (0..=k)
        .map(|j| {
            let coef = binomial(k, j) * (-c).powi((k - j) as i32);
            let p = j as i32 - m as i32;
            let prim = |v: f64| if p == -1 { v.ln() } else { v.powi(p + 1) / f64::from(p + 1) };
            coef * (prim(c + w) - prim(c))
        })
        .sum()
}

/// `∫_0^w u^k ln(u + d) du`.
fn poly_log_integral(k: u32, d: f64, w: f64) -> f64 {
    (0..=k)
        .map(|j| {
            let coef = binomial(k, j) * (-d).powi((k - j) as i32);
            let n = f64::from(j + 1);
            let prim = |v: f64| v.powf(n) * (v.ln() / n - 1.0 / (n * n));
            coef * (prim(d + w) - prim(d))
        })
        .sum()
}

/// `(lo, hi, k)` of an interval law, with `k = 0` for the uniform law.
fn interval(law: &ParameterLaw) -> (f64, f64, u32) {
    match *law {
        ParameterLaw::UniformInterval { lo, hi } => (lo, hi, 0),
        ParameterLaw::PolyInterval { lo, hi, k } => (lo, hi, k),
        _ => panic!("not an interval law"),
    }
}

/// `E[(X + z)^{-m}]` from exact antiderivatives.
pub fn interval_inv_pow(law: &ParameterLaw, z: f64, m: u32) -> f64 {
    let (lo, hi, k) = interval(law);
    let w = hi - lo;
    f64::from(k + 1) / w.powi(k as i32 + 1) * poly_pole_integral(k, m, lo + z, w)
}

/// `E[log((X + z + λ)/(X + z))]` from exact antiderivatives.
pub fn interval_log_ratio(law: &ParameterLaw, z: f64, lambda: f64) -> f64 {
    let (lo, hi, k) = interval(law);
    let w = hi - lo;
    let c = lo + z;
    f64::from(k + 1) / w.powi(k as i32 + 1) * (poly_log_integral(k, c + lambda, w) - poly_log_integral(k, c, w))
}

/// All up-right paths from `(1,1)` to `(m,n)`, weights summed in path order.
pub fn exhaustive_lpp(m: usize, n: usize, weight: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn walk(m: usize, n: usize, i: usize, j: usize, acc: f64, weight: &dyn Fn(usize, usize) -> f64) -> f64 {
        let acc = acc + weight(i, j);
        if i == m && j == n {
            return acc;
        }
        let mut best = f64::NEG_INFINITY;
        if i < m {
            best = best.max(walk(m, n, i + 1, j, acc, weight));
        }
        if j < n {
            best = best.max(walk(m, n, i, j + 1, acc, weight));
        }
        best
    }
    walk(m, n, 1, 1, 0.0, weight)
}
