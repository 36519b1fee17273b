mod common;

use cgmldp::lyapunov::{critical_lambdas, l_prime, lyapunov_exponent, stationary_l};
use cgmldp::{Boundary, Direction, Kind, Marginal, ParameterLaw};
use common::*;
use proptest::prelude::*;

const KINDS: [Kind; 2] = [Kind::Quenched, Kind::Annealed];

fn total(alpha: &ParameterLaw, beta: &ParameterLaw) -> f64 {
    alpha.ess_inf() + beta.ess_inf()
}

fn l(kind: Kind, alpha: &ParameterLaw, beta: &ParameterLaw, d: Direction, lambda: f64) -> f64 {
    lyapunov_exponent(kind, alpha, beta, d, lambda).unwrap().value.value()
}

/// `F(z, λ)` for discrete laws by direct summation.
fn objective(kind: Kind, alpha: &ParameterLaw, beta: &ParameterLaw, d: Direction, z: f64, lambda: f64) -> f64 {
    let ra = |a: f64| (a + z + lambda) / (a + z);
    let rb = |b: f64| (b - z) / (b - z - lambda);
    match kind {
        Kind::Quenched => d.s * finite_sum(alpha, |a| ra(a).ln()) + d.t * finite_sum(beta, |b| rb(b).ln()),
        Kind::Annealed => d.s * finite_sum(alpha, ra).ln() + d.t * finite_sum(beta, rb).ln(),
    }
}

/// `∂_z F(z, λ)` for discrete laws.
fn objective_slope(kind: Kind, alpha: &ParameterLaw, beta: &ParameterLaw, d: Direction, z: f64, lambda: f64) -> f64 {
    match kind {
        Kind::Quenched => {
            d.s * finite_sum(alpha, |a| 1.0 / (a + z + lambda) - 1.0 / (a + z))
                + d.t * finite_sum(beta, |b| 1.0 / (b - z - lambda) - 1.0 / (b - z))
        }
        Kind::Annealed => {
            let ea = finite_sum(alpha, |a| (a + z + lambda) / (a + z));
            let eb = finite_sum(beta, |b| (b - z) / (b - z - lambda));
            -d.s * finite_sum(alpha, |a| lambda / (a + z).powi(2)) / ea
                + d.t * finite_sum(beta, |b| lambda / (b - z - lambda).powi(2)) / eb
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nondecreasing_and_convex(alpha in any_law(), beta in any_law(), d in direction()) {
        let top = total(&alpha, &beta);
        let grid: Vec<f64> = (1..40).map(|k| top * k as f64 / 40.0).collect();
        for kind in KINDS {
            let vals: Vec<f64> = grid.iter().map(|&x| l(kind, &alpha, &beta, d, x)).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0));
            }
            for w in vals.windows(3) {
                prop_assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9 * w[1].abs().max(1.0), "{kind:?} {w:?}");
            }
        }
    }

    #[test]
    fn homogeneous_in_direction(alpha in any_law(), beta in any_law(), d in direction(), c in 0.1f64..10.0, frac in 0.05f64..0.95) {
        let lambda = frac * total(&alpha, &beta);
        for kind in KINDS {
            let base = l(kind, &alpha, &beta, d, lambda);
            prop_assert!(close(l(kind, &alpha, &beta, d.scaled(c), lambda), c * base, 1e-10));
        }
    }

    #[test]
    fn superadditive_in_direction(alpha in any_law(), beta in any_law(), d1 in direction(), d2 in direction(), frac in 0.05f64..0.95) {
        let lambda = frac * total(&alpha, &beta);
        let joint = dir(d1.s + d2.s, d1.t + d2.t);
        for kind in KINDS {
            let parts = l(kind, &alpha, &beta, d1, lambda) + l(kind, &alpha, &beta, d2, lambda);
            prop_assert!(l(kind, &alpha, &beta, joint, lambda) >= parts * (1.0 - 1e-10));
        }
    }

    #[test]
    fn annealed_dominates_quenched(alpha in any_law(), beta in any_law(), d in direction(), frac in 0.05f64..0.95) {
        let lambda = frac * total(&alpha, &beta);
        let q = l(Kind::Quenched, &alpha, &beta, d, lambda);
        let a = l(Kind::Annealed, &alpha, &beta, d, lambda);
        if alpha.is_degenerate() && beta.is_degenerate() {
            prop_assert!(close(a, q, 1e-12));
        } else {
            prop_assert!(a > q);
        }
    }

    #[test]
    fn interior_first_order_condition(alpha in discrete_law(), beta in discrete_law(), d in direction(), frac in 0.01f64..0.99) {
        let lambda = frac * total(&alpha, &beta);
        for kind in KINDS {
            let p = lyapunov_exponent(kind, &alpha, &beta, d, lambda).unwrap();
            let f = objective(kind, &alpha, &beta, d, p.zhat, lambda);
            prop_assert!(close(p.value.value(), f, 1e-12));
            if p.boundary == Boundary::Interior {
                let slope = objective_slope(kind, &alpha, &beta, d, p.zhat, lambda);
                prop_assert!(slope.abs() <= 1e-8, "{kind:?}: slope {slope}");
            }
        }
    }

    #[test]
    fn minimizer_slides_slower_than_lambda(alpha in any_law(), beta in any_law(), d in direction()) {
        for kind in KINDS {
            let crit = critical_lambdas(kind, &alpha, &beta, d);
            if crit.lambda0 <= 0.0 {
                continue;
            }
            let h = crit.lambda0 * 1e-4;
            let zs: Vec<f64> = (1..20)
                .map(|k| lyapunov_exponent(kind, &alpha, &beta, d, crit.lambda0 * k as f64 / 20.0).unwrap().zhat)
                .collect();
            for w in zs.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-12);
            }
            for k in 1..20 {
                let x = crit.lambda0 * k as f64 / 20.0;
                let z = |lambda| lyapunov_exponent(kind, &alpha, &beta, d, lambda).unwrap().zhat;
                let slope = (z(x + h) - z(x - h)) / (2.0 * h);
                prop_assert!(slope > -1.0 - 1e-6 && slope < 1e-6, "{kind:?} at {x}: {slope}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences(alpha in any_law(), beta in any_law(), d in direction(), frac in 0.05f64..0.95) {
        let lambda = frac * total(&alpha, &beta);
        let h = 1e-6 * total(&alpha, &beta);
        for kind in KINDS {
            let fd = (l(kind, &alpha, &beta, d, lambda + h) - l(kind, &alpha, &beta, d, lambda - h)) / (2.0 * h);
            let exact = l_prime(kind, &alpha, &beta, d, lambda).unwrap();
            prop_assert!(close(exact, fd, 1e-5), "{kind:?}: {exact} vs {fd}");
        }
    }
}

#[test]
fn zero_lambda_and_stationary_version() {
    let half = delta(0.5);
    let d = dir(1.0, 1.0);
    for kind in KINDS {
        let p = lyapunov_exponent(kind, &half, &half, d, 0.0).unwrap();
        assert_eq!(p.value.value(), 0.0);
    }
    // L_z(λ) = s log((a+z+λ)/(a+z)) + t log((b-z)/(b-z-λ)) for point masses
    let v = stationary_l(&half, &half, 0.1, d, 0.2).unwrap().value();
    let expected = (0.8f64 / 0.6).ln() + (0.4f64 / 0.2).ln();
    assert!(close(v, expected, 1e-14));
    assert!(stationary_l(&half, &half, 0.1, d, 0.4).is_err());
}
