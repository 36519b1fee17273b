//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints its own PASS/FAIL line.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cgmldp::annealed_entropy::{entropy_decomposition_residual, left_tail_bound, tilt_objective};
use cgmldp::lattice_sim::{
    burke_check, mc_left_tail_estimate, mc_shape_estimate, passage_times, sample_env, sample_weights, Mode, WeightGrid,
};
use cgmldp::lyapunov::l_prime;
use cgmldp::rate::{closed_form_j_homogeneous, duality_check, expansion, quenched_j, right_tail};
use cgmldp::{phase_portrait, shape_function, Direction, Kind, Marginal, ParameterLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn delta(x: f64) -> ParameterLaw {
    ParameterLaw::point_mass(x).unwrap()
}

fn dir(s: f64, t: f64) -> Direction {
    Direction::new(s, t).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn homogeneous_closed_form() -> Outcome {
    let start = Instant::now();
    let half = delta(0.5);
    let d = dir(1.0, 1.0);
    let mut worst: f64 = 0.0;
    for k in 1..=50 {
        let r = 4.0 + 16.0 * k as f64 / 50.0;
        let j = quenched_j(&half, &half, d, r).unwrap().value.value();
        worst = worst.max((j - closed_form_j_homogeneous(1.0, d, r).unwrap()).abs());
    }
    check(worst <= 1e-6, || format!("max deviation {worst:e}"))?;
    let at_g = quenched_j(&half, &half, d, 4.0).unwrap().value.value();
    check(at_g == 0.0, || format!("J(4) = {at_g:e}"))?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("max |J - closed form| = {worst:.1e}"))
}

fn shape_values() -> Outcome {
    let half = delta(0.5);
    let (g, _) = shape_function(&half, &half, dir(1.0, 1.0));
    check((g - 4.0).abs() <= 1e-10, || format!("g(1,1) = {g}"))?;
    let d = dir(1.0, 9.0);
    let (g21, _) = shape_function(&delta(2.0), &delta(1.0), d);
    check((g21 - 16.0 / 3.0).abs() <= 1e-10, || format!("g_(2,1)(1,9) = {g21}"))?;
    let (g11, _) = shape_function(&delta(1.0), &delta(1.0), d);
    check((g11 - 8.0).abs() <= 1e-10, || format!("g_(1,1)(1,9) = {g11}"))?;

    // α_p = p δ₁ + (1-p) δ₂ against β = δ₁
    let values: Vec<f64> = (0..=1000)
        .map(|k| {
            let p = k as f64 / 1000.0;
            let alpha = ParameterLaw::discrete(vec![(1.0, p), (2.0, 1.0 - p)]).unwrap();
            shape_function(&alpha, &delta(1.0), d).0
        })
        .collect();
    let inf = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    check((inf - 16.0 / 3.0).abs() <= 1e-10, || format!("inf over p = {inf}"))?;
    check((sup - 8.0).abs() <= 1e-10, || format!("sup over p = {sup}"))?;
    let in_gap: Vec<f64> = values.iter().cloned().filter(|g| *g > 5.34 && *g < 5.5).collect();
    check(in_gap.is_empty(), || format!("{} values inside (5.34, 5.5)", in_gap.len()))?;
    let above = values.iter().cloned().filter(|g| *g >= 5.5).fold(f64::INFINITY, f64::min);
    Ok(format!("inf {inf:.6}, sup {sup:.6}, smallest value above the gap {above:.4}"))
}

fn phase_values() -> Outcome {
    let p = phase_portrait(&ParameterLaw::poly(1.0, 2.0, 3).unwrap(), &delta(1.0), dir(1.0, 1.0));
    let c1 = p.c1.value();
    check((c1 - 0.125).abs() <= 1e-12, || format!("c1 = {c1}"))?;
    check(p.c2.is_infinite(), || format!("c2 = {}", p.c2))?;
    Ok(format!("c1 = {c1}, c2 = {}", p.c2))
}

fn duality() -> Outcome {
    let start = Instant::now();
    let mix = ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
    let configs = [
        (delta(0.5), delta(0.5), dir(1.0, 1.0)),
        (delta(1.0), delta(2.0), dir(1.0, 2.0)),
        (mix, delta(1.0), dir(1.0, 1.0)),
    ];
    let mut worst: f64 = 0.0;
    for (alpha, beta, d) in &configs {
        let total = alpha.ess_inf() + beta.ess_inf();
        for kind in [Kind::Quenched, Kind::Annealed] {
            for k in 1..=9 {
                let lambda = total * k as f64 / 10.0;
                let sample = duality_check(kind, alpha, beta, *d, lambda).map_err(|e| e.to_string())?;
                worst = worst.max(sample.residual);
            }
        }
    }
    check(worst <= 1e-6, || format!("max residual {worst:e}"))?;
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("max residual {worst:.1e} over 54 points"))
}

fn derivative_identities() -> Outcome {
    let mix = ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
    let poly = ParameterLaw::poly(1.0, 2.0, 3).unwrap();
    let configs = [
        (delta(0.5), delta(0.5), dir(1.0, 1.0)),
        (mix.clone(), delta(1.0), dir(1.0, 1.0)),
        (poly.clone(), poly, dir(1.0, 3.0)),
    ];
    let (mut worst_l0, mut worst_dj, mut worst_g): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (alpha, beta, d) in &configs {
        let (g, _) = shape_function(alpha, beta, *d);
        for kind in [Kind::Quenched, Kind::Annealed] {
            let slope = l_prime(kind, alpha, beta, *d, 1e-9).map_err(|e| e.to_string())?;
            worst_l0 = worst_l0.max((slope - g).abs());
            let j = |r: f64| right_tail(kind, alpha, beta, *d, r).unwrap();
            for k in 1..=20 {
                let r = g + 0.1 * k as f64;
                let h = 1e-5;
                let dj = (j(r + h).value.value() - j(r - h).value.value()) / (2.0 * h);
                worst_dj = worst_dj.max((dj - j(r).lambda_star).abs());
            }
            // J grows like ε^{3/2} at worst, so the quotient is O(h^{1/2})
            let h = 1e-10;
            worst_g = worst_g.max((j(g + h).value.value() - j(g).value.value()) / h);
        }
    }
    check(worst_l0 <= 1e-6, || format!("|L'(0+) - g| = {worst_l0:e}"))?;
    check(worst_dj <= 1e-5, || format!("|J' - λ*| = {worst_dj:e}"))?;
    check(worst_g <= 1e-4, || format!("J'(g+) = {worst_g:e}"))?;
    Ok(format!("|L'(0+)-g| {worst_l0:.1e}, |J'-λ*| {worst_dj:.1e}, J'(g+) {worst_g:.1e}"))
}

fn expansions() -> Outcome {
    let start = Instant::now();
    let half = delta(0.5);
    let d = dir(1.0, 1.0);
    let mut concave = Vec::new();
    for eps in [1e-3, 3e-3, 1e-2] {
        let ratio = quenched_j(&half, &half, d, 4.0 + eps).unwrap().value.value() / eps.powf(1.5);
        check((0.30..=0.37).contains(&ratio), || format!("J(4+{eps})/ε^1.5 = {ratio}"))?;
        concave.push(ratio);
    }

    let poly = ParameterLaw::poly(1.0, 2.0, 3).unwrap();
    let d = dir(1.0, 10.0);
    let report = expansion(Kind::Quenched, &poly, &delta(1.0), d).map_err(|e| e.to_string())?;
    check(report.region.is_linear() && report.exponent == 2.0, || format!("linear case report {report:?}"))?;
    let coef = report.coefficient.ok_or("linear case has no coefficient")?;
    let (g, _) = shape_function(&poly, &delta(1.0), d);
    let eps = 1e-2;
    let linear = quenched_j(&poly, &delta(1.0), d, g + eps).unwrap().value.value() / (eps * eps) / coef;
    check((linear - 1.0).abs() <= 0.15, || format!("linear ratio {linear}"))?;

    // a two-point law whose atoms are far apart, so the quadratic regime is
    // already visible at ε = 1e-2
    let two = ParameterLaw::discrete(vec![(0.5, 0.5), (3.0, 0.5)]).unwrap();
    let d = dir(1.0, 1.0);
    let report = expansion(Kind::Annealed, &two, &two, d).map_err(|e| e.to_string())?;
    check(report.exponent == 2.0, || format!("annealed report {report:?}"))?;
    let coef = report.coefficient.ok_or("annealed case has no coefficient")?;
    let (g, _) = shape_function(&two, &two, d);
    let annealed = right_tail(Kind::Annealed, &two, &two, d, g + eps).unwrap().value.value() / (eps * eps) / coef;
    check((annealed - 1.0).abs() <= 0.15, || format!("annealed ratio {annealed}"))?;
    within_time(start, Duration::from_secs(30))?;
    Ok(format!(
        "concave ratios {:.4}/{:.4}/{:.4}, linear {linear:.3}, annealed {annealed:.3}",
        concave[0], concave[1], concave[2]
    ))
}

fn random_tilt(law: &ParameterLaw, rng: &mut ChaCha8Rng) -> ParameterLaw {
    let atoms = law.atoms().unwrap();
    let w: Vec<f64> = atoms.iter().map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    ParameterLaw::discrete(atoms.iter().zip(&w).map(|((x, _), w)| (*x, w / total)).collect()).unwrap()
}

fn entropy_decomposition() -> Outcome {
    let configs = [
        (
            ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
            ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
            dir(1.0, 1.0),
        ),
        (ParameterLaw::discrete(vec![(0.5, 0.3), (2.0, 0.7)]).unwrap(), delta(1.0), dir(1.0, 2.0)),
        (
            ParameterLaw::discrete(vec![(1.0, 0.2), (1.5, 0.5), (3.0, 0.3)]).unwrap(),
            ParameterLaw::discrete(vec![(0.8, 0.6), (2.0, 0.4)]).unwrap(),
            dir(2.0, 1.0),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut violations) = (0.0f64, 0usize);
    for (alpha, beta, d) in &configs {
        let (g, _) = shape_function(alpha, beta, *d);
        for bump in [0.1, 0.5, 2.0] {
            let r = g + bump;
            worst = worst.max(entropy_decomposition_residual(alpha, beta, *d, r).map_err(|e| e.to_string())?);
            let annealed = right_tail(Kind::Annealed, alpha, beta, *d, r).unwrap().value.value();
            for _ in 0..100 {
                let (nu1, nu2) = (random_tilt(alpha, &mut rng), random_tilt(beta, &mut rng));
                let bound = tilt_objective(alpha, beta, &nu1, &nu2, *d, r).map_err(|e| e.to_string())?;
                if annealed > bound.value() + 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    check(worst <= 1e-6, || format!("max residual {worst:e}"))?;
    check(violations == 0, || format!("{violations} random tilts beat the annealed rate"))?;
    Ok(format!("max residual {worst:.1e}, 900 random tilts respect the bound"))
}

fn left_tail() -> Outcome {
    let alpha = ParameterLaw::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
    let d = dir(1.0, 9.0);
    let gap = left_tail_bound(&alpha, &delta(1.0), d, 5.4, 5.5).map_err(|e| e.to_string())?;
    check(gap.is_infinite(), || format!("bound on (5.4, 5.5) = {gap}"))?;
    let below = left_tail_bound(&alpha, &delta(1.0), d, 5.3, 5.4).map_err(|e| e.to_string())?;
    check(below.is_finite() && below.value() <= 2f64.ln() + 1e-6, || format!("bound on (5.3, 5.4) = {below}"))?;
    Ok(format!("(5.4,5.5) -> {gap}, (5.3,5.4) -> {:.6}", below.value()))
}

fn burke() -> Outcome {
    let start = Instant::now();
    let half = delta(0.5);
    let report = burke_check(&half, &half, 0.0, 20, 20, 2000, 20240601).map_err(|e| e.to_string())?;
    check(report.means_pass, || "increment means off".into())?;
    check(report.correlations_pass, || format!("correlations {:?}", report.correlations))?;
    let again = burke_check(&half, &half, 0.0, 20, 20, 2000, 20240601).unwrap();
    check(again == report, || "re-run differs".into())?;
    within_time(start, Duration::from_secs(5))?;
    let worst =
        report.row_increments.iter().chain(&report.column_increments).map(|s| s.z_score.abs()).fold(0.0, f64::max);
    Ok(format!("max mean |z| {worst:.2}, max correlation |z| {:.2}", report.correlations.max_abs_z))
}

/// Maximum over all up-right paths, summing weights in path order.
fn exhaustive_lpp(grid: &WeightGrid) -> f64 {
    fn walk(grid: &WeightGrid, i: usize, j: usize, acc: f64) -> f64 {
        let acc = acc + grid.weight(i, j);
        if i == grid.m && j == grid.n {
            return acc;
        }
        let mut best = f64::NEG_INFINITY;
        if i < grid.m {
            best = best.max(walk(grid, i + 1, j, acc));
        }
        if j < grid.n {
            best = best.max(walk(grid, i, j + 1, acc));
        }
        best
    }
    walk(grid, 1, 1, 0.0)
}

fn simulation() -> Outcome {
    let start = Instant::now();
    let half = delta(0.5);
    let d = dir(1.0, 1.0);
    let est = mc_shape_estimate(&half, &half, d, 200, 200, 7, Mode::Quenched).map_err(|e| e.to_string())?;
    check((3.5..=4.2).contains(&est.mean), || format!("shape estimate {}", est.mean))?;

    let alpha = ParameterLaw::discrete(vec![(0.5, 0.5), (1.5, 0.5)]).unwrap();
    let env = sample_env(&alpha, &ParameterLaw::uniform(0.2, 1.0).unwrap(), 4, 4, 99, Mode::Quenched).unwrap();
    let mut mismatches = 0;
    for replica in 0..100 {
        let grid = sample_weights(&env, replica);
        if passage_times(&grid).corner() != exhaustive_lpp(&grid) {
            mismatches += 1;
        }
    }
    check(mismatches == 0, || format!("{mismatches} of 100 grids differ from the path oracle"))?;

    let law = delta(0.62);
    let rates: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&n| mc_left_tail_estimate(&law, &law, d, 3.0, n, 4000, 11, Mode::Quenched).unwrap().value())
        .collect();
    check(rates[0] < rates[1] && rates[1] < rates[2], || format!("left-tail rates {rates:?}"))?;
    within_time(start, Duration::from_secs(60))?;
    Ok(format!(
        "shape {:.4} ± {:.4}, DP = oracle on 100 grids, left-tail rates {:.4} < {:.4} < {:.4}",
        est.mean, est.stderr, rates[0], rates[1], rates[2]
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("homogeneous closed form", homogeneous_closed_form),
        ("shape values", shape_values),
        ("phase portrait", phase_values),
        ("duality", duality),
        ("derivative identities", derivative_identities),
        ("expansions", expansions),
        ("entropy decomposition", entropy_decomposition),
        ("left-tail bound", left_tail),
        ("burke property", burke),
        ("simulation vs theory", simulation),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({took:.2?}) {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({took:.2?}) {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
