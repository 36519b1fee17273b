//! One function per subcommand, each producing a [`Table`].

use std::f64::consts::FRAC_PI_2;

use crate::annealed_entropy::{entropy_decomposition_residual, left_tail_bound, optimal_tilts};
use crate::error::{Error, Result};
use crate::lattice_sim::{
    burke_check, corner_samples, mc_left_tail_estimate, mc_lyapunov_estimate, mc_shape_estimate, mc_tail_estimate,
    passage_times, replicate_records, sample_env, sample_weights, tasep_positions, write_replicates_csv, IncrementStat,
    Mode,
};
use crate::lyapunov::{critical_lambdas, lyapunov_exponent, stationary_l, Kind};
use crate::param_laws::ParameterLaw;
use crate::rate::{
    closed_form_j_homogeneous, closed_form_j_twopoint, closed_form_j_uniform, duality_check, expansion, right_tail,
    tasep_rate,
};
use crate::shape::{lambda_max, phase_portrait, shape_function, stationary_shape, Direction};

use super::config::{KindSelection, RunConfig};
use super::output::{Cell, Table};

/// Agreement required between an optimizer value and a closed form.
const CLOSED_FORM_TOL: f64 = 1e-6;

fn kinds(sel: KindSelection) -> &'static [Kind] {
    match sel {
        KindSelection::Quenched => &[Kind::Quenched],
        KindSelection::Annealed => &[Kind::Annealed],
        KindSelection::Both => &[Kind::Quenched, Kind::Annealed],
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Quenched => "quenched",
        Kind::Annealed => "annealed",
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Quenched => "quenched",
        Mode::Annealed => "annealed",
    }
}

fn debug_name(x: impl std::fmt::Debug) -> Cell {
    Cell::Text(format!("{x:?}"))
}

fn require_nonempty<'a>(field: &str, xs: &'a [f64]) -> Result<&'a [f64]> {
    if xs.is_empty() {
        return Err(Error::invalid(format!("field `{field}` must be a nonempty list")));
    }
    Ok(xs)
}

pub fn shape(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let mut table = Table::new(&["sample", "s", "t", "g", "zeta"]);
    for &dir in &cfg.directions {
        let (g, zeta) = shape_function(alpha, beta, dir);
        table.push(vec!["direction".into(), dir.s.into(), dir.t.into(), g.into(), zeta.into()]);
        if let Some(z) = cfg.z {
            let gz = stationary_shape(alpha, beta, z, dir)?;
            table.push(vec!["stationary".into(), dir.s.into(), dir.t.into(), gz.into(), z.into()]);
        }
    }
    // points (s,t)/g(s,t) on the level set g = 1, swept by angle
    let k = cfg.level_set_samples;
    for i in 0..k {
        let theta = FRAC_PI_2 * (i as f64 + 0.5) / k as f64;
        let dir = Direction::new(theta.cos(), theta.sin())?;
        let (g, zeta) = shape_function(alpha, beta, dir);
        table.push(vec!["level_set".into(), (dir.s / g).into(), (dir.t / g).into(), 1.0.into(), zeta.into()]);
    }
    Ok(table)
}

pub fn phase(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let mut table = Table::new(&["s", "t", "c1", "c2", "zeta", "region"]);
    for &dir in &cfg.directions {
        let p = phase_portrait(alpha, beta, dir);
        table.push(vec![dir.s.into(), dir.t.into(), p.c1.into(), p.c2.into(), p.zeta.into(), debug_name(p.region)]);
    }
    Ok(table)
}

pub fn lyapunov(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let lambdas = require_nonempty("lambdas", &cfg.lambdas)?;
    let mut table = Table::new(&["kind", "s", "t", "lambda", "value", "zhat", "boundary", "lambda1", "lambda2"]);
    for &dir in &cfg.directions {
        for &kind in kinds(cfg.kind) {
            let crit = critical_lambdas(kind, alpha, beta, dir);
            for &lambda in lambdas {
                let p = lyapunov_exponent(kind, alpha, beta, dir, lambda)?;
                table.push(vec![
                    kind_name(kind).into(),
                    dir.s.into(),
                    dir.t.into(),
                    lambda.into(),
                    p.value.into(),
                    p.zhat.into(),
                    debug_name(p.boundary),
                    crit.lambda1.into(),
                    crit.lambda2.into(),
                ]);
            }
        }
        if let Some(z) = cfg.z {
            for &lambda in lambdas {
                let value = stationary_l(alpha, beta, z, dir, lambda)?;
                table.push(vec![
                    "stationary".into(),
                    dir.s.into(),
                    dir.t.into(),
                    lambda.into(),
                    value.into(),
                    z.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]);
            }
        }
    }
    Ok(table)
}

/// Closed-form quenched `J` when the configuration admits one.
fn closed_form(alpha: &ParameterLaw, beta: &ParameterLaw, dir: Direction, r: f64) -> Option<Result<f64>> {
    if alpha != beta {
        return None;
    }
    match alpha {
        ParameterLaw::PointMass { x } => Some(closed_form_j_homogeneous(2.0 * x, dir, r)),
        ParameterLaw::FiniteDiscrete { atoms } if atoms.len() == 2 && dir.s == dir.t => {
            let ((c, p), (d, q)) = (atoms[0], atoms[1]);
            Some(closed_form_j_twopoint(p, q, c, d, dir.s, r))
        }
        ParameterLaw::UniformInterval { lo, hi } if dir.s == dir.t => {
            Some(closed_form_j_uniform(2.0 * lo, hi - lo, dir.s, r))
        }
        _ => None,
    }
}

pub fn rate(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let rs = require_nonempty("rs", &cfg.rs)?;
    let mut table = Table::new(&["kind", "s", "t", "r", "value", "lambda_star", "z_star", "regime", "closed_form"]);
    for &dir in &cfg.directions {
        let (g, _) = shape_function(alpha, beta, dir);
        for &kind in kinds(cfg.kind) {
            for &r in rs {
                let e = right_tail(kind, alpha, beta, dir, r)?;
                let mut reference = None;
                if kind == Kind::Quenched && r >= g {
                    if let Some(cf) = closed_form(alpha, beta, dir, r) {
                        let cf = cf?;
                        if (cf - e.value.value()).abs() > CLOSED_FORM_TOL {
                            return Err(Error::consistency(format!(
                                "J({r}) = {} from the optimizer but {cf} from the closed form",
                                e.value
                            )));
                        }
                        reference = Some(cf);
                    }
                }
                table.push(vec![
                    kind_name(kind).into(),
                    dir.s.into(),
                    dir.t.into(),
                    r.into(),
                    e.value.into(),
                    e.lambda_star.into(),
                    e.z_star.into(),
                    debug_name(e.regime),
                    reference.into(),
                ]);
            }
        }
    }
    Ok(table)
}

pub fn expand(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let mut table = Table::new(&[
        "kind",
        "s",
        "t",
        "region",
        "exponent",
        "coefficient",
        "moment_condition_met",
        "eps",
        "j",
        "prediction",
        "ratio",
    ]);
    for &dir in &cfg.directions {
        let (g, _) = shape_function(alpha, beta, dir);
        for &kind in kinds(cfg.kind) {
            let report = expansion(kind, alpha, beta, dir)?;
            for &eps in &cfg.eps {
                let j = right_tail(kind, alpha, beta, dir, g + eps)?.value.value();
                let prediction = report.coefficient.map(|c| c * eps.powf(report.exponent));
                table.push(vec![
                    kind_name(kind).into(),
                    dir.s.into(),
                    dir.t.into(),
                    debug_name(report.region),
                    report.exponent.into(),
                    report.coefficient.into(),
                    report.moment_condition_met.into(),
                    eps.into(),
                    j.into(),
                    prediction.into(),
                    prediction.map(|p| j / p).into(),
                ]);
            }
        }
    }
    Ok(table)
}

pub fn tilt(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let rs = require_nonempty("rs", &cfg.rs)?;
    let mut table = Table::new(&["s", "t", "r", "lambda_star", "z_star", "h1", "h2", "residual"]);
    for &dir in &cfg.directions {
        for &r in rs {
            let pair = optimal_tilts(alpha, beta, dir, r)?;
            let residual = entropy_decomposition_residual(alpha, beta, dir, r)?;
            if !(residual <= cfg.tolerance) {
                return Err(Error::consistency(format!(
                    "entropy decomposition residual {residual} at r = {r} exceeds {}",
                    cfg.tolerance
                )));
            }
            table.push(vec![
                dir.s.into(),
                dir.t.into(),
                r.into(),
                pair.lambda_star.into(),
                pair.z_star.into(),
                pair.h1.into(),
                pair.h2.into(),
                residual.into(),
            ]);
        }
    }
    Ok(table)
}

pub fn left_tail(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    if cfg.intervals.is_empty() {
        return Err(Error::invalid("field `intervals` must be a nonempty list of [x, y] pairs"));
    }
    let mut table = Table::new(&["s", "t", "x", "y", "bound"]);
    for &dir in &cfg.directions {
        for &(x, y) in &cfg.intervals {
            let bound = left_tail_bound(alpha, beta, dir, x, y)?;
            table.push(vec![dir.s.into(), dir.t.into(), x.into(), y.into(), bound.into()]);
        }
    }
    Ok(table)
}

pub fn simulate(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let (n, reps, seed, mode) = (cfg.n, cfg.reps, cfg.seed, cfg.mode);
    let mut table = Table::new(&[
        "estimator",
        "mode",
        "s",
        "t",
        "n",
        "reps",
        "seed",
        "param",
        "value",
        "stderr",
        "heavy_tail_warning",
    ]);
    let row = |estimator: &str, dir: Direction, param: Cell, value: Cell, stderr: Cell, warn: Cell| {
        vec![
            estimator.into(),
            mode_name(mode).into(),
            dir.s.into(),
            dir.t.into(),
            n.into(),
            reps.into(),
            Cell::Int(seed as i64),
            param,
            value,
            stderr,
            warn,
        ]
    };
    for &dir in &cfg.directions {
        let est = mc_shape_estimate(alpha, beta, dir, n, reps, seed, mode)?;
        table.push(row("shape", dir, Cell::Empty, est.mean.into(), est.stderr.into(), Cell::Empty));
        for &lambda in &cfg.lambdas {
            let est = mc_lyapunov_estimate(alpha, beta, dir, lambda, n, reps, seed, mode)?;
            table.push(row(
                "lyapunov",
                dir,
                lambda.into(),
                est.value.into(),
                Cell::Empty,
                est.heavy_tail_warning.into(),
            ));
        }
        let (g, _) = shape_function(alpha, beta, dir);
        for &r in &cfg.rs {
            let (name, value) = if r > g {
                ("right_tail", mc_tail_estimate(alpha, beta, dir, r, n, reps, seed, mode)?)
            } else {
                ("left_tail", mc_left_tail_estimate(alpha, beta, dir, r, n, reps, seed, mode)?)
            };
            table.push(row(name, dir, r.into(), value.into(), Cell::Empty, Cell::Empty));
        }
    }
    if let Some(path) = &cfg.replicates_output {
        let dir = cfg.directions[0];
        let samples = corner_samples(alpha, beta, dir, n, reps, seed, mode)?;
        let file =
            std::fs::File::create(path).map_err(|e| Error::invalid(format!("field `replicates_output`: {e}")))?;
        write_replicates_csv(file, &replicate_records(n, &samples))?;
    }
    Ok(table)
}

pub fn burke(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let z = cfg.z.ok_or_else(|| Error::invalid("missing field `z`"))?;
    let m = cfg.m.unwrap_or(cfg.n);
    let report = burke_check(alpha, beta, z, m, cfg.n, cfg.reps, cfg.seed)?;
    let mut table = Table::new(&["record", "index", "mean", "variance", "expected", "z_score", "pass"]);
    let mut push = |record: &str, s: &IncrementStat| {
        table.push(vec![
            record.into(),
            s.index.into(),
            s.mean.into(),
            s.variance.into(),
            s.expected_mean.into(),
            s.z_score.into(),
            s.pass.into(),
        ])
    };
    report.row_increments.iter().for_each(|s| push("row", s));
    report.column_increments.iter().for_each(|s| push("column", s));
    let c = &report.correlations;
    table.push(vec![
        "correlations".into(),
        c.pairs.into(),
        Cell::Empty,
        Cell::Empty,
        0.0.into(),
        c.max_abs_z.into(),
        report.correlations_pass.into(),
    ]);
    table.push(vec![
        "summary".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        (report.means_pass && report.correlations_pass).into(),
    ]);
    Ok(table)
}

pub fn tasep(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let times = require_nonempty("times", &cfg.times)?;
    let m = cfg.m.unwrap_or(cfg.n);
    let mut table = Table::new(&["record", "t", "i", "value", "unreliable"]);
    let env = sample_env(alpha, beta, m, cfg.n, cfg.seed, Mode::Quenched)?;
    let passage = passage_times(&sample_weights(&env, 0));
    for &t in times {
        let pos = tasep_positions(&passage, t)?;
        for (i, (&p, &u)) in pos.positions.iter().zip(&pos.unreliable).enumerate() {
            table.push(vec!["position".into(), t.into(), (i + 1).into(), Cell::Int(p), u.into()]);
        }
    }
    if let (Some(x), Some(y)) = (cfg.x, cfg.y) {
        for &kind in kinds(cfg.kind) {
            for &t in times {
                let rate = tasep_rate(kind, alpha, beta, x, y, t)?;
                let record = format!("rate_{}", kind_name(kind));
                table.push(vec![record.into(), t.into(), Cell::Empty, rate.into(), Cell::Empty]);
            }
        }
    }
    Ok(table)
}

pub fn duality(cfg: &RunConfig) -> Result<Table> {
    let (alpha, beta) = (cfg.alpha()?, cfg.beta()?);
    let total = lambda_max(alpha, beta);
    let lambdas: Vec<f64> =
        if cfg.lambdas.is_empty() { (1..10).map(|k| total * k as f64 / 10.0).collect() } else { cfg.lambdas.clone() };
    let mut table = Table::new(&["kind", "s", "t", "lambda", "transform", "exponent", "residual"]);
    let mut worst: f64 = 0.0;
    for &dir in &cfg.directions {
        for &kind in kinds(cfg.kind) {
            for &lambda in &lambdas {
                let d = duality_check(kind, alpha, beta, dir, lambda)?;
                worst = worst.max(d.residual);
                table.push(vec![
                    kind_name(kind).into(),
                    dir.s.into(),
                    dir.t.into(),
                    lambda.into(),
                    d.transform.into(),
                    d.exponent.into(),
                    d.residual.into(),
                ]);
            }
        }
    }
    if !(worst <= cfg.tolerance) {
        return Err(Error::consistency(format!("duality residual {worst} exceeds {}", cfg.tolerance)));
    }
    Ok(table)
}

pub const COMMANDS: &[&str] = &[
    "shape",
    "phase",
    "lyapunov",
    "rate",
    "expand",
    "tilt",
    "left-tail",
    "simulate",
    "burke",
    "tasep",
    "duality-check",
];

pub fn dispatch(command: &str, cfg: &RunConfig) -> Result<Table> {
    match command {
        "shape" => shape(cfg),
        "phase" => phase(cfg),
        "lyapunov" => lyapunov(cfg),
        "rate" => rate(cfg),
        "expand" => expand(cfg),
        "tilt" => tilt(cfg),
        "left-tail" => left_tail(cfg),
        "simulate" => simulate(cfg),
        "burke" => burke(cfg),
        "tasep" => tasep(cfg),
        "duality-check" => duality(cfg),
        other => Err(Error::invalid(format!("unknown command `{other}`; expected one of {}", COMMANDS.join(", ")))),
    }
}
