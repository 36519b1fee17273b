//! Run configuration: one JSON document, with `--key value` overrides.

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lattice_sim::Mode;
use crate::param_laws::ParameterLaw;
use crate::shape::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSelection {
    Quenched,
    Annealed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every recognised key. Laws are parsed separately so their errors can
/// name the offending field.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    alpha: Option<Value>,
    beta: Option<Value>,
    s: Option<f64>,
    t: Option<f64>,
    directions: Option<Vec<(f64, f64)>>,
    kind: Option<KindSelection>,
    lambdas: Option<Vec<f64>>,
    rs: Option<Vec<f64>>,
    eps: Option<Vec<f64>>,
    z: Option<f64>,
    intervals: Option<Vec<(f64, f64)>>,
    level_set_samples: Option<usize>,
    n: Option<usize>,
    m: Option<usize>,
    reps: Option<usize>,
    seed: Option<u64>,
    mode: Option<Mode>,
    times: Option<Vec<f64>>,
    x: Option<f64>,
    y: Option<f64>,
    tolerance: Option<f64>,
    output: Option<String>,
    replicates_output: Option<String>,
    format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: Option<ParameterLaw>,
    pub beta: Option<ParameterLaw>,
    pub directions: Vec<Direction>,
    pub kind: KindSelection,
    pub lambdas: Vec<f64>,
    pub rs: Vec<f64>,
    pub eps: Vec<f64>,
    pub z: Option<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub level_set_samples: usize,
    pub n: usize,
    pub m: Option<usize>,
    pub reps: usize,
    pub seed: u64,
    pub mode: Mode,
    pub times: Vec<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub tolerance: f64,
    pub output: Option<String>,
    pub replicates_output: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn alpha(&self) -> Result<&ParameterLaw> {
        self.alpha.as_ref().ok_or_else(|| Error::invalid("missing field `alpha`"))
    }

    pub fn beta(&self) -> Result<&ParameterLaw> {
        self.beta.as_ref().ok_or_else(|| Error::invalid("missing field `beta`"))
    }

    pub fn require_x_y(&self) -> Result<(f64, f64)> {
        match (self.x, self.y) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(Error::invalid("fields `x` and `y` are required")),
        }
    }
}

fn parse_law(field: &str, value: Option<Value>) -> Result<Option<ParameterLaw>> {
    value.map(|v| serde_json::from_value(v).map_err(|e| Error::invalid(format!("field `{field}`: {e}")))).transpose()
}

fn increasing(field: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!("field `{field}` must be a strictly increasing list of finite numbers")));
    }
    Ok(())
}

/// Parses a config document and applies `(key, value)` overrides. Override
/// values are read as JSON when they parse, otherwise as strings.
pub fn load(document: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut root: Map<String, Value> = match serde_json::from_str::<Value>(document) {
        Ok(Value::Object(map)) => map,
        Ok(_) => return Err(Error::invalid("config must be a JSON object")),
        Err(e) => return Err(Error::invalid(format!("config is not valid JSON: {e}"))),
    };
    for (key, raw) in overrides {
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        root.insert(key.clone(), value);
    }
    let raw: Raw = serde_json::from_value(Value::Object(root)).map_err(|e| Error::invalid(format!("config: {e}")))?;

    let mut directions = Vec::new();
    match (raw.s, raw.t) {
        (Some(s), Some(t)) => directions.push(Direction::new(s, t)?),
        (None, None) => {}
        _ => return Err(Error::invalid("fields `s` and `t` must be given together")),
    }
    for (s, t) in raw.directions.unwrap_or_default() {
        directions.push(Direction::new(s, t).map_err(|e| Error::invalid(format!("field `directions`: {e}")))?);
    }
    if directions.is_empty() {
        directions.push(Direction { s: 1.0, t: 1.0 });
    }
    let lambdas = raw.lambdas.unwrap_or_default();
    let rs = raw.rs.unwrap_or_default();
    let eps = raw.eps.unwrap_or_else(|| vec![1e-3, 3e-3, 1e-2]);
    let times = raw.times.unwrap_or_default();
    for (field, xs) in [("lambdas", &lambdas), ("rs", &rs), ("eps", &eps), ("times", &times)] {
        increasing(field, xs)?;
    }
    let intervals = raw.intervals.unwrap_or_default();
    if let Some((x, y)) = intervals.iter().find(|(x, y)| !(x < y)) {
        return Err(Error::invalid(format!("field `intervals`: need x < y, got ({x}, {y})")));
    }
    Ok(RunConfig {
        alpha: parse_law("alpha", raw.alpha)?,
        beta: parse_law("beta", raw.beta)?,
        directions,
        kind: raw.kind.unwrap_or(KindSelection::Both),
        lambdas,
        rs,
        eps,
        z: raw.z,
        intervals,
        level_set_samples: raw.level_set_samples.unwrap_or(0),
        n: raw.n.unwrap_or(100),
        m: raw.m,
        reps: raw.reps.unwrap_or(100),
        seed: raw.seed.unwrap_or(0),
        mode: raw.mode.unwrap_or(Mode::Quenched),
        times,
        x: raw.x,
        y: raw.y,
        tolerance: raw.tolerance.unwrap_or(1e-6),
        output: raw.output,
        replicates_output: raw.replicates_output,
        format: raw.format.unwrap_or(Format::Csv),
    })
}
