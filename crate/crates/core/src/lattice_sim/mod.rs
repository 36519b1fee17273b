//! Seeded simulation of the inhomogeneous corner growth model.
//!
//! Row parameters `a_i ~ α` and column parameters `b_j ~ β` form the
//! environment; weights are `W(i,j) ~ Exp(a_i + b_j)`. Replicas run in
//! parallel on keyed random streams and are reduced in replica order, so
//! every output is a function of the seed alone.

pub mod burke;
pub mod env;
pub mod estimators;
pub mod grid;
pub mod rng;
pub mod tasep;

pub use burke::{burke_check, BurkeReport, CorrelationSummary, IncrementStat};
pub use env::{sample_env, sample_env_for, EnvSample, Mode};
pub use estimators::{
    corner_samples, mc_left_tail_estimate, mc_lyapunov_estimate, mc_shape_estimate, mc_tail_estimate,
    replicate_records, write_replicates_csv, LyapunovEstimate, Replicate, ShapeEstimate,
};
pub use grid::{
    last_passage_time, passage_times, sample_weights, sample_weights_stationary, stationary_passage_times,
    PassageTable, WeightGrid,
};
pub use tasep::{tasep_positions, TasepPositions};
