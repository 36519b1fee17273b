//! Large deviations of last-passage times in the exponential corner growth
//! model with inhomogeneous row and column rates.
//!
//! Weights `W(i,j) ~ Exp(a_i + b_j)` with `a_i ~ α`, `b_j ~ β` i.i.d. The
//! crate evaluates the shape function, quenched and annealed Lyapunov
//! exponents, right-tail rate functions and their expansions from the
//! marginal laws alone, and ships a seeded simulator to check them.
//!
//! ```
//! use cgmldp::{shape_function, Direction, ParameterLaw};
//!
//! let half = ParameterLaw::point_mass(0.5).unwrap();
//! let (g, zeta) = shape_function(&half, &half, Direction::new(1.0, 1.0).unwrap());
//! assert!((g - 4.0).abs() < 1e-12 && zeta.abs() < 1e-12);
//! ```

// `!(x > 0.0)` style guards reject NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annealed_entropy;
pub mod cli;
pub mod error;
pub mod ext;
pub mod lattice_sim;
pub mod lyapunov;
pub mod numerics;
pub mod param_laws;
pub mod rate;
pub mod shape;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub use lyapunov::{Boundary, CriticalLambdas, Kind, LyapunovPoint};
pub use param_laws::{Marginal, ParameterLaw, TiltedLaw};
pub use rate::{ExpansionReport, RateEval, Regime};
pub use shape::{phase_portrait, shape_function, stationary_shape, Direction, PhasePortrait, Region};
