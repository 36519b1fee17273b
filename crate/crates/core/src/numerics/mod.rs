//! Numerical kernels shared by the analytic modules.

pub mod nelder_mead;
pub mod quad;
pub mod roots;
