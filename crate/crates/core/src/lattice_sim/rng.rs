//! Keyed random streams.
//!
//! Every draw comes from a ChaCha8 generator seeded by the user seed and
//! switched to a stream id built from a purpose tag and an index (replica
//! number). Streams never overlap, so results do not depend on how replicas
//! are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    RowParameters = 1,
    ColumnParameters = 2,
    BulkWeights = 3,
    BoundaryWeights = 4,
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << 48);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 48) | index);
    rng
}

/// `-ln(U)/rate` with `U ∈ (0, 1]`.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    -u.ln() / rate
}
