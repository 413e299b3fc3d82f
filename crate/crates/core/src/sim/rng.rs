// SPDX-License-Identifier: Apache-2.0

//! Reproducible, independent random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the base seed, with the
//! 64-bit ChaCha stream number set to `2 * replication + stream_id`. ChaCha is
//! counter based, so streams with different numbers never overlap and any
//! replication can be regenerated on its own, in any order and on any thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which random input of a replication a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamId {
    Events = 0,
    Service = 1,
}

/// Replication index reserved for the short pilot run that sizes histograms.
pub const PILOT_REPLICATION: u64 = 1 << 62;

pub fn stream_rng(base_seed: u64, replication: u64, stream: StreamId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(replication.wrapping_mul(2).wrapping_add(stream as u64));
    rng
}
