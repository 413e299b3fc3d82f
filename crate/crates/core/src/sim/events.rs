// SPDX-License-Identifier: Apache-2.0

//! Lazily generated sensor event times and the counting process
//! `C(t) = max{n >= 0 : E(n) <= t}`.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::Rng;

use crate::envelope::{DistributionModel, Sampler};
use crate::error::{Error, Result};

/// Event times `E(1), E(2), ...` drawn from iid inter-event times.
#[derive(Debug, Clone)]
pub struct SampledTimes<R> {
    sampler: Sampler,
    rng: R,
    now: f64,
}

impl<R: Rng> Iterator for SampledTimes<R> {
    type Item = f64;

    #[inline]
    fn next(&mut self) -> Option<f64> {
        self.now += self.sampler.draw(&mut self.rng);
        Some(self.now)
    }
}

/// Position of a monotone reader of the event stream; `count` is `C(t)` at
/// the last queried `t`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cursor {
    pub count: u64,
}

/// Buffered event stream shared by several nondecreasing readers.
///
/// Events stay buffered until [`EventStream::release_through`] drops them, so
/// memory is bounded by the distance between the slowest and the fastest
/// reader.
#[derive(Debug, Clone)]
pub struct EventStream<S> {
    source: S,
    buffer: VecDeque<f64>,
    /// Number of events dropped from the front of `buffer`.
    released: u64,
    /// Events after this time are unknown to a finite source.
    horizon: f64,
}

impl<R: Rng> EventStream<SampledTimes<R>> {
    pub fn sampled(model: &DistributionModel, rng: R) -> Self {
        Self::new(SampledTimes { sampler: model.sampler(), rng, now: 0.0 }, f64::INFINITY)
    }
}

impl EventStream<alloc::vec::IntoIter<f64>> {
    /// A fixed list of event times, complete up to `horizon`.
    pub fn from_times(times: Vec<f64>, horizon: f64) -> Result<Self> {
        let mut prev = 0.0;
        for &t in &times {
            if !(t >= prev) {
                return Err(Error::InvalidArgument("event times must be nondecreasing and nonnegative"));
            }
            prev = t;
        }
        Ok(Self::new(times.into_iter(), horizon))
    }
}

impl<S: Iterator<Item = f64>> EventStream<S> {
    fn new(source: S, horizon: f64) -> Self {
        Self { source, buffer: VecDeque::new(), released: 0, horizon }
    }

    /// Time of event `k >= 1`, or `None` if the source ends earlier.
    fn event_time(&mut self, k: u64) -> Option<f64> {
        debug_assert!(k > self.released, "event {k} already released");
        let idx = (k - self.released - 1) as usize;
        while self.buffer.len() <= idx {
            let t = self.source.next()?;
            self.buffer.push_back(t);
        }
        Some(self.buffer[idx])
    }

    /// `E(k)` for `k >= 1`.
    pub fn time_of(&mut self, k: u64) -> Result<f64> {
        if k == 0 {
            return Ok(0.0);
        }
        self.event_time(k).ok_or(Error::EventStreamExhausted { time: f64::INFINITY })
    }

    /// Advances `cursor` to `C(t)`. Queries through one cursor must be
    /// nondecreasing in `t`.
    pub fn count_at(&mut self, cursor: &mut Cursor, t: f64) -> Result<u64> {
        loop {
            match self.event_time(cursor.count + 1) {
                Some(e) if e <= t => cursor.count += 1,
                Some(_) => return Ok(cursor.count),
                None if t <= self.horizon => return Ok(cursor.count),
                None => return Err(Error::EventStreamExhausted { time: t }),
            }
        }
    }

    /// Drops events `1..=k` from the buffer; no cursor may need them again.
    pub fn release_through(&mut self, k: u64) {
        while self.released < k && !self.buffer.is_empty() {
            self.buffer.pop_front();
            self.released += 1;
        }
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn counts_include_events_at_the_query_time() {
        let mut s = EventStream::from_times(vec![2.0, 4.0, 6.0], 7.0).unwrap();
        let mut c = Cursor::default();
        assert_eq!(s.count_at(&mut c, 0.0).unwrap(), 0);
        assert_eq!(s.count_at(&mut c, 1.999).unwrap(), 0);
        assert_eq!(s.count_at(&mut c, 2.0).unwrap(), 1);
        assert_eq!(s.count_at(&mut c, 6.5).unwrap(), 3);
        assert!(matches!(s.count_at(&mut c, 8.0), Err(Error::EventStreamExhausted { .. })));
    }

    #[test]
    fn independent_cursors_share_the_stream() {
        let mut s = EventStream::from_times(vec![1.0, 2.0, 9.0], 10.0).unwrap();
        let (mut a, mut b) = (Cursor::default(), Cursor::default());
        assert_eq!(s.count_at(&mut a, 5.0).unwrap(), 2);
        assert_eq!(s.count_at(&mut b, 1.0).unwrap(), 1);
        assert_eq!(s.count_at(&mut b, 9.5).unwrap(), 3);
        s.release_through(2);
        assert_eq!(s.count_at(&mut a, 9.0).unwrap(), 3);
        assert_eq!(s.time_of(3).unwrap(), 9.0);
    }

    #[test]
    fn rejects_decreasing_times() {
        assert!(EventStream::from_times(vec![1.0, 0.5], 2.0).is_err());
    }

    proptest! {
        #[test]
        fn cursor_count_matches_brute_force(mut gaps in proptest::collection::vec(0.0f64..3.0, 1..40), queries in proptest::collection::vec(0.0f64..60.0, 1..20)) {
            let mut t = 0.0;
            for g in gaps.iter_mut() { t += *g; *g = t; }
            let times = gaps;
            let mut qs = queries;
            qs.sort_by(f64::total_cmp);
            let mut s = EventStream::from_times(times.clone(), 1e9).unwrap();
            let mut c = Cursor::default();
            for q in qs {
                let brute = times.iter().filter(|&&e| e <= q).count() as u64;
                prop_assert_eq!(s.count_at(&mut c, q).unwrap(), brute);
            }
        }
    }
}
