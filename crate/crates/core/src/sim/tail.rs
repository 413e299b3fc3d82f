// SPDX-License-Identifier: Apache-2.0

//! Empirical complementary CDFs of metric samples.
//!
//! Samples are kept either exactly or in a fixed-width histogram whose
//! overflow region is stored exactly, so quantiles deep in the tail stay
//! exact while the bulk costs a constant amount of memory.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sample count above which histograms are used by default.
pub const EXACT_LIMIT: u64 = 10_000_000;
/// Bins of a default histogram.
pub const DEFAULT_BINS: usize = 10_000;

/// Bins `[k w, (k + 1) w)` for `k < bins`; larger values overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramLayout {
    pub width: f64,
    pub bins: usize,
    /// Samples are integers and `width == 1`, so bins are exact.
    pub integer: bool,
}

impl HistogramLayout {
    /// Covers `[0, 2 max)` with [`DEFAULT_BINS`] bins.
    pub fn for_range(max: f64) -> Self {
        let hi = if max > 0.0 { 2.0 * max } else { 1.0 };
        Self { width: hi / DEFAULT_BINS as f64, bins: DEFAULT_BINS, integer: false }
    }

    /// Unit bins for integer samples up to `2 max`.
    pub fn for_counts(max: u64) -> Self {
        Self { width: 1.0, bins: (2 * max + 16) as usize, integer: true }
    }

    fn bin(&self, x: f64) -> usize {
        if x <= 0.0 {
            0
        } else {
            libm::floor(x / self.width) as usize
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Exact(Vec<f64>),
    Binned { layout: HistogramLayout, counts: Vec<u64>, overflow: Vec<f64> },
}

/// A pool of samples of one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTail {
    storage: Storage,
    n: u64,
    min: f64,
    max: f64,
    sorted: bool,
}

/// An empirical quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantile {
    pub value: f64,
    /// Upper bound on the binning error, zero for exact samples.
    pub resolution: f64,
    /// Fewer than `10 / epsilon` samples back this estimate.
    pub insufficient: bool,
}

impl Default for EmpiricalTail {
    fn default() -> Self {
        Self::exact()
    }
}

impl EmpiricalTail {
    pub fn exact() -> Self {
        Self::with_storage(Storage::Exact(Vec::new()))
    }

    pub fn binned(layout: HistogramLayout) -> Self {
        Self::with_storage(Storage::Binned { layout, counts: vec![0; layout.bins], overflow: Vec::new() })
    }

    pub fn from_samples(samples: Vec<f64>) -> Self {
        let mut t = Self::exact();
        for x in samples {
            t.push(x);
        }
        t
    }

    fn with_storage(storage: Storage) -> Self {
        Self { storage, n: 0, min: f64::INFINITY, max: f64::NEG_INFINITY, sorted: true }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        match &mut self.storage {
            Storage::Exact(v) => {
                v.push(x);
                self.sorted = false;
            }
            Storage::Binned { layout, counts, overflow } => {
                let b = layout.bin(x);
                if b < layout.bins {
                    counts[b] += 1;
                } else {
                    overflow.push(x);
                    self.sorted = false;
                }
            }
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min(&self) -> Option<f64> {
        (self.n > 0).then_some(self.min)
    }

    pub fn max(&self) -> Option<f64> {
        (self.n > 0).then_some(self.max)
    }

    pub fn layout(&self) -> Option<HistogramLayout> {
        match &self.storage {
            Storage::Exact(_) => None,
            Storage::Binned { layout, .. } => Some(*layout),
        }
    }

    /// Pools `other` into `self`. The result does not depend on merge order.
    pub fn merge(&mut self, other: EmpiricalTail) -> Result<()> {
        match (&mut self.storage, other.storage) {
            (Storage::Exact(a), Storage::Exact(b)) => a.extend(b),
            (
                Storage::Binned { layout, counts, overflow },
                Storage::Binned { layout: l2, counts: c2, overflow: o2 },
            ) if *layout == l2 => {
                counts.iter_mut().zip(c2).for_each(|(a, b)| *a += b);
                overflow.extend(o2);
            }
            _ => return Err(Error::InvalidArgument("cannot merge tails with different storage")),
        }
        self.n += other.n;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.sorted = false;
        Ok(())
    }

    fn sort(&mut self) {
        if self.sorted {
            return;
        }
        match &mut self.storage {
            Storage::Exact(v) => v.sort_unstable_by(f64::total_cmp),
            Storage::Binned { overflow, .. } => overflow.sort_unstable_by(f64::total_cmp),
        }
        self.sorted = true;
    }

    /// Value at ascending rank `r < n`, with its resolution.
    fn at_rank(&mut self, r: u64) -> (f64, f64) {
        self.sort();
        match &self.storage {
            Storage::Exact(v) => (v[r as usize], 0.0),
            Storage::Binned { layout, counts, overflow } => {
                let binned = self.n - overflow.len() as u64;
                if r >= binned {
                    return (overflow[(r - binned) as usize], 0.0);
                }
                let mut seen = 0u64;
                for (b, &c) in counts.iter().enumerate() {
                    seen += c;
                    if seen > r {
                        return if layout.integer {
                            (b as f64, 0.0)
                        } else {
                            ((b + 1) as f64 * layout.width, layout.width)
                        };
                    }
                }
                unreachable!("rank within binned count")
            }
        }
    }

    /// Smallest sample `x` with `#{samples > x} / n <= epsilon`.
    pub fn quantile(&mut self, epsilon: f64) -> Result<Quantile> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("no samples"));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidArgument("epsilon must be nonnegative"));
        }
        let allowed = libm::floor(epsilon * self.n as f64 * (1.0 + 1e-12));
        let allowed = if allowed >= (self.n - 1) as f64 { self.n - 1 } else { allowed as u64 };
        let (value, resolution) = self.at_rank(self.n - 1 - allowed);
        Ok(Quantile { value, resolution, insufficient: (self.n as f64) < 10.0 / epsilon })
    }

    /// Number of samples strictly greater than `x`. Binned storage counts the
    /// whole bin containing `x`, so the result never undercounts.
    pub fn exceedances(&mut self, x: f64) -> u64 {
        self.sort();
        match &self.storage {
            Storage::Exact(v) => (v.len() - v.partition_point(|&s| s <= x)) as u64,
            Storage::Binned { layout, counts, overflow } => {
                let over = (overflow.len() - overflow.partition_point(|&s| s <= x)) as u64;
                let first =
                    if layout.integer && x >= 0.0 { libm::floor(x) as usize + 1 } else { layout.bin(x) };
                over + counts.iter().skip(first).sum::<u64>()
            }
        }
    }
}

/// See [`EmpiricalTail::quantile`].
pub fn empirical_quantile(tail: &mut EmpiricalTail, epsilon: f64) -> Result<Quantile> {
    tail.quantile(epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quantile_examples() {
        let mut t = EmpiricalTail::from_samples((1..=10).map(f64::from).collect());
        let q = t.quantile(0.2).unwrap();
        assert_eq!(q.value, 8.0);
        assert!(q.insufficient);
        assert_eq!(t.quantile(1.0).unwrap().value, 1.0);
        assert_eq!(t.quantile(0.0).unwrap().value, 10.0);
        let mut c = EmpiricalTail::from_samples(vec![3.5; 100]);
        for eps in [0.0, 0.01, 0.5, 1.0] {
            assert_eq!(c.quantile(eps).unwrap().value, 3.5);
        }
        assert!(EmpiricalTail::exact().quantile(0.1).is_err());
    }

    #[test]
    fn exponential_quantile_matches_analytic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut t = EmpiricalTail::exact();
        for _ in 0..1_000_000 {
            let u: f64 = rng.random();
            t.push(-libm::log(1.0 - u));
        }
        let q = t.quantile(1e-3).unwrap();
        assert!((q.value - libm::log(1000.0)).abs() < 0.2, "{q:?}");
        assert!(!q.insufficient);
    }

    #[test]
    fn binned_quantiles_within_resolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.random::<f64>() * 10.0).collect();
        let mut exact = EmpiricalTail::from_samples(xs.clone());
        let mut binned = EmpiricalTail::binned(HistogramLayout::for_range(4.0));
        xs.iter().for_each(|&x| binned.push(x));
        for eps in [0.5, 0.3, 0.2, 1e-2, 1e-3, 1e-4] {
            let e = exact.quantile(eps).unwrap();
            let b = binned.quantile(eps).unwrap();
            assert!(b.value >= e.value && b.value - e.value <= b.resolution + 1e-12, "{eps}: {e:?} {b:?}");
        }
        // values above 8 live in the overflow and are exact
        assert_eq!(binned.quantile(1e-3).unwrap(), exact.quantile(1e-3).unwrap());
        assert_eq!(binned.exceedances(9.0), exact.exceedances(9.0));
        assert!(binned.exceedances(3.0) >= exact.exceedances(3.0));
    }

    #[test]
    fn integer_histogram_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..50_000).map(|_| f64::from(rng.random_range(0u32..60))).collect();
        let mut exact = EmpiricalTail::from_samples(xs.clone());
        let mut binned = EmpiricalTail::binned(HistogramLayout::for_counts(20));
        xs.iter().for_each(|&x| binned.push(x));
        for eps in [0.9, 0.5, 0.1, 1e-2, 1e-3] {
            assert_eq!(binned.quantile(eps).unwrap().value, exact.quantile(eps).unwrap().value);
        }
        for x in [0.0, 5.0, 30.0, 59.0] {
            assert_eq!(binned.exceedances(x), exact.exceedances(x));
        }
    }

    #[test]
    fn merge_rejects_mismatched_layouts() {
        let mut a = EmpiricalTail::binned(HistogramLayout::for_range(1.0));
        assert!(a.merge(EmpiricalTail::binned(HistogramLayout::for_range(2.0))).is_err());
        assert!(a.merge(EmpiricalTail::exact()).is_err());
    }

    proptest! {
        #[test]
        fn quantile_definition_and_monotonicity(xs in proptest::collection::vec(0.0f64..100.0, 1..200), e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
            let mut t = EmpiricalTail::from_samples(xs.clone());
            let n = xs.len() as f64;
            let q = t.quantile(e1).unwrap().value;
            let above = xs.iter().filter(|&&x| x > q).count() as f64;
            prop_assert!(above / n <= e1 + 1e-12);
            // no smaller sample satisfies the condition
            for &x in xs.iter().filter(|&&x| x < q) {
                let a = xs.iter().filter(|&&y| y > x).count() as f64;
                prop_assert!(a / n > e1);
            }
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(t.quantile(lo).unwrap().value >= t.quantile(hi).unwrap().value);
        }

        #[test]
        fn merge_is_order_independent(a in proptest::collection::vec(0.0f64..50.0, 0..100), b in proptest::collection::vec(0.0f64..50.0, 0..100)) {
            let layout = HistogramLayout::for_range(10.0);
            let fill = |xs: &[f64]| { let mut t = EmpiricalTail::binned(layout); xs.iter().for_each(|&x| t.push(x)); t };
            let mut ab = fill(&a); ab.merge(fill(&b)).unwrap();
            let mut ba = fill(&b); ba.merge(fill(&a)).unwrap();
            ab.sort(); ba.sort();
            prop_assert_eq!(&ab, &ba);
            let mut ea = EmpiricalTail::from_samples(a.clone()); ea.merge(EmpiricalTail::from_samples(b.clone())).unwrap();
            let mut eb = EmpiricalTail::from_samples(b); eb.merge(EmpiricalTail::from_samples(a)).unwrap();
            ea.sort(); eb.sort();
            prop_assert_eq!(ea, eb);
        }
    }
}
