// SPDX-License-Identifier: Apache-2.0

//! One-dimensional minimization of bound objectives over `theta`.
//!
//! A logarithmic grid locates the basin, golden-section search refines it.
//! Every probe of a Chernoff bound is itself a valid bound, so the best value
//! ever probed is returned even if the refinement ends up elsewhere.

/// Number of logarithmically spaced grid points.
pub const GRID_POINTS: usize = 200;
/// Relative bracket width at which golden-section search stops.
pub const REL_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Best point found by [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Minimizes `f` over `[lo, hi]` (`0 < lo < hi`). Points where `f` is not
/// finite are treated as infeasible. Returns `None` if no probe was feasible.
pub fn minimize<F>(mut f: F, lo: f64, hi: f64, grid_points: usize, rel_tol: f64) -> Option<Minimum>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi > lo && grid_points >= 3);
    let mut best: Option<Minimum> = None;
    let mut probe = |x: f64, best: &mut Option<Minimum>| -> f64 {
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v.is_finite() && best.is_none_or(|b| v < b.value) {
            *best = Some(Minimum { x, value: v });
        }
        v
    };

    let ratio = libm::pow(hi / lo, 1.0 / (grid_points - 1) as f64);
    let grid: alloc::vec::Vec<f64> = (0..grid_points)
        .map(|i| if i + 1 == grid_points { hi } else { lo * libm::pow(ratio, i as f64) })
        .collect();
    let mut best_i = None;
    let mut best_v = f64::INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = probe(x, &mut best);
        if v < best_v {
            best_v = v;
            best_i = Some(i);
        }
    }
    let i = best_i?;

    let mut a = grid[i.saturating_sub(1)];
    let mut b = grid[(i + 1).min(grid_points - 1)];
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = probe(c, &mut best);
    let mut fd = probe(d, &mut best);
    while (b - a) > rel_tol * 0.5 * (a + b) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = probe(c, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = probe(d, &mut best);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let m = minimize(|x| (x - 0.37) * (x - 0.37) + 2.0, 1e-4, 10.0, GRID_POINTS, REL_TOL).unwrap();
        assert!((m.x - 0.37).abs() < 1e-5, "{m:?}");
        assert!((m.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn minimum_at_upper_edge() {
        let m = minimize(|x| 1.0 / x, 1e-3, 1e3, GRID_POINTS, REL_TOL).unwrap();
        assert_eq!(m.x, 1e3);
    }

    #[test]
    fn infeasible_regions_are_skipped() {
        let f = |x: f64| if x > 0.2 { f64::INFINITY } else { (x - 0.15).abs() + 1.0 };
        let m = minimize(f, 1e-6, 1.0, GRID_POINTS, REL_TOL).unwrap();
        assert!((m.x - 0.15).abs() < 1e-4);
        assert!(minimize(|_| f64::INFINITY, 1e-6, 1.0, GRID_POINTS, REL_TOL).is_none());
        assert!(minimize(|_| f64::NAN, 1e-6, 1.0, GRID_POINTS, REL_TOL).is_none());
    }

    #[test]
    fn returns_the_best_probe_even_when_multimodal() {
        // two basins; the grid must pick the deeper one
        let f = |x: f64| {
            let a = (x - 0.01) * (x - 0.01) * 1e4 + 1.0;
            let b = (x - 5.0) * (x - 5.0) + 0.5;
            a.min(b)
        };
        let m = minimize(f, 1e-4, 10.0, GRID_POINTS, REL_TOL).unwrap();
        assert!((m.x - 5.0).abs() < 1e-3);
    }
}
