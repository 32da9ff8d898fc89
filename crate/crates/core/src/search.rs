//! Scalar search used by the optimizers: a dense grid scan followed by
//! golden-section refinement of the winning bracket, plus plain bisection.
//!
//! None of the objectives here are known to be unimodal, so the grid finds
//! the basin and golden section only polishes it. A refinement that fails to
//! beat the grid winner is discarded.

/// Margin that keeps the time share away from 0 and 1.
pub(crate) const ALPHA_MARGIN: f64 = 1e-6;
pub(crate) const ALPHA_GRID_POINTS: usize = 2001;
pub(crate) const ALPHA_TOL: f64 = 1e-10;

pub(crate) const POWER_GRID_POINTS: usize = 513;
/// Relative width at which the source-power refinement stops.
pub(crate) const POWER_REL_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Peak {
    pub x: f64,
    pub value: f64,
}

/// Uniform grid on `(0, 1)` with both ends pulled in by [`ALPHA_MARGIN`].
pub(crate) fn alpha_grid() -> Vec<f64> {
    let span = 1.0 - 2.0 * ALPHA_MARGIN;
    let last = (ALPHA_GRID_POINTS - 1) as f64;
    (0..ALPHA_GRID_POINTS).map(|i| ALPHA_MARGIN + span * i as f64 / last).collect()
}

/// `0`, then log-spaced points on `[max(1e-9, max·1e-9), max]`, ending
/// exactly at `max`.
pub(crate) fn source_power_grid(max: f64) -> Vec<f64> {
    if max <= 0.0 {
        return vec![0.0];
    }
    let lo = f64::max(1e-9, max * 1e-9);
    if lo >= max {
        return vec![0.0, max];
    }
    let (ln_lo, ln_hi) = (lo.ln(), max.ln());
    let last = (POWER_GRID_POINTS - 1) as f64;
    let mut grid = Vec::with_capacity(POWER_GRID_POINTS + 1);
    grid.push(0.0);
    grid.extend((0..POWER_GRID_POINTS - 1).map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / last).exp()));
    grid.push(max);
    grid
}

/// First index attaining the maximum, so ties go to the smaller abscissa.
pub(crate) fn grid_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Golden-section maximization on `[lo, hi]` until the bracket is narrower
/// than `tol`. Returns the best interior point evaluated.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Peak {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f2 > f1 { Peak { x: x2, value: f2 } } else { Peak { x: x1, value: f1 } };

    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best.value || (f1 == best.value && x1 < best.x) {
                best = Peak { x: x1, value: f1 };
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best.value {
                best = Peak { x: x2, value: f2 };
            }
        }
        // Golden ratio stops shrinking once the points coincide in f64.
        if x1 >= x2 {
            break;
        }
    }
    best
}

/// Grid scan then golden refinement of the bracket around the winner.
/// `tol` maps the bracket to its stopping width.
pub(crate) fn grid_then_refine<F, T>(grid: &[f64], mut f: F, tol: T) -> Peak
where
    F: FnMut(f64) -> f64,
    T: Fn(f64, f64) -> f64,
{
    debug_assert!(!grid.is_empty());
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let i = grid_argmax(&values);
    let grid_best = Peak { x: grid[i], value: values[i] };
    if grid.len() < 2 {
        return grid_best;
    }
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let refined = golden_max(&mut f, lo, hi, tol(lo, hi));
    if refined.value > grid_best.value {
        refined
    } else {
        grid_best
    }
}

/// Bisection for a sign change of an increasing `f` on `[lo, hi]`.
/// Assumes `f(lo) <= 0 <= f(hi)`.
pub(crate) fn bisect_increasing<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
