//! Bracketing bisection for monotone scalar maps.

use crate::error::{Error, Result};

const MAX_DOUBLINGS: usize = 2100;

/// Solves `g(x) = target` for `x ≥ 0`, where `g` is continuous, strictly
/// increasing and `g(0) = 0`.
///
/// The bracket is found by doubling (or halving) from `x = 1`; bisection stops
/// once the bracket's relative width drops below `rel_tol`. Doubling past
/// `x_cap` is reported as [`Error::DomainOverflow`].
pub(crate) fn solve_increasing<G>(g: G, target: f64, rel_tol: f64, x_cap: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    if target <= 0.0 {
        return Ok(0.0);
    }
    if !target.is_finite() {
        return Err(Error::DomainOverflow { t: target, cap: x_cap });
    }
    let (mut lo, mut hi);
    if g(1.0)? < target {
        lo = 1.0;
        hi = 2.0;
        let mut n = 0;
        while g(hi)? < target {
            lo = hi;
            hi *= 2.0;
            n += 1;
            if hi > x_cap || !hi.is_finite() || n > MAX_DOUBLINGS {
                return Err(Error::DomainOverflow { t: hi, cap: x_cap });
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while g(lo)? >= target {
            hi = lo;
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE {
                return Ok(hi);
            }
        }
    }
    // invariant: g(lo) < target <= g(hi)
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `k > 0` with `map(k) ≤ level`, for a non-increasing `map`.
///
/// `lo` and `hi` are initial guesses; they are widened until
/// `map(lo) > level ≥ map(hi)`. If `lo_is_bound` is set, `lo` is a proven lower
/// bound for the answer and is returned as-is when `map(lo) ≤ level`.
pub(crate) fn infimum_below<M>(
    map: M,
    level: f64,
    mut lo: f64,
    mut hi: f64,
    lo_is_bound: bool,
    rel_tol: f64,
) -> Result<f64>
where
    M: Fn(f64) -> Result<f64>,
{
    debug_assert!(lo > 0.0 && hi > 0.0);
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut n = 0;
    while map(hi)? > level {
        lo = hi;
        hi *= 2.0;
        n += 1;
        if n > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NonConvergence {
                iterations: n,
                best: hi,
            });
        }
    }
    if map(lo)? <= level {
        if lo_is_bound {
            return Ok(lo);
        }
        loop {
            hi = lo;
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE {
                return Ok(0.0);
            }
            if map(lo)? > level {
                break;
            }
        }
    }
    // invariant: map(lo) > level >= map(hi)
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if map(mid)? > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
