//! First-crossing search for monotone predicates.

/// Returns the (approximately) smallest `t` in `[lo, hi]` where `pred` holds.
///
/// `pred` must be monotone: false then true along the interval, and true at
/// `hi`. The returned point always satisfies `pred` and lies within `tol` of
/// the true crossing. If `pred(lo)` already holds, `lo` is returned.
pub(crate) fn first_true<F>(mut lo: f64, mut hi: f64, tol: f64, pred: F) -> f64
where
    F: Fn(f64) -> bool,
{
    if pred(lo) {
        return lo;
    }
    debug_assert!(pred(hi), "bracket upper end must satisfy the predicate");
    // Enough halvings for any finite bracket; stops early once within tol.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
