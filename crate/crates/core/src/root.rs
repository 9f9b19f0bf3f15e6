//! Sign-based bisection for monotone or single-crossing functions.

/// Stopping rule for [`bisect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Absolute tolerance on the argument. The search also stops once the
    /// bracket can no longer be halved in floating point.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    /// Bisect until the bracket collapses to adjacent floats.
    pub fn exhaustive() -> Self {
        RootConfig {
            tol: 0.0,
            max_iter: 200,
        }
    }
}

/// Finds a sign change of `f` in `[lo, hi]`.
///
/// Only the sign of `f` is used, so infinite values are acceptable. Returns
/// `None` when the endpoints do not bracket a sign change.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, cfg: RootConfig) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.is_nan() || fhi.is_nan() || (flo < 0.0) == (fhi < 0.0) {
        return None;
    }
    let lo_negative = flo < 0.0;
    for _ in 0..cfg.max_iter {
        if (hi - lo).abs() <= cfg.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
