//! Small-weight inequality for the growth rate and the structural terms of
//! the minimum-distance probability bounds.
//!
//! The probability bounds hold only up to unspecified constant factors, so
//! the terms computed here are exponent proxies meant for comparison with
//! simulation slopes. They are not certified probabilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::omega_value;
use crate::spectrum::EnsembleParams;

/// `kappa = ln(q-1) + (c/2) ln(d-1) + 3c`.
pub fn kappa(q: u32, c: u32, d: u32) -> f64 {
    ((q - 1) as f64).ln() + c as f64 / 2.0 * ((d - 1) as f64).ln() + 3.0 * c as f64
}

/// Right-hand side `(c/2 - 1) x ln x + kappa x` of the small-weight inequality.
pub fn smallx_rhs(q: u32, c: u32, d: u32, x: f64) -> f64 {
    (c as f64 / 2.0 - 1.0) * x * x.ln() + kappa(q, c, d) * x
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallxMargin {
    /// `min(rhs - omega)` over the grid.
    pub margin: f64,
    /// Point attaining the minimum.
    pub argmin: f64,
    /// `(x, rhs(x) - omega(x))` for every grid point, in input order.
    pub points: Vec<(f64, f64)>,
}

/// Slack of `omega(x) < (c/2 - 1) x ln x + kappa x` on a grid inside `(0, 1/q^2)`.
pub fn smallx_inequality_margin(q: u32, c: u32, d: u32, x_grid: &[f64]) -> Result<SmallxMargin> {
    if x_grid.is_empty() {
        return Err(Error::param("empty grid"));
    }
    let upper = 1.0 / (q as f64 * q as f64);
    let mut points = Vec::with_capacity(x_grid.len());
    let (mut margin, mut argmin) = (f64::INFINITY, f64::NAN);
    for &x in x_grid {
        if !(x > 0.0 && x < upper) {
            return Err(Error::param(format!("grid point {x} is outside (0, {upper})")));
        }
        let slack = smallx_rhs(q, c, d, x) - omega_value(q, c, d, x)?;
        if slack < margin {
            margin = slack;
            argmin = x;
        }
        points.push((x, slack));
    }
    Ok(SmallxMargin {
        margin,
        argmin,
        points,
    })
}

/// `Delta = 1` iff `q = 2` and `c l0` is odd.
pub fn delta_indicator(q: u32, c: u32, l0: u32) -> u32 {
    u32::from(q == 2 && (c as u64 * l0 as u64) % 2 == 1)
}

/// `-ceil((c-2)(l0 + Delta) / 2)`.
pub fn polynomial_exponent(q: u32, c: u32, l0: u32) -> i64 {
    let t = (c as i64 - 2) * (l0 + delta_indicator(q, c, l0)) as i64;
    -((t + 1).div_euclid(2))
}

/// Structural terms of the bound on `P{l0 <= d_min <= n alpha}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinDistanceBoundReport {
    pub params: EnsembleParams,
    pub l0: u32,
    pub alpha: f64,
    #[serde(rename = "Delta")]
    pub delta: u32,
    /// Power of `n` in the small-weight term.
    pub exponent_term: i64,
    /// `n^exponent_term`.
    pub poly_term: f64,
    /// `omega(alpha)`.
    #[serde(serialize_with = "crate::real::serialize")]
    pub omega_alpha: f64,
    /// `n^(3/2) exp(n omega(alpha))`; may underflow to zero.
    pub exp_term: f64,
    /// `(3/2) ln n + n omega(alpha)`.
    #[serde(serialize_with = "crate::real::serialize")]
    pub log_exp_term: f64,
    pub note: &'static str,
}

const THETA_NOTE: &str =
    "terms hold up to unspecified constant factors; use for slope comparison, not as probabilities";

fn check_regime(params: &EnsembleParams, l0: u32, alpha: f64, min_l0: u32) -> Result<()> {
    let EnsembleParams { q, c, d, .. } = *params;
    if !(d >= c && c >= 3) {
        return Err(Error::param(format!(
            "bound requires d >= c >= 3 (got c = {c}, d = {d})"
        )));
    }
    if l0 < min_l0 {
        return Err(Error::param(format!("l0 must be at least {min_l0} (got {l0})")));
    }
    let mid = 1.0 - 1.0 / q as f64;
    if !(alpha > 0.0 && alpha < mid) {
        return Err(Error::param(format!("alpha = {alpha} is outside (0, {mid})")));
    }
    Ok(())
}

fn report(params: &EnsembleParams, l0: u32, alpha: f64, delta: u32, exponent: i64) -> Result<MinDistanceBoundReport> {
    let EnsembleParams { q, c, d, n } = *params;
    let nf = n as f64;
    let omega_alpha = omega_value(q, c, d, alpha)?;
    let log_exp_term = 1.5 * nf.ln() + nf * omega_alpha;
    Ok(MinDistanceBoundReport {
        params: *params,
        l0,
        alpha,
        delta,
        exponent_term: exponent,
        poly_term: nf.powi(exponent as i32),
        omega_alpha,
        exp_term: log_exp_term.exp(),
        log_exp_term,
        note: THETA_NOTE,
    })
}

/// Unconditioned bound terms.
pub fn min_distance_bound(params: &EnsembleParams, l0: u32, alpha: f64) -> Result<MinDistanceBoundReport> {
    check_regime(params, l0, alpha, 1)?;
    let (q, c) = (params.q, params.c);
    report(
        params,
        l0,
        alpha,
        delta_indicator(q, c, l0),
        polynomial_exponent(q, c, l0),
    )
}

/// Bound terms conditioned on the parity-check matrix having no all-zero
/// column (equivalently `d_min >= 2`, which holds with probability
/// bounded away from zero). Here `l0 = 2` and the small-weight term is
/// `n^(2-c)`.
pub fn conditioned_min_distance_bound(params: &EnsembleParams, alpha: f64) -> Result<MinDistanceBoundReport> {
    check_regime(params, 2, alpha, 2)?;
    let (q, c) = (params.q, params.c);
    report(params, 2, alpha, delta_indicator(q, c, 2), polynomial_exponent(q, c, 2))
}

/// Minimum over the grid of `1 - d x + d(d-1) x^2 / 2 - (1-x)^d`.
pub fn taylor_check(d: u32, x_grid: &[f64]) -> Result<f64> {
    if d == 0 {
        return Err(Error::param("d must be at least 1"));
    }
    let df = d as f64;
    let mut slack = f64::INFINITY;
    for &x in x_grid {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param(format!("grid point {x} is outside [0, 1]")));
        }
        let s = 1.0 - df * x + df * (df - 1.0) * x * x / 2.0 - (1.0 - x).powi(d as i32);
        slack = slack.min(s);
    }
    Ok(slack)
}
