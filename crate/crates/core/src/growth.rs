//! Asymptotic growth rate of the average weight distribution.
//!
//! With `z = 1 - q x / (q-1)` and the analogous `zhat` for the auxiliary
//! variable, the inner function
//!
//! ```text
//! delta(x) = inf_{xhat in (0,1)} d D(x || xhat) + rho(xhat),
//! rho(x)   = ln(1 + (q-1) z^d)
//! ```
//!
//! is attained where `zeta(zhat) = z`, with
//! `zeta(zhat) = (zhat + zhat^(d-1) + (q-2) zhat^d) / (1 + (q-1) zhat^d)`
//! strictly increasing for `d >= 3`. The growth rate is
//! `omega(x) = H_q(x) + (c/d) (delta(x) - ln q)`.
//!
//! Infinite values are ordinary `f64` infinities. All roots are found by
//! bisection, and the stationary equation is evaluated in factored form so
//! that it stays accurate as `zhat` approaches either end of its range.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root::{bisect, RootConfig};

/// Width of the window next to `0` and `x1` in which analytic endpoint
/// values are returned instead of solving numerically.
pub const ENDPOINT_WINDOW: f64 = 1e-8;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0)
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::param(format!("field order q = {q} must be at least 2")));
    }
    Ok(())
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("x = {x} is outside [0, 1]")));
    }
    Ok(())
}

/// `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// q-ary entropy `H_q(x) = -x ln x - (1-x) ln(1-x) + x ln(q-1)`.
pub fn entropy_q(x: f64, q: u32) -> f64 {
    -xlnx(x) - xlnx(1.0 - x) + x * ((q - 1) as f64).ln()
}

/// One term `a ln(a / b)` of a divergence, with `0 ln(0/b) = 0` and
/// `a ln(a/0) = +inf` for `a > 0`.
fn div_term(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        f64::INFINITY
    } else {
        a * (a / b).ln()
    }
}

/// Binary information divergence `D(x || y)`.
pub fn divergence(x: f64, y: f64) -> f64 {
    div_term(x, y) + div_term(1.0 - x, 1.0 - y)
}

/// Divergence with the complements supplied separately, for accuracy near 1.
fn divergence_split(x: f64, one_minus_x: f64, y: f64, one_minus_y: f64) -> f64 {
    div_term(x, y) + div_term(one_minus_x, one_minus_y)
}

/// `z = 1 - q x / (q - 1)`.
pub fn z_of_x(q: u32, x: f64) -> f64 {
    let q = q as f64;
    1.0 - q * x / (q - 1.0)
}

/// `x = (q - 1)(1 - z) / q`.
pub fn x_of_z(q: u32, z: f64) -> f64 {
    let q = q as f64;
    (q - 1.0) * (1.0 - z) / q
}

/// `1 - x` for `x = x_of_z(z)`, computed as `(1 + (q-1) z) / q`.
fn one_minus_x_of_z(q: u32, z: f64) -> f64 {
    let q = q as f64;
    (1.0 + (q - 1.0) * z) / q
}

fn binary_odd(q: u32, d: u32) -> bool {
    q == 2 && d % 2 == 1
}

/// Right end of the finite domain of `delta` and `omega`.
pub fn x1(q: u32, d: u32) -> f64 {
    if binary_odd(q, d) {
        1.0 - 1.0 / d as f64
    } else {
        1.0
    }
}

/// Left end of the range of `zeta` on `[-1/(q-1), 1]`.
pub fn z1(q: u32, d: u32) -> f64 {
    if binary_odd(q, d) {
        2.0 / d as f64 - 1.0
    } else {
        -1.0 / (q - 1) as f64
    }
}

/// `sum_{i<m} a^i`.
fn geometric(a: f64, m: u32) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for _ in 0..m {
        acc += p;
        p *= a;
    }
    acc
}

/// `ln(1 - z^m)` for `|z| <= 1`, factored through `1 - a` to avoid cancellation.
fn ln_one_minus_pow(z: f64, m: u32) -> f64 {
    if m % 2 == 0 || z >= 0.0 {
        let a = z.abs();
        (1.0 - a).ln() + geometric(a, m).ln()
    } else {
        (-z).powi(m as i32).ln_1p()
    }
}

/// `ln(1 + k z^m)`; the case `k = 1`, odd `m`, `z < 0` goes through
/// [`ln_one_minus_pow`].
fn ln_one_plus_pow(k: f64, z: f64, m: u32) -> f64 {
    if k == 1.0 && z < 0.0 && m % 2 == 1 {
        ln_one_minus_pow(-z, m)
    } else if m == 1 {
        (1.0 + k * z).ln()
    } else {
        (k * z.powi(m as i32)).ln_1p()
    }
}

/// `1 + k z^m` evaluated like [`ln_one_plus_pow`].
fn one_plus_pow(k: f64, z: f64, m: u32) -> f64 {
    if k == 1.0 && z < 0.0 && m % 2 == 1 {
        let a = -z;
        (1.0 - a) * geometric(a, m)
    } else {
        1.0 + k * z.powi(m as i32)
    }
}

/// `rho_{q,d}(x) = ln(1 + (q-1) z^d)`, `-inf` where the argument vanishes.
pub fn rho(q: u32, d: u32, x: f64) -> f64 {
    rho_z(q, d, z_of_x(q, x))
}

fn rho_z(q: u32, d: u32, z: f64) -> f64 {
    ln_one_plus_pow((q - 1) as f64, z, d)
}

/// `1 - zeta(zhat) = (1 - zhat)^2 (1 + ... + zhat^(d-2)) / (1 + (q-1) zhat^d)`.
fn one_minus_zeta(q: u32, d: u32, zh: f64) -> f64 {
    let u = 1.0 - zh;
    u * u * geometric(zh, d - 1) / one_plus_pow((q - 1) as f64, zh, d)
}

/// `1 + (q-1) zeta(zhat) = (1 + (q-1) zhat)(1 + (q-1) zhat^(d-1)) / (1 + (q-1) zhat^d)`.
fn one_plus_qm1_zeta(q: u32, d: u32, zh: f64) -> f64 {
    let k = (q - 1) as f64;
    if binary_odd(q, d) && zh < 0.0 {
        // (1 + zh) cancels against 1 + zh^d
        let a = -zh;
        let s: f64 = geometric(a, d);
        one_plus_pow(1.0, zh, d - 1) / s
    } else {
        (1.0 + k * zh) * one_plus_pow(k, zh, d - 1) / one_plus_pow(k, zh, d)
    }
}

/// `zeta_{q,d}(zhat)` on `[-1/(q-1), 1]`, including the removable singularity
/// at `zhat = -1` for `q = 2`, odd `d`.
pub fn zeta(q: u32, d: u32, zh: f64) -> f64 {
    if zh >= 0.0 {
        1.0 - one_minus_zeta(q, d, zh)
    } else {
        (one_plus_qm1_zeta(q, d, zh) - 1.0) / (q - 1) as f64
    }
}

/// `zeta(zhat) - zhat = zhat^(d-1) (1 - zhat)(1 + (q-1) zhat) / (1 + (q-1) zhat^d)`.
pub fn zeta_gap(q: u32, d: u32, zh: f64) -> f64 {
    let k = (q - 1) as f64;
    let lead = zh.powi(d as i32 - 1) * (1.0 - zh);
    if binary_odd(q, d) && zh < 0.0 {
        lead / geometric(-zh, d)
    } else {
        lead * (1.0 + k * zh) / (1.0 + k * zh.powi(d as i32))
    }
}

/// Derivative of `zeta`: `f(zhat) / (1 + (q-1) zhat^d)^2`.
pub fn zeta_prime(q: u32, d: u32, zh: f64) -> f64 {
    let (k, df) = ((q - 1) as f64, d as f64);
    let di = d as i32;
    let f = 1.0 + (df - 1.0) * zh.powi(di - 2) + (q as f64 - 2.0) * df * zh.powi(di - 1)
        - k * (df - 1.0) * zh.powi(di)
        - k * zh.powi(2 * di - 2);
    let den = 1.0 + k * zh.powi(di);
    f / (den * den)
}

/// Residual of the stationary equation with the sign of `zeta(zhat) - z`,
/// written in whichever factored form is accurate for the target `x`.
fn stationary_residual(q: u32, d: u32, x: f64, zh: f64) -> f64 {
    let qf = q as f64;
    if x <= 1.0 - 1.0 / qf {
        // (1 - z) - (1 - zeta)
        qf * x / (qf - 1.0) - one_minus_zeta(q, d, zh)
    } else {
        // (1 + (q-1) zeta) - (1 + (q-1) z)
        one_plus_qm1_zeta(q, d, zh) - qf * (1.0 - x)
    }
}

fn zhat_bracket(q: u32, d: u32, z: f64) -> Result<(f64, f64)> {
    let zmin = -1.0 / (q - 1) as f64;
    let lo_z = z1(q, d);
    if z > 1.0 || z < lo_z && !close(z, lo_z) {
        return Err(Error::domain(format!(
            "no solution of zeta(zhat) = {z}: z must lie in [{lo_z}, 1]"
        )));
    }
    Ok(if close(z, lo_z) || z <= lo_z {
        (zmin, zmin)
    } else if z < 0.0 {
        if d % 2 == 1 {
            (zmin, z)
        } else {
            (z, 0.0)
        }
    } else if z == 0.0 {
        (0.0, 0.0)
    } else if z < 1.0 {
        (0.0, z)
    } else {
        (1.0, 1.0)
    })
}

/// Unique `zhat1` in `[-1/(q-1), 1]` with `zeta(zhat1) = z`.
pub fn solve_zhat1(q: u32, d: u32, z: f64) -> Result<f64> {
    check_q(q)?;
    if d < 2 {
        return Err(Error::param(format!("zeta is monotone only for d >= 2 (got {d})")));
    }
    let x = x_of_z(q, z);
    solve_zhat1_at(q, d, z, x)
}

fn solve_zhat1_at(q: u32, d: u32, z: f64, x: f64) -> Result<f64> {
    let (lo, hi) = zhat_bracket(q, d, z)?;
    if lo == hi {
        return Ok(lo);
    }
    let root = bisect(
        |zh| stationary_residual(q, d, x, zh),
        lo,
        hi,
        RootConfig::exhaustive(),
    )
    // the bracket endpoints can sit a rounding error off the sign change
    .unwrap_or_else(|| {
        let (rl, rh) = (
            stationary_residual(q, d, x, lo).abs(),
            stationary_residual(q, d, x, hi).abs(),
        );
        if rl <= rh {
            lo
        } else {
            hi
        }
    });
    Ok(root)
}

/// `delta_{q,d}(x, xhat) = d D(x || xhat) + rho(xhat)`.
pub fn delta_two_arg(q: u32, d: u32, x: f64, xhat: f64) -> Result<f64> {
    check_q(q)?;
    check_unit(x)?;
    if !(xhat > 0.0 && xhat < 1.0) {
        return Err(Error::param(format!("xhat = {xhat} must lie in (0, 1)")));
    }
    Ok(d as f64 * divergence(x, xhat) + rho(q, d, xhat))
}

/// Evaluation of `delta` at one point together with its minimiser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaEval {
    pub x: f64,
    pub z: f64,
    pub zhat1: f64,
    pub xhat1: f64,
    #[serde(serialize_with = "crate::real::serialize")]
    pub delta: f64,
}

/// `delta_{q,d}(x)` for `d >= 3`.
pub fn delta(q: u32, d: u32, x: f64) -> Result<DeltaEval> {
    check_q(q)?;
    if d < 3 {
        return Err(Error::param(format!("delta needs d >= 3 (got d = {d})")));
    }
    check_unit(x)?;
    let qf = q as f64;
    let zmin = -1.0 / (qf - 1.0);
    let right = x1(q, d);
    let z = z_of_x(q, x);
    let at_left = |v: f64| DeltaEval {
        x,
        z,
        zhat1: 1.0,
        xhat1: 0.0,
        delta: v,
    };
    let at_right = |v: f64| DeltaEval {
        x,
        z,
        zhat1: zmin,
        xhat1: 1.0,
        delta: v,
    };

    if x == 0.0 || x < ENDPOINT_WINDOW {
        return Ok(at_left(qf.ln()));
    }
    if x == 1.0 {
        return Ok(at_right(rho(q, d, 1.0)));
    }
    if binary_odd(q, d) {
        let df = d as f64;
        if close(x, right) || (x > right - ENDPOINT_WINDOW && x < right) {
            return Ok(at_right((2.0 * df).ln() - df * entropy_q(1.0 / df, 2)));
        }
        if x > right {
            return Ok(at_right(f64::NEG_INFINITY));
        }
    } else if x > 1.0 - ENDPOINT_WINDOW {
        return Ok(at_right(rho(q, d, 1.0)));
    }

    let zh = solve_zhat1_at(q, d, z, x)?;
    let xhat = x_of_z(q, zh);
    let one_minus_xhat = one_minus_x_of_z(q, zh);
    let value = d as f64 * divergence_split(x, 1.0 - x, xhat, one_minus_xhat) + rho_z(q, d, zh);
    Ok(DeltaEval {
        x,
        z,
        zhat1: zh,
        xhat1: xhat,
        delta: value,
    })
}

/// `omega` together with its first derivative (absent where `omega = -inf`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub x: f64,
    #[serde(serialize_with = "crate::real::serialize")]
    pub omega: f64,
    #[serde(serialize_with = "crate::real::serialize_option")]
    pub domega: Option<f64>,
}

fn check_cd(c: u32, d: u32) -> Result<()> {
    if c == 0 {
        return Err(Error::param("c must be at least 1"));
    }
    if d < 2 {
        return Err(Error::param(format!("growth rate needs d >= 2 (got d = {d})")));
    }
    Ok(())
}

/// Derivative in terms of `zhat1`:
/// `ln{ (1+(q-1)zh)/(1-zh) * [(1-zh^(d-1))/(1+(q-1)zh^(d-1))]^(c-1) }`.
pub fn domega_from_zhat(q: u32, c: u32, d: u32, zh: f64) -> f64 {
    let k = (q - 1) as f64;
    let cm1 = c as f64 - 1.0;
    let lead = ln_one_plus_pow(k, zh, 1);
    let tail = -cm1 * ln_one_plus_pow(k, zh, d - 1);
    if zh >= 0.0 {
        // (1 - zh^(d-1)) / (1 - zh) = 1 + zh + ... + zh^(d-2)
        let mid = (c as f64 - 2.0) * (1.0 - zh).ln() + cm1 * geometric(zh, d - 1).ln();
        let mid = if c == 2 { cm1 * geometric(zh, d - 1).ln() } else { mid };
        lead + mid + tail
    } else {
        lead - (1.0 - zh).ln() + cm1 * ln_one_minus_pow(zh, d - 1) + tail
    }
}

/// Limits of `domega/dx` at `0+` and `x1-`.
fn domega_left_limit(c: u32, d: u32) -> f64 {
    match c {
        1 => f64::INFINITY,
        2 => ((d - 1) as f64).ln(),
        _ => f64::NEG_INFINITY,
    }
}

fn domega_right_limit(q: u32, c: u32, d: u32) -> f64 {
    if q == 2 && d % 2 == 0 {
        match c {
            1 => f64::NEG_INFINITY,
            2 => -((d - 1) as f64).ln(),
            _ => f64::INFINITY,
        }
    } else {
        f64::NEG_INFINITY
    }
}

/// `omega_{q,c,d}(x) = H_q(x) + (c/d)(delta(x) - ln q)` with its derivative.
///
/// For `d = 2` the closed form `(1 - c/2) H_q(x)` is used.
pub fn omega(q: u32, c: u32, d: u32, x: f64) -> Result<GrowthPoint> {
    check_q(q)?;
    check_cd(c, d)?;
    check_unit(x)?;
    if d == 2 {
        let s = 1.0 - c as f64 / 2.0;
        let slope = if x == 0.0 {
            s * f64::INFINITY
        } else if x == 1.0 {
            -s * f64::INFINITY
        } else {
            s * (((1.0 - x) / x).ln() + ((q - 1) as f64).ln())
        };
        return Ok(GrowthPoint {
            x,
            omega: s * entropy_q(x, q),
            domega: Some(if s == 0.0 { 0.0 } else { slope }),
        });
    }
    let de = delta(q, d, x)?;
    let ratio = c as f64 / d as f64;
    let value = entropy_q(x, q) + ratio * (de.delta - (q as f64).ln());
    Ok(GrowthPoint {
        x,
        omega: value,
        domega: domega_at(q, c, d, x, &de),
    })
}

fn domega_at(q: u32, c: u32, d: u32, x: f64, de: &DeltaEval) -> Option<f64> {
    let right = x1(q, d);
    if x > right && !close(x, right) {
        return None;
    }
    if x < ENDPOINT_WINDOW {
        return Some(domega_left_limit(c, d));
    }
    if close(x, right) || x > right - ENDPOINT_WINDOW {
        return Some(domega_right_limit(q, c, d));
    }
    Some(domega_from_zhat(q, c, d, de.zhat1))
}

/// Just the value of `omega`.
pub fn omega_value(q: u32, c: u32, d: u32, x: f64) -> Result<f64> {
    Ok(omega(q, c, d, x)?.omega)
}

/// `d omega / dx`; at `0` and `x1` the one-sided limits are returned.
pub fn domega(q: u32, c: u32, d: u32, x: f64) -> Result<f64> {
    let point = omega(q, c, d, x)?;
    point.domega.ok_or_else(|| {
        Error::domain(format!(
            "omega is -inf at x = {x}; the derivative is undefined there"
        ))
    })
}

/// Both closed forms of the first derivative at an interior point:
/// `(form in x and xhat1, form in zhat1)`.
pub fn domega_forms(q: u32, c: u32, d: u32, x: f64) -> Result<(f64, f64)> {
    check_cd(c, d)?;
    let de = delta(q, d, x)?;
    let right = x1(q, d);
    if !(x > 0.0 && x < right) {
        return Err(Error::domain(format!("x = {x} is not interior to (0, {right})")));
    }
    let (cf, xh) = (c as f64, de.xhat1);
    let one_minus_xh = one_minus_x_of_z(q, de.zhat1);
    let in_x = (cf - 1.0) * (x.ln() - (1.0 - x).ln())
        + cf * (one_minus_xh.ln() - xh.ln())
        + ((q - 1) as f64).ln();
    Ok((in_x, domega_from_zhat(q, c, d, de.zhat1)))
}

/// `xi_{q,c,d}` coefficients, constant term first (degree `2d - 3`).
pub fn xi_coefficients(q: u32, c: u32, d: u32) -> Vec<i64> {
    let (q, c, d) = (q as i64, c as i64, d as i64);
    let k = (c - 1) * (d - 1) - 1;
    let mut coeffs = vec![0i64; (2 * d - 2) as usize];
    for i in 0..=(d - 3) {
        coeffs[i as usize] = 1;
    }
    coeffs[(d - 2) as usize] = -k;
    coeffs[(d - 1) as usize] = -(q - 1) * k;
    for i in d..=(2 * d - 3) {
        coeffs[i as usize] = q - 1;
    }
    coeffs
}

/// `xi_{q,c,d}(zhat)`, whose sign fixes the convexity of `omega`.
pub fn xi(q: u32, c: u32, d: u32, zh: f64) -> f64 {
    xi_coefficients(q, c, d)
        .iter()
        .rev()
        .fold(0.0, |acc, &a| acc * zh + a as f64)
}

/// Second derivative of `omega` through the chain rule in `zhat1`.
pub fn d2omega(q: u32, c: u32, d: u32, x: f64) -> Result<f64> {
    check_cd(c, d)?;
    if d < 3 {
        return Err(Error::param("second derivative via zhat1 needs d >= 3"));
    }
    let de = delta(q, d, x)?;
    let right = x1(q, d);
    if !(x >= ENDPOINT_WINDOW && x <= right - ENDPOINT_WINDOW) {
        return Err(Error::domain(format!("x = {x} is not interior to (0, {right})")));
    }
    let (qf, k) = (q as f64, (q - 1) as f64);
    let zh = de.zhat1;
    let inner = qf * xi(q, c, d, zh)
        / ((1.0 - zh.powi(d as i32 - 1)) * (1.0 + k * zh) * (1.0 + k * zh.powi(d as i32 - 1)));
    let dzh_dx = -qf / (k * zeta_prime(q, d, zh));
    Ok(inner * dzh_dx)
}

/// Samples `omega` on the given abscissae, in order.
pub fn omega_curve(q: u32, c: u32, d: u32, xs: &[f64]) -> Result<Vec<GrowthPoint>> {
    xs.par_iter().map(|&x| omega(q, c, d, x)).collect()
}

/// Samples `delta` on the given abscissae, in order.
pub fn delta_curve(q: u32, d: u32, xs: &[f64]) -> Result<Vec<DeltaEval>> {
    xs.par_iter().map(|&x| delta(q, d, x)).collect()
}

/// Residuals of the landmark equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandmarkResiduals {
    pub omega_x0: Option<f64>,
    pub domega_x3: Option<f64>,
    pub xi_zhat2: Option<f64>,
}

/// Distinguished points of `omega`. Fields that are not defined for the
/// given `(q, c, d)` are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Landmarks {
    pub q: u32,
    pub c: u32,
    pub d: u32,
    /// Right end of the finite domain.
    pub x1: f64,
    /// Unique zero of `omega` in `(0, 1 - 1/q]` (`c >= 3`).
    pub x0: Option<f64>,
    /// Inflection point: convex on `(0, x2)`, concave after.
    pub x2: Option<f64>,
    /// Minimiser of `omega` on `(0, 1 - 1/q)` (`c >= 3`).
    pub x3: Option<f64>,
    /// Zero of `xi` in `(0, 1)`, the image of `x2`.
    pub zhat2: Option<f64>,
    /// Second zero of `xi`, in `(-1, 0)`, for `q = 2`, even `d`, `c >= 3`.
    pub zhat2_neg: Option<f64>,
    /// Left end of the range of `zeta`.
    pub z1: f64,
    pub residuals: LandmarkResiduals,
}

/// Computes `x1, x0, x2, x3, zhat2` by bisection.
pub fn landmarks(q: u32, c: u32, d: u32) -> Result<Landmarks> {
    check_q(q)?;
    if c == 0 || d < 3 || d < c {
        return Err(Error::param(format!(
            "landmarks are not defined for this regime: need d >= max(c, 3), c >= 1 (got c = {c}, d = {d})"
        )));
    }
    let cfg = RootConfig::exhaustive();
    let mid = 1.0 - 1.0 / q as f64;
    let xi_f = |z: f64| xi(q, c, d, z);

    let zhat2 = if c >= 3 {
        bisect(xi_f, 1e-12, 1.0 - 1e-12, cfg)
    } else if c == 2 && q >= 3 {
        if xi_f(1.0 - 1e-6) < 0.0 {
            bisect(xi_f, 1e-12, 1.0 - 1e-6, cfg)
        } else {
            Some(1.0)
        }
    } else {
        None
    };
    let zhat2_neg = if q == 2 && d % 2 == 0 && c >= 3 {
        bisect(xi_f, -1.0 + 1e-12, -1e-12, cfg)
    } else {
        None
    };
    let x2 = zhat2.map(|zh| x_of_z(q, zeta(q, d, zh)));

    let slope = |x: f64| domega(q, c, d, x).unwrap_or(f64::NAN);
    let x3 = match (c >= 3, x2) {
        (true, Some(hi)) => bisect(slope, 0.0, hi, cfg),
        _ => None,
    };
    let x0 = match x3 {
        Some(lo) if c == d => {
            let _ = lo;
            Some(mid)
        }
        Some(lo) => bisect(|x| omega_value(q, c, d, x).unwrap_or(f64::NAN), lo, mid, cfg),
        None => None,
    };

    let residuals = LandmarkResiduals {
        omega_x0: x0.map(|x| omega_value(q, c, d, x).unwrap_or(f64::NAN)),
        domega_x3: x3.map(slope),
        xi_zhat2: zhat2.map(xi_f),
    };
    Ok(Landmarks {
        q,
        c,
        d,
        x1: x1(q, d),
        x0,
        x2,
        x3,
        zhat2,
        zhat2_neg,
        z1: z1(q, d),
        residuals,
    })
}

/// Relative distance `x` in `(0, 1 - 1/q]` with `H_q(x) = r ln q`.
pub fn gv_threshold(q: u32, r: f64) -> Result<f64> {
    check_q(q)?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param(format!("rate r = {r} must lie in (0, 1]")));
    }
    let mid = 1.0 - 1.0 / q as f64;
    if r == 1.0 {
        return Ok(mid);
    }
    let target = r * (q as f64).ln();
    bisect(
        |x| entropy_q(x, q) - target,
        0.0,
        mid,
        RootConfig::exhaustive(),
    )
    .ok_or_else(|| Error::domain("no Gilbert-Varshamov root bracketed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_and_divergence() {
        assert_abs_diff_eq!(entropy_q(0.5, 2), LN_2, epsilon = 1e-15);
        for q in 2..=9 {
            let x = 1.0 - 1.0 / q as f64;
            assert_abs_diff_eq!(entropy_q(x, q), (q as f64).ln(), epsilon = 1e-14);
            assert_eq!(entropy_q(0.0, q), 0.0);
        }
        assert_eq!(divergence(0.3, 0.3), 0.0);
        assert_eq!(divergence(0.3, 0.0), f64::INFINITY);
        assert_eq!(divergence(0.0, 0.0), 0.0);
        assert_eq!(divergence(0.3, 1.0), f64::INFINITY);
    }

    #[test]
    fn rho_values() {
        for (q, d) in [(2, 3), (2, 6), (3, 5), (4, 4)] {
            assert_abs_diff_eq!(rho(q, d, 0.0), (q as f64).ln(), epsilon = 1e-15);
            assert_abs_diff_eq!(rho(q, d, 1.0 - 1.0 / q as f64), 0.0, epsilon = 1e-15);
        }
        assert_eq!(rho(2, 5, 1.0), f64::NEG_INFINITY);
        assert_abs_diff_eq!(rho(3, 6, 1.0), (33.0f64 / 32.0).ln(), epsilon = 1e-15);
    }

    #[test]
    fn zeta_special_values() {
        for (q, d) in [(2, 3), (2, 6), (3, 5), (4, 4), (5, 7)] {
            assert_eq!(zeta(q, d, 0.0), 0.0);
            assert_eq!(zeta(q, d, 1.0), 1.0);
            let zmin = -1.0 / (q - 1) as f64;
            assert_abs_diff_eq!(zeta(q, d, zmin), z1(q, d), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(zeta(2, 5, -1.0), -0.6, epsilon = 1e-15);
    }

    #[test]
    fn solve_zhat1_special_points() {
        assert_eq!(solve_zhat1(3, 4, 0.0).unwrap(), 0.0);
        assert_eq!(solve_zhat1(3, 4, 1.0).unwrap(), 1.0);
        assert_eq!(solve_zhat1(2, 5, -0.6).unwrap(), -1.0);
        assert!(matches!(solve_zhat1(2, 5, -0.7), Err(Error::Domain(_))));
        for z in [-0.4, -0.1, 0.2, 0.7, 0.99] {
            let zh = solve_zhat1(2, 5, z).unwrap();
            assert_abs_diff_eq!(zeta(2, 5, zh), z, epsilon = 1e-13);
        }
    }

    #[test]
    fn solve_zhat1_respects_bracket() {
        for (q, d) in [(2, 5), (2, 6), (3, 5), (3, 6)] {
            let lo = z1(q, d);
            for i in 1..100 {
                let z = lo + (1.0 - lo) * i as f64 / 100.0;
                let zh = solve_zhat1(q, d, z).unwrap();
                let zmin = -1.0 / (q - 1) as f64;
                if z > 0.0 {
                    assert!(zh > 0.0 && zh < z, "q={q} d={d} z={z} zh={zh}");
                } else if z < 0.0 && d % 2 == 1 {
                    assert!(zh > zmin && zh < z);
                } else if z < 0.0 {
                    assert!(zh > z && zh < 0.0);
                }
            }
        }
    }

    #[test]
    fn delta_two_arg_examples() {
        for x in [0.1, 0.4, 0.77] {
            assert_abs_diff_eq!(delta_two_arg(3, 5, x, x).unwrap(), rho(3, 5, x), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(delta_two_arg(2, 4, 0.5, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        let expected = 6.0 * divergence(0.2, 0.3) + rho(2, 6, 0.3);
        assert_abs_diff_eq!(delta_two_arg(2, 6, 0.2, 0.3).unwrap(), expected, epsilon = 1e-15);
        assert!(delta_two_arg(2, 6, 0.2, 1.0).is_err());
    }

    #[test]
    fn delta_endpoint_cases() {
        for (q, d) in [(2, 5), (2, 6), (3, 5), (3, 6)] {
            assert_eq!(delta(q, d, 0.0).unwrap().delta, (q as f64).ln());
            assert_eq!(delta(q, d, 1.0).unwrap().delta, rho(q, d, 1.0));
            let m = 1.0 - 1.0 / q as f64;
            assert_abs_diff_eq!(delta(q, d, m).unwrap().delta, 0.0, epsilon = 1e-14);
        }
        let expected = 10f64.ln() - 5.0 * entropy_q(0.2, 2);
        assert_abs_diff_eq!(delta(2, 5, 0.8).unwrap().delta, expected, epsilon = 1e-12);
        assert_eq!(delta(2, 5, 0.9).unwrap().delta, f64::NEG_INFINITY);
        assert!(matches!(delta(2, 2, 0.3), Err(Error::Parameter(_))));
    }

    #[test]
    fn delta_is_below_grid_of_two_argument_values() {
        let best = delta(2, 6, 0.3).unwrap();
        for i in 1..10_000 {
            let xh = i as f64 / 10_000.0;
            let v = delta_two_arg(2, 6, 0.3, xh).unwrap();
            assert!(best.delta <= v + 1e-13, "xhat={xh}: {} > {v}", best.delta);
        }
    }

    #[test]
    fn omega_special_values() {
        assert_eq!(omega_value(2, 3, 6, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(omega_value(2, 3, 6, 0.5).unwrap(), 0.5 * LN_2, epsilon = 1e-14);
        let expected = -2.0 * entropy_q(0.2, 2) + 0.6 * 5f64.ln();
        assert_abs_diff_eq!(omega_value(2, 3, 5, 0.8).unwrap(), expected, epsilon = 1e-12);
        assert_eq!(omega_value(2, 3, 5, 0.9).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn domega_limits() {
        assert_abs_diff_eq!(domega(2, 3, 6, 0.5).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(domega(3, 3, 6, 2.0 / 3.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(domega(2, 2, 6, 0.0).unwrap(), 5f64.ln(), epsilon = 1e-15);
        assert_eq!(domega(2, 3, 6, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(domega(2, 3, 6, 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(domega(3, 1, 5, 1.0).unwrap(), f64::NEG_INFINITY);
        assert!(domega(2, 3, 5, 0.9).is_err());
    }

    #[test]
    fn domega_matches_central_difference() {
        let h = 1e-5;
        let x = 0.2;
        let fd = (omega_value(2, 3, 6, x + h).unwrap() - omega_value(2, 3, 6, x - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(domega(2, 3, 6, x).unwrap(), fd, epsilon = 1e-6);
    }

    #[test]
    fn xi_values() {
        for (q, c, d) in [(2, 3, 6), (3, 3, 5), (4, 2, 7)] {
            assert_eq!(xi(q, c, d, 0.0), 1.0);
            let expected = -(q as f64) * (c as f64 - 2.0) * (d as f64 - 1.0);
            assert_abs_diff_eq!(xi(q, c, d, 1.0), expected, epsilon = 1e-12);
        }
        for d in 3..=8 {
            for i in 1..1000 {
                let z = -1.0 + 2.0 * i as f64 / 1000.0;
                assert!(xi(2, 2, d, z) > 0.0, "d={d} z={z}");
            }
        }
    }

    #[test]
    fn landmark_regimes() {
        let lm = landmarks(2, 3, 3).unwrap();
        assert_eq!(lm.x0, Some(0.5));
        let lm = landmarks(2, 2, 6).unwrap();
        assert!(lm.x0.is_none() && lm.x3.is_none() && lm.x2.is_none());
        let lm = landmarks(3, 2, 6).unwrap();
        assert!(lm.x2.is_some() && lm.x0.is_none());
        assert!(landmarks(2, 4, 3).is_err());
        let lm = landmarks(2, 3, 6).unwrap();
        assert!(lm.zhat2_neg.unwrap() < 0.0);
    }

    #[test]
    fn gv_threshold_values() {
        assert_eq!(gv_threshold(3, 1.0).unwrap(), 1.0 - 1.0 / 3.0);
        let x = gv_threshold(2, 0.5).unwrap();
        assert!((entropy_q(x, 2) - 0.5 * LN_2).abs() < 1e-12);
        assert!(gv_threshold(2, 0.3).unwrap() < x);
        assert!(gv_threshold(2, 0.0).is_err());
        assert!(gv_threshold(2, 1.5).is_err());
    }
}
