//! Exact ensemble-average weight distributions.
//!
//! The average number of weight-`l` codewords in the `(c, d)`-regular ensemble
//! of length `n` over GF(q) is
//!
//! ```text
//! E[A(l)] = C(n, l) * A(cn/d, cl) / ( C(cn, cl) * (q-1)^((c-1) l) )
//! ```
//!
//! where `A(N, m)` is the coefficient of `x^m` in
//! `q^-N * ((1 + (q-1) x)^d + (q-1) (1-x)^d)^N`. Every value is carried as an
//! exact rational; floating point only appears in logarithms and fits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::is_prime_power;
use crate::growth;

/// Default upper limit on the block length for exact spectra.
pub const DEFAULT_N_CAP: u32 = 2000;

/// Parameters `(q, c, d, n)` of a regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EnsembleParams {
    pub q: u32,
    pub c: u32,
    pub d: u32,
    pub n: u32,
}

impl EnsembleParams {
    pub fn new(q: u32, c: u32, d: u32, n: u32) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::param(format!("q = {q} is not a prime power")));
        }
        if c == 0 || d == 0 || n == 0 {
            return Err(Error::param(format!(
                "c, d and n must be positive (got c = {c}, d = {d}, n = {n})"
            )));
        }
        if (c as u64 * n as u64) % d as u64 != 0 {
            return Err(Error::param(format!(
                "d = {d} does not divide c*n = {}",
                c as u64 * n as u64
            )));
        }
        Ok(EnsembleParams { q, c, d, n })
    }

    /// Number of edges (sockets on either side).
    pub fn sockets(&self) -> u64 {
        self.c as u64 * self.n as u64
    }

    /// Number of check nodes, `cn/d`.
    pub fn checks(&self) -> u64 {
        self.sockets() / self.d as u64
    }
}

/// `C(n, k)` by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `B(i) = ((q-1)^i + (-1)^i (q-1)) / q`: the number of vectors in
/// `(GF(q)*)^i` whose entries sum to zero.
pub fn check_weight_factor(q: u32, i: u32) -> BigUint {
    let qm1 = BigInt::from(q - 1);
    let sign = if i % 2 == 0 { 1 } else { -1 };
    let num = qm1.pow(i) + BigInt::from(sign) * &qm1;
    let (quot, rem) = num.div_rem(&BigInt::from(q));
    assert!(rem.is_zero(), "B({i}) is not integral for q = {q}");
    quot.to_biguint().expect("B(i) is nonnegative")
}

/// Coefficients `A(N, m)` for `m = 0..=M` of the `N`-th power of the
/// single-check generating polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckCoeffTable {
    pub checks: u64,
    pub coeffs: Vec<BigUint>,
}

/// Builds `A(N, 0..=M)` with `A(N+1, m) = sum_i C(d,i) B(i) A(N, m-i)`,
/// keeping only indices up to `M`.
pub fn check_coeffs(q: u32, d: u32, checks: u64, max_index: usize) -> Result<CheckCoeffTable> {
    if !is_prime_power(q) {
        return Err(Error::param(format!("q = {q} is not a prime power")));
    }
    if d == 0 || checks == 0 {
        return Err(Error::param("d and the number of checks must be positive"));
    }
    let step: Vec<(usize, BigUint)> = (0..=d)
        .map(|i| (i as usize, binomial(d as u64, i as u64) * check_weight_factor(q, i)))
        .filter(|(_, v)| !v.is_zero())
        .collect();

    let mut coeffs = vec![BigUint::zero(); max_index + 1];
    coeffs[0] = BigUint::one();
    let mut degree = 0usize;
    for _ in 0..checks {
        degree = (degree + d as usize).min(max_index);
        for m in (0..=degree).rev() {
            let mut acc = BigUint::zero();
            for (i, w) in &step {
                if *i > m {
                    break;
                }
                let prev = &coeffs[m - i];
                if !prev.is_zero() {
                    acc += w * prev;
                }
            }
            coeffs[m] = acc;
        }
    }
    Ok(CheckCoeffTable { checks, coeffs })
}

/// Exact `E[A(l)]` for `l = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    pub params: EnsembleParams,
    pub values: Vec<BigRational>,
}

impl SpectrumTable {
    /// Sum of all entries: the expected code size.
    pub fn total(&self) -> BigRational {
        self.values
            .iter()
            .fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn approx(&self) -> Vec<f64> {
        self.values.iter().map(rational_to_f64).collect()
    }
}

fn check_cap(params: &EnsembleParams, n_cap: u32) -> Result<()> {
    if params.n > n_cap {
        Err(Error::capacity(format!(
            "n = {} exceeds the exact-spectrum cap of {n_cap}",
            params.n
        )))
    } else {
        Ok(())
    }
}

fn assemble(
    n_choose_l: BigUint,
    coeff: &BigUint,
    cn_choose_cl: &BigUint,
    qm1_pow: BigUint,
) -> BigRational {
    if coeff.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(
        BigInt::from(n_choose_l * coeff),
        BigInt::from(cn_choose_cl * qm1_pow),
    )
}

/// Exact average weight distribution of the ensemble.
pub fn avg_weight_distribution(params: &EnsembleParams, n_cap: u32) -> Result<SpectrumTable> {
    check_cap(params, n_cap)?;
    let EnsembleParams { q, c, n, .. } = *params;
    let cn = params.sockets();
    let table = check_coeffs(q, params.d, params.checks(), cn as usize)?;

    let mut n_row = Vec::with_capacity(n as usize + 1);
    let mut b = BigUint::one();
    for l in 0..=n as u64 {
        n_row.push(b.clone());
        b = b * (n as u64 - l) / (l + 1);
    }
    let mut cn_row = Vec::with_capacity(cn as usize + 1);
    let mut b = BigUint::one();
    for j in 0..=cn {
        cn_row.push(b.clone());
        if j < cn {
            b = b * (cn - j) / (j + 1);
        }
    }
    let qm1 = BigUint::from(q - 1);
    let values = (0..=n as usize)
        .into_par_iter()
        .map(|l| {
            let cl = c as usize * l;
            assemble(
                n_row[l].clone(),
                &table.coeffs[cl],
                &cn_row[cl],
                qm1.pow((c - 1) * l as u32),
            )
        })
        .collect();
    Ok(SpectrumTable {
        params: *params,
        values,
    })
}

/// Exact `E[A(l)]` for a single weight, building coefficients only up to `cl`.
pub fn avg_weight(params: &EnsembleParams, l: u32, n_cap: u32) -> Result<BigRational> {
    check_cap(params, n_cap)?;
    if l > params.n {
        return Err(Error::param(format!("l = {l} exceeds n = {}", params.n)));
    }
    let cl = params.c as u64 * l as u64;
    let table = check_coeffs(params.q, params.d, params.checks(), cl as usize)?;
    Ok(assemble(
        binomial(params.n as u64, l as u64),
        &table.coeffs[cl as usize],
        &binomial(params.sockets(), cl),
        BigUint::from(params.q - 1).pow((params.c - 1) * l),
    ))
}

/// Closed form for `d = 2`:
/// `C(n,l) C(cn/2, cl/2) / ((q-1)^((c/2-1) l) C(cn, cl))` when `cl` is even, else 0.
pub fn avg_weight_d2(params: &EnsembleParams) -> Result<SpectrumTable> {
    if params.d != 2 {
        return Err(Error::param(format!(
            "closed form requires d = 2 (got d = {})",
            params.d
        )));
    }
    let EnsembleParams { q, c, n, .. } = *params;
    let cn = params.sockets();
    let qm1 = BigInt::from(q - 1);
    let values = (0..=n as u64)
        .map(|l| {
            let cl = c as u64 * l;
            if cl % 2 == 1 {
                return BigRational::zero();
            }
            let num = BigInt::from(binomial(n as u64, l) * binomial(cn / 2, cl / 2));
            let den = BigInt::from(binomial(cn, cl));
            // exponent (c/2 - 1) l = (cl - 2l)/2, possibly negative
            let twice = cl as i64 - 2 * l as i64;
            let e = twice / 2;
            if e >= 0 {
                BigRational::new(num, den * qm1.pow(e as u32))
            } else {
                BigRational::new(num * qm1.pow((-e) as u32), den)
            }
        })
        .collect();
    Ok(SpectrumTable {
        params: *params,
        values,
    })
}

/// Natural log of a big unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("top 64 bits fit in u64");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a nonnegative rational; `-inf` for zero.
pub fn ln_rational(x: &BigRational) -> f64 {
    let num = x.numer().to_biguint().expect("nonnegative rational");
    let den = x.denom().to_biguint().expect("positive denominator");
    ln_biguint(&num) - ln_biguint(&den)
}

/// Nearest double to a big rational, including values whose numerator or
/// denominator alone would overflow.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.numer().sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
    sign * ln_rational(&x.abs()).exp()
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_biguint(&binomial(n, k))
}

/// `beta_n(l) = H2(l/n) - (1/n) ln C(n, l)`.
pub fn beta(n: u64, l: u64) -> Result<f64> {
    if n == 0 || l > n {
        return Err(Error::param(format!("beta needs 0 <= l <= n, n >= 1 (got n = {n}, l = {l})")));
    }
    if l == 0 || l == n {
        return Ok(0.0);
    }
    let x = l as f64 / n as f64;
    Ok(growth::entropy_q(x, 2) - ln_binomial(n, l) / n as f64)
}

/// Explicit two-sided bound on `beta_n(l)` for `0 < l < n` from Stirling's
/// formula `k! = sqrt(2 pi k) (k/e)^k e^{lambda_k}` with
/// `1/(12k+1) < lambda_k < 1/(12k)`.
pub fn beta_bounds(n: u64, l: u64) -> Result<(f64, f64)> {
    if l == 0 || l >= n {
        return Err(Error::param("beta_bounds needs 0 < l < n"));
    }
    let (nf, lf, mf) = (n as f64, l as f64, (n - l) as f64);
    let base = 0.5 * (lf * mf / nf).ln();
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let upper = base + half_ln_2pi + 1.0 / (12.0 * lf) + 1.0 / (12.0 * mf) - 1.0 / (12.0 * nf + 1.0);
    let lower = base + half_ln_2pi + 1.0 / (12.0 * lf + 1.0) + 1.0 / (12.0 * mf + 1.0) - 1.0 / (12.0 * nf);
    Ok((lower / nf, upper / nf))
}

/// Upper bound `omega(l/n) + c * beta_{cn}(cl)` on `(1/n) ln E[A(l)]`.
///
/// For `d = 2` the growth rate has the closed form `(1 - c/2) H_q(x)`.
pub fn log_avg_upper_bound(params: &EnsembleParams, l: u32) -> Result<f64> {
    if l > params.n {
        return Err(Error::param(format!("l = {l} exceeds n = {}", params.n)));
    }
    let EnsembleParams { q, c, d, n } = *params;
    let x = l as f64 / n as f64;
    let omega = growth::omega_value(q, c, d, x)?;
    Ok(omega + c as f64 * beta(params.sockets(), c as u64 * l as u64)?)
}

/// Why a small-weight average vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroReason {
    /// `c = 1` and `l = 1`.
    SingleEdgeWeightOne,
    /// `q = 2` and `cl` odd.
    OddBinaryWeight,
}

/// Outcome of [`small_weight_scaling`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmallWeightScaling {
    ExactZero {
        reason: ZeroReason,
        #[serde(skip)]
        values: Vec<(u32, BigRational)>,
    },
    Fit {
        slope: f64,
        intercept: f64,
        /// `-ceil((c-2) l / 2)`.
        predicted_exponent: i64,
        #[serde(skip)]
        values: Vec<(u32, BigRational)>,
    },
}

/// Predicted power of `n` for a constant weight `l >= 1`.
pub fn small_weight_exponent(c: u32, l: u32) -> i64 {
    let t = (c as i64 - 2) * l as i64;
    -Integer::div_ceil(&t, &2)
}

pub fn small_weight_zero_reason(q: u32, c: u32, l: u32) -> Option<ZeroReason> {
    if c == 1 && l == 1 {
        Some(ZeroReason::SingleEdgeWeightOne)
    } else if q == 2 && (c as u64 * l as u64) % 2 == 1 {
        Some(ZeroReason::OddBinaryWeight)
    } else {
        None
    }
}

/// Unweighted least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Exact `E[A(l)]` over `n_list` and the fitted slope of `ln E` against `ln n`.
pub fn small_weight_scaling(
    q: u32,
    c: u32,
    d: u32,
    l: u32,
    n_list: &[u32],
    n_cap: u32,
) -> Result<SmallWeightScaling> {
    if l == 0 {
        return Err(Error::param("weight l must be at least 1"));
    }
    if d < 3 {
        return Err(Error::param(format!("small-weight scaling needs d >= 3 (got {d})")));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("n_list must be strictly increasing"));
    }
    let values = n_list
        .iter()
        .map(|&n| {
            let params = EnsembleParams::new(q, c, d, n)?;
            if l > n {
                return Err(Error::param(format!("l = {l} exceeds n = {n}")));
            }
            Ok((n, avg_weight(&params, l, n_cap)?))
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(reason) = small_weight_zero_reason(q, c, l) {
        debug_assert!(values.iter().all(|(_, v)| v.is_zero()));
        return Ok(SmallWeightScaling::ExactZero { reason, values });
    }
    let points: Vec<(f64, f64)> = values
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(n, v)| ((*n as f64).ln(), ln_rational(v)))
        .collect();
    if points.len() < 3 {
        return Err(Error::param(format!(
            "need at least 3 points with E[A(l)] > 0 (got {})",
            points.len()
        )));
    }
    let (slope, intercept) = least_squares(&points);
    Ok(SmallWeightScaling::Fit {
        slope,
        intercept,
        predicted_exponent: small_weight_exponent(c, l),
        values,
    })
}
